#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "newslens/tensor_archive.hpp"
#include "newslens/token_matrix.hpp"
#include "newslens/tokenize.hpp"

namespace newslens {

// Geometry of a BERT-style encoder. A zero means "infer from the weight
// archive" for the table-sized fields (vocab_size, max_positions,
// type_vocab_size).
struct EncoderConfig {
    int num_layers = 12;
    int hidden_dim = 768;
    int num_heads = 12;
    int ffn_dim = 3072;
    int max_positions = 512;
    int vocab_size = 0;
    int type_vocab_size = 2;
    double layernorm_eps = 1e-12;
};

struct LayerNormParams {
    Eigen::VectorXd gamma;
    Eigen::VectorXd beta;
};

// Projection weights are stored input-major ([in, out]) and applied as
// y = x * W + b.
struct EncoderLayerWeights {
    Eigen::MatrixXd wq, wk, wv, wo;  // [D, D]
    Eigen::VectorXd bq, bk, bv, bo;  // [D]
    LayerNormParams attn_norm;
    Eigen::MatrixXd ffn_in;          // [D, F]
    Eigen::VectorXd ffn_in_bias;     // [F]
    Eigen::MatrixXd ffn_out;         // [F, D]
    Eigen::VectorXd ffn_out_bias;    // [D]
    LayerNormParams ffn_norm;
};

struct EncoderWeights {
    EncoderConfig config;
    Eigen::MatrixXd word_embedding;      // [V, D]
    Eigen::MatrixXd position_embedding;  // [P, D]
    Eigen::MatrixXd segment_embedding;   // [T, D]
    LayerNormParams embed_norm;
    std::vector<EncoderLayerWeights> layers;
};

// Tensor name schema inside an archive (i = 0 .. num_layers-1):
//   embeddings.word_embeddings                    [V, D]
//   embeddings.position_embeddings                [P, D]
//   embeddings.token_type_embeddings              [T, D]
//   embeddings.layer_norm.{gamma,beta}            [D]
//   encoder.layer.{i}.attention.{query,key,value,output}.weight  [D, D]
//   encoder.layer.{i}.attention.{query,key,value,output}.bias    [D]
//   encoder.layer.{i}.attention.layer_norm.{gamma,beta}          [D]
//   encoder.layer.{i}.ffn.intermediate.weight     [D, F]
//   encoder.layer.{i}.ffn.intermediate.bias       [F]
//   encoder.layer.{i}.ffn.output.weight           [F, D]
//   encoder.layer.{i}.ffn.output.bias             [D]
//   encoder.layer.{i}.ffn.layer_norm.{gamma,beta} [D]
//
// Throws FormatError naming the offending tensor on a missing tensor, a
// shape mismatch, or non-finite values.
EncoderWeights encoder_weights_from_tensors(const TensorMap& tensors,
                                            EncoderConfig config);
TensorMap encoder_weights_to_tensors(const EncoderWeights& weights);

EncoderWeights load_encoder_weights(const std::string& path,
                                    const EncoderConfig& config);
void save_encoder_weights(const std::string& path,
                          const EncoderWeights& weights);

// Per-position layer normalization over the feature dimension (biased
// variance), then the affine map x -> x_hat * gamma + beta.
Eigen::MatrixXd layer_norm_rows(const Eigen::MatrixXd& x,
                                const LayerNormParams& params, double eps);

// Exact erf-based GELU.
double gelu(double x);

// Per-layer, per-head attention probabilities captured during a forward pass.
struct AttentionTrace {
    // probs[layer][head] is L x L; row = query position, column = key.
    std::vector<std::vector<Eigen::MatrixXd>> probs;
};

// Embedding sum (word + position + segment) followed by layer norm. The
// returned mask is the attention mask of the input.
TokenMatrix encoder_embed(const EncodedSequence& ids,
                          const EncoderWeights& weights);

// One post-norm transformer block: multi-head self-attention with masked
// keys (a -1e9 additive mask before the softmax), residual + layer norm,
// then a GELU feed-forward with residual + layer norm.
TokenMatrix attention_layer(const TokenMatrix& x,
                            const EncoderLayerWeights& layer, int num_heads,
                            double eps,
                            std::vector<Eigen::MatrixXd>* head_probs = nullptr);

// embed + num_layers attention layers. Inference only; no dropout anywhere.
TokenMatrix encoder_forward(const EncodedSequence& ids,
                            const EncoderWeights& weights,
                            AttentionTrace* trace = nullptr);

}  // namespace newslens
