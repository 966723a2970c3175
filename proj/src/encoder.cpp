#include "newslens/encoder.hpp"

#include <cmath>

#include "newslens/common.hpp"

namespace newslens {

namespace {

constexpr double kMaskPenalty = -1e9;

std::string layer_prefix(int i) {
    return "encoder.layer." + std::to_string(i) + ".";
}

class TensorReader {
  public:
    explicit TensorReader(const TensorMap& tensors) : tensors_(tensors) {}

    Eigen::MatrixXd matrix(const std::string& name, std::int64_t rows,
                           std::int64_t cols) const {
        const Tensor& t = find(name);
        if (t.shape.size() != 2 ||
            (rows >= 0 && t.shape[0] != rows) ||
            (cols >= 0 && t.shape[1] != cols))
            throw FormatError("tensor '" + name + "': expected shape [" +
                              dim_str(rows) + ", " + dim_str(cols) + "], got " +
                              shape_str(t.shape));
        Eigen::MatrixXd m(t.shape[0], t.shape[1]);
        for (std::int64_t r = 0; r < t.shape[0]; ++r)
            for (std::int64_t c = 0; c < t.shape[1]; ++c)
                m(r, c) = check_finite(name, t.data[static_cast<std::size_t>(
                                                  r * t.shape[1] + c)]);
        return m;
    }

    Eigen::VectorXd vector(const std::string& name, std::int64_t size) const {
        const Tensor& t = find(name);
        if (t.shape.size() != 1 || t.shape[0] != size)
            throw FormatError("tensor '" + name + "': expected shape [" +
                              std::to_string(size) + "], got " +
                              shape_str(t.shape));
        Eigen::VectorXd v(size);
        for (std::int64_t i = 0; i < size; ++i)
            v[i] = check_finite(name, t.data[static_cast<std::size_t>(i)]);
        return v;
    }

  private:
    const Tensor& find(const std::string& name) const {
        auto it = tensors_.find(name);
        if (it == tensors_.end())
            throw FormatError("missing tensor '" + name + "'");
        return it->second;
    }
    static double check_finite(const std::string& name, float value) {
        if (!std::isfinite(value))
            throw FormatError("tensor '" + name + "' contains non-finite values");
        return static_cast<double>(value);
    }
    static std::string dim_str(std::int64_t d) {
        return d < 0 ? std::string("*") : std::to_string(d);
    }
    static std::string shape_str(const std::vector<std::int64_t>& shape) {
        std::string s = "[";
        for (std::size_t i = 0; i < shape.size(); ++i) {
            if (i) s += ", ";
            s += std::to_string(shape[i]);
        }
        return s + "]";
    }

    const TensorMap& tensors_;
};

Tensor to_tensor(const Eigen::MatrixXd& m) {
    Tensor t;
    t.shape = {m.rows(), m.cols()};
    t.data.resize(static_cast<std::size_t>(m.size()));
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            t.data[static_cast<std::size_t>(r * m.cols() + c)] =
                static_cast<float>(m(r, c));
    return t;
}

Tensor to_tensor(const Eigen::VectorXd& v) {
    Tensor t;
    t.shape = {v.size()};
    t.data.resize(static_cast<std::size_t>(v.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i)
        t.data[static_cast<std::size_t>(i)] = static_cast<float>(v[i]);
    return t;
}

// Softmax over each row with max subtraction.
void softmax_rows_inplace(Eigen::MatrixXd& scores) {
    for (Eigen::Index r = 0; r < scores.rows(); ++r) {
        const double m = scores.row(r).maxCoeff();
        scores.row(r) = (scores.row(r).array() - m).exp();
        scores.row(r) /= scores.row(r).sum();
    }
}

}  // namespace

EncoderWeights encoder_weights_from_tensors(const TensorMap& tensors,
                                            EncoderConfig config) {
    if (config.hidden_dim <= 0 || config.num_heads <= 0 ||
        config.ffn_dim <= 0 || config.num_layers < 0)
        throw std::invalid_argument("encoder geometry fields must be positive");
    if (config.hidden_dim % config.num_heads != 0)
        throw std::invalid_argument(
            "hidden_dim must be divisible by num_heads");

    TensorReader reader(tensors);
    const int d = config.hidden_dim;

    // Table sizes may be inferred from the archive.
    auto table_rows = [&](const char* name, int configured) -> std::int64_t {
        if (configured > 0) return configured;
        auto it = tensors.find(name);
        if (it == tensors.end())
            throw FormatError("missing tensor '" + std::string(name) + "'");
        if (it->second.shape.size() != 2)
            throw FormatError("tensor '" + std::string(name) +
                              "': expected a 2-d tensor");
        return it->second.shape[0];
    };

    EncoderWeights w;
    w.config = config;
    const auto v = table_rows("embeddings.word_embeddings", config.vocab_size);
    const auto p =
        table_rows("embeddings.position_embeddings", config.max_positions);
    const auto t =
        table_rows("embeddings.token_type_embeddings", config.type_vocab_size);
    w.config.vocab_size = static_cast<int>(v);
    w.config.max_positions = static_cast<int>(p);
    w.config.type_vocab_size = static_cast<int>(t);

    w.word_embedding = reader.matrix("embeddings.word_embeddings", v, d);
    w.position_embedding = reader.matrix("embeddings.position_embeddings", p, d);
    w.segment_embedding =
        reader.matrix("embeddings.token_type_embeddings", t, d);
    w.embed_norm.gamma = reader.vector("embeddings.layer_norm.gamma", d);
    w.embed_norm.beta = reader.vector("embeddings.layer_norm.beta", d);

    for (int i = 0; i < config.num_layers; ++i) {
        const std::string pre = layer_prefix(i);
        EncoderLayerWeights layer;
        layer.wq = reader.matrix(pre + "attention.query.weight", d, d);
        layer.bq = reader.vector(pre + "attention.query.bias", d);
        layer.wk = reader.matrix(pre + "attention.key.weight", d, d);
        layer.bk = reader.vector(pre + "attention.key.bias", d);
        layer.wv = reader.matrix(pre + "attention.value.weight", d, d);
        layer.bv = reader.vector(pre + "attention.value.bias", d);
        layer.wo = reader.matrix(pre + "attention.output.weight", d, d);
        layer.bo = reader.vector(pre + "attention.output.bias", d);
        layer.attn_norm.gamma = reader.vector(pre + "attention.layer_norm.gamma", d);
        layer.attn_norm.beta = reader.vector(pre + "attention.layer_norm.beta", d);
        layer.ffn_in = reader.matrix(pre + "ffn.intermediate.weight", d,
                                     config.ffn_dim);
        layer.ffn_in_bias =
            reader.vector(pre + "ffn.intermediate.bias", config.ffn_dim);
        layer.ffn_out =
            reader.matrix(pre + "ffn.output.weight", config.ffn_dim, d);
        layer.ffn_out_bias = reader.vector(pre + "ffn.output.bias", d);
        layer.ffn_norm.gamma = reader.vector(pre + "ffn.layer_norm.gamma", d);
        layer.ffn_norm.beta = reader.vector(pre + "ffn.layer_norm.beta", d);
        w.layers.push_back(std::move(layer));
    }
    return w;
}

TensorMap encoder_weights_to_tensors(const EncoderWeights& w) {
    TensorMap tensors;
    tensors["embeddings.word_embeddings"] = to_tensor(w.word_embedding);
    tensors["embeddings.position_embeddings"] = to_tensor(w.position_embedding);
    tensors["embeddings.token_type_embeddings"] = to_tensor(w.segment_embedding);
    tensors["embeddings.layer_norm.gamma"] = to_tensor(w.embed_norm.gamma);
    tensors["embeddings.layer_norm.beta"] = to_tensor(w.embed_norm.beta);
    for (std::size_t i = 0; i < w.layers.size(); ++i) {
        const std::string pre = layer_prefix(static_cast<int>(i));
        const auto& l = w.layers[i];
        tensors[pre + "attention.query.weight"] = to_tensor(l.wq);
        tensors[pre + "attention.query.bias"] = to_tensor(l.bq);
        tensors[pre + "attention.key.weight"] = to_tensor(l.wk);
        tensors[pre + "attention.key.bias"] = to_tensor(l.bk);
        tensors[pre + "attention.value.weight"] = to_tensor(l.wv);
        tensors[pre + "attention.value.bias"] = to_tensor(l.bv);
        tensors[pre + "attention.output.weight"] = to_tensor(l.wo);
        tensors[pre + "attention.output.bias"] = to_tensor(l.bo);
        tensors[pre + "attention.layer_norm.gamma"] = to_tensor(l.attn_norm.gamma);
        tensors[pre + "attention.layer_norm.beta"] = to_tensor(l.attn_norm.beta);
        tensors[pre + "ffn.intermediate.weight"] = to_tensor(l.ffn_in);
        tensors[pre + "ffn.intermediate.bias"] = to_tensor(l.ffn_in_bias);
        tensors[pre + "ffn.output.weight"] = to_tensor(l.ffn_out);
        tensors[pre + "ffn.output.bias"] = to_tensor(l.ffn_out_bias);
        tensors[pre + "ffn.layer_norm.gamma"] = to_tensor(l.ffn_norm.gamma);
        tensors[pre + "ffn.layer_norm.beta"] = to_tensor(l.ffn_norm.beta);
    }
    return tensors;
}

EncoderWeights load_encoder_weights(const std::string& path,
                                    const EncoderConfig& config) {
    return encoder_weights_from_tensors(read_tensor_archive(path), config);
}

void save_encoder_weights(const std::string& path,
                          const EncoderWeights& weights) {
    write_tensor_archive(path, encoder_weights_to_tensors(weights));
}

Eigen::MatrixXd layer_norm_rows(const Eigen::MatrixXd& x,
                                const LayerNormParams& params, double eps) {
    const auto d = static_cast<double>(x.cols());
    Eigen::MatrixXd out(x.rows(), x.cols());
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
        const double mean = x.row(r).mean();
        const Eigen::RowVectorXd centered = x.row(r).array() - mean;
        const double var = centered.squaredNorm() / d;
        const double denom = std::sqrt(var + eps);
        out.row(r) = (centered / denom).cwiseProduct(params.gamma.transpose()) +
                     params.beta.transpose();
    }
    return out;
}

double gelu(double x) { return 0.5 * x * (1.0 + std::erf(x / std::sqrt(2.0))); }

TokenMatrix encoder_embed(const EncodedSequence& ids,
                          const EncoderWeights& w) {
    const auto len = static_cast<Eigen::Index>(ids.size());
    if (len > w.position_embedding.rows())
        throw std::invalid_argument(
            "sequence length exceeds the encoder's position table");

    Eigen::MatrixXd sum(len, w.config.hidden_dim);
    for (Eigen::Index l = 0; l < len; ++l) {
        const int id = ids.input_ids[static_cast<std::size_t>(l)];
        const int seg = ids.segment_ids[static_cast<std::size_t>(l)];
        if (id < 0 || id >= w.word_embedding.rows())
            throw std::invalid_argument("input id " + std::to_string(id) +
                                        " is outside the vocabulary");
        if (seg < 0 || seg >= w.segment_embedding.rows())
            throw std::invalid_argument("segment id " + std::to_string(seg) +
                                        " is outside the segment table");
        sum.row(l) = w.word_embedding.row(id) + w.position_embedding.row(l) +
                     w.segment_embedding.row(seg);
    }

    TokenMatrix out;
    out.rows = layer_norm_rows(sum, w.embed_norm, w.config.layernorm_eps);
    out.mask.assign(ids.attention_mask.size(), 0);
    for (std::size_t i = 0; i < ids.attention_mask.size(); ++i)
        out.mask[i] = ids.attention_mask[i] ? 1 : 0;
    return out;
}

TokenMatrix attention_layer(const TokenMatrix& x,
                            const EncoderLayerWeights& layer, int num_heads,
                            double eps,
                            std::vector<Eigen::MatrixXd>* head_probs) {
    const Eigen::Index len = x.length();
    const Eigen::Index d = x.dim();
    if (d % num_heads != 0)
        throw std::invalid_argument("hidden_dim must be divisible by num_heads");
    const Eigen::Index dh = d / num_heads;
    const double scale = 1.0 / std::sqrt(static_cast<double>(dh));

    const Eigen::MatrixXd q =
        (x.rows * layer.wq).rowwise() + layer.bq.transpose();
    const Eigen::MatrixXd k =
        (x.rows * layer.wk).rowwise() + layer.bk.transpose();
    const Eigen::MatrixXd v =
        (x.rows * layer.wv).rowwise() + layer.bv.transpose();

    Eigen::MatrixXd context(len, d);
    for (int h = 0; h < num_heads; ++h) {
        const auto qh = q.middleCols(h * dh, dh);
        const auto kh = k.middleCols(h * dh, dh);
        const auto vh = v.middleCols(h * dh, dh);
        Eigen::MatrixXd scores = qh * kh.transpose() * scale;
        for (Eigen::Index j = 0; j < len; ++j) {
            const bool masked =
                j < static_cast<Eigen::Index>(x.mask.size()) && !x.mask[j];
            if (masked) scores.col(j).array() += kMaskPenalty;
        }
        softmax_rows_inplace(scores);
        if (head_probs) head_probs->push_back(scores);
        context.middleCols(h * dh, dh) = scores * vh;
    }

    const Eigen::MatrixXd attn_out =
        (context * layer.wo).rowwise() + layer.bo.transpose();
    const Eigen::MatrixXd x1 =
        layer_norm_rows(attn_out + x.rows, layer.attn_norm, eps);

    Eigen::MatrixXd hidden =
        (x1 * layer.ffn_in).rowwise() + layer.ffn_in_bias.transpose();
    for (Eigen::Index r = 0; r < hidden.rows(); ++r)
        for (Eigen::Index c = 0; c < hidden.cols(); ++c)
            hidden(r, c) = gelu(hidden(r, c));
    const Eigen::MatrixXd ffn_out =
        (hidden * layer.ffn_out).rowwise() + layer.ffn_out_bias.transpose();

    TokenMatrix out;
    out.rows = layer_norm_rows(ffn_out + x1, layer.ffn_norm, eps);
    out.mask = x.mask;
    return out;
}

TokenMatrix encoder_forward(const EncodedSequence& ids,
                            const EncoderWeights& weights,
                            AttentionTrace* trace) {
    TokenMatrix x = encoder_embed(ids, weights);
    for (const auto& layer : weights.layers) {
        std::vector<Eigen::MatrixXd>* probs = nullptr;
        if (trace) {
            trace->probs.emplace_back();
            probs = &trace->probs.back();
        }
        x = attention_layer(x, layer, weights.config.num_heads,
                            weights.config.layernorm_eps, probs);
    }
    return x;
}

}  // namespace newslens
