#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

#include "newslens/token_matrix.hpp"
#include "newslens/tokenize.hpp"

namespace newslens {

// Pre-trained static word vectors, one fixed vector per token type.
struct EmbeddingTable {
    int dim = 0;
    std::vector<std::string> tokens;  // kept entries, file order
    std::unordered_map<std::string, Eigen::VectorXd> vector_of;

    bool contains(const std::string& token) const {
        return vector_of.find(token) != vector_of.end();
    }
    std::size_t size() const { return tokens.size(); }
};

// Text format: optional first header line "count dim" (exactly two integer
// fields), then one entry per line: "token v1 ... vD", space-separated,
// UTF-8. Duplicate tokens keep the first occurrence. Throws FormatError on
// inconsistent vector lengths.
EmbeddingTable load_embedding_table(const std::string& path);

// Writes the same format; values are printed with enough digits to
// round-trip exactly.
void save_embedding_table(const EmbeddingTable& table, const std::string& path,
                          bool header = true);

struct SequenceEmbedding {
    TokenMatrix matrix;      // one row per in-vocabulary token, mask all 1
    std::size_t skipped = 0; // out-of-vocabulary tokens dropped
};

SequenceEmbedding embed_sequence(const TokenSequence& seq,
                                 const EmbeddingTable& table);

}  // namespace newslens
