#include "newslens/static_embed.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "newslens/common.hpp"

namespace newslens {

namespace {

bool is_integer_field(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && line[i] == ' ') ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ') ++j;
        if (j > i) fields.push_back(line.substr(i, j - i));
        i = j;
    }
    return fields;
}

}  // namespace

EmbeddingTable load_embedding_table(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open embedding file: " + path);

    EmbeddingTable table;
    std::string line;
    std::size_t line_no = 0;
    bool first_line = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split_fields(line);

        if (first_line) {
            first_line = false;
            // "count dim" header: exactly two integer fields.
            if (fields.size() == 2 && is_integer_field(fields[0]) &&
                is_integer_field(fields[1])) {
                table.dim = std::stoi(fields[1]);
                continue;
            }
        }
        if (fields.size() < 2)
            throw FormatError(path + ":" + std::to_string(line_no) +
                              ": expected a token and at least one value");

        const int dim = static_cast<int>(fields.size()) - 1;
        if (table.dim == 0) {
            table.dim = dim;
        } else if (dim != table.dim) {
            throw FormatError(path + ":" + std::to_string(line_no) + ": entry has " +
                              std::to_string(dim) + " values, expected " +
                              std::to_string(table.dim));
        }
        if (table.contains(fields[0])) continue;  // first occurrence wins

        Eigen::VectorXd v(dim);
        for (int k = 0; k < dim; ++k) {
            try {
                v[k] = std::stod(fields[k + 1]);
            } catch (const std::exception&) {
                throw FormatError(path + ":" + std::to_string(line_no) +
                                  ": non-numeric value \"" + fields[k + 1] + "\"");
            }
        }
        table.tokens.push_back(fields[0]);
        table.vector_of.emplace(fields[0], std::move(v));
    }
    return table;
}

void save_embedding_table(const EmbeddingTable& table, const std::string& path,
                          bool header) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write embedding file: " + path);
    if (header) out << table.tokens.size() << ' ' << table.dim << '\n';
    char buf[40];
    for (const auto& token : table.tokens) {
        out << token;
        const Eigen::VectorXd& v = table.vector_of.at(token);
        for (Eigen::Index k = 0; k < v.size(); ++k) {
            std::snprintf(buf, sizeof buf, " %.17g", v[k]);
            out << buf;
        }
        out << '\n';
    }
}

SequenceEmbedding embed_sequence(const TokenSequence& seq,
                                 const EmbeddingTable& table) {
    std::vector<const Eigen::VectorXd*> found;
    found.reserve(seq.size());
    std::size_t skipped = 0;
    for (const auto& token : seq) {
        auto it = table.vector_of.find(token);
        if (it == table.vector_of.end()) {
            ++skipped;
        } else {
            found.push_back(&it->second);
        }
    }

    SequenceEmbedding result;
    result.skipped = skipped;
    result.matrix.rows.resize(static_cast<Eigen::Index>(found.size()), table.dim);
    for (std::size_t i = 0; i < found.size(); ++i)
        result.matrix.rows.row(static_cast<Eigen::Index>(i)) = *found[i];
    result.matrix.mask.assign(found.size(), 1);
    return result;
}

}  // namespace newslens
