#include "newslens/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>

#include <json.hpp>

#include "newslens/common.hpp"

namespace newslens {

namespace {

// Splits raw CSV content into records of fields per RFC 4180. Handles quoted
// fields (embedded commas, doubled quotes, embedded line breaks) and both LF
// and CRLF record separators.
std::vector<std::vector<std::string>> parse_csv(const std::string& content) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool in_quotes = false;
    bool field_was_quoted = false;

    auto end_field = [&] {
        record.push_back(std::move(field));
        field.clear();
        field_was_quoted = false;
    };
    auto end_record = [&] {
        end_field();
        // Skip records that are entirely empty (e.g. a trailing newline).
        bool all_empty = true;
        for (const auto& f : record) {
            if (!f.empty()) { all_empty = false; break; }
        }
        if (!all_empty || record.size() > 1) records.push_back(std::move(record));
        record.clear();
    };

    for (std::size_t i = 0; i < content.size(); ++i) {
        char c = content[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < content.size() && content[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"' && field.empty() && !field_was_quoted) {
            in_quotes = true;
            field_was_quoted = true;
        } else if (c == ',') {
            end_field();
        } else if (c == '\r') {
            if (i + 1 < content.size() && content[i + 1] == '\n') ++i;
            end_record();
        } else if (c == '\n') {
            end_record();
        } else {
            field += c;
        }
    }
    if (!field.empty() || field_was_quoted || !record.empty()) end_record();
    return records;
}

void strip_bom(std::string& s) {
    if (s.size() >= 3 && s[0] == '\xef' && s[1] == '\xbb' && s[2] == '\xbf') {
        s.erase(0, 3);
    }
}

bool is_ascii_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
           c == '\v';
}

}  // namespace

Corpus load_csv(const std::string& path, int label,
                std::size_t* dropped_empty) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open CSV file: " + path);
    std::string content((std::istreambuf_iterator<char>(in)),
                        std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("error while reading: " + path);
    strip_bom(content);

    auto records = parse_csv(content);
    if (records.empty())
        throw FormatError("CSV file has no header row: " + path);

    const auto& header = records.front();
    std::size_t text_col = header.size();
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == "text") { text_col = i; break; }
    }
    if (text_col == header.size())
        throw FormatError("CSV file has no \"text\" column: " + path);

    Corpus corpus;
    corpus.provenance.push_back(path);
    std::size_t dropped = 0;
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& row = records[r];
        std::string text = text_col < row.size() ? row[text_col] : "";
        if (text.empty()) {
            ++dropped;
            continue;
        }
        corpus.documents.push_back(Document{std::move(text), label});
    }
    if (dropped_empty) *dropped_empty += dropped;
    return corpus;
}

std::string clean_reuters_prefix(const std::string& text) {
    static const std::string marker = "(Reuters) -";
    auto pos = text.find(marker);
    if (pos == std::string::npos) return text;
    std::size_t start = pos + marker.size();
    while (start < text.size() && is_ascii_space(text[start])) ++start;
    return text.substr(start);
}

Document clean_reuters_prefix(Document doc) {
    doc.text = clean_reuters_prefix(doc.text);
    return doc;
}

std::size_t clean_corpus(Corpus& corpus, int label) {
    std::size_t dropped = 0;
    std::vector<Document> kept;
    kept.reserve(corpus.documents.size());
    for (auto& doc : corpus.documents) {
        if (doc.label == label) doc.text = clean_reuters_prefix(doc.text);
        if (doc.text.empty()) {
            ++dropped;
            continue;
        }
        kept.push_back(std::move(doc));
    }
    corpus.documents = std::move(kept);
    return dropped;
}

SplitCorpus split(const Corpus& corpus, double train_fraction,
                  std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw std::invalid_argument("train_fraction must be in (0, 1)");
    const std::size_t n = corpus.size();
    if (n < 2)
        throw std::invalid_argument("cannot split a corpus of fewer than 2 documents");

    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    std::mt19937_64 rng(seed);
    for (std::size_t i = n - 1; i > 0; --i) {
        std::size_t j = static_cast<std::size_t>(rng() % (i + 1));
        std::swap(idx[i], idx[j]);
    }

    auto n_train = static_cast<std::size_t>(
        std::llround(train_fraction * static_cast<double>(n)));
    n_train = std::clamp<std::size_t>(n_train, 1, n - 1);

    SplitCorpus out;
    out.seed = seed;
    out.train_fraction = train_fraction;
    out.train.provenance = corpus.provenance;
    out.test.provenance = corpus.provenance;
    out.train_indices.assign(idx.begin(), idx.begin() + n_train);
    out.test_indices.assign(idx.begin() + n_train, idx.end());
    for (auto i : out.train_indices) out.train.documents.push_back(corpus.documents[i]);
    for (auto i : out.test_indices) out.test.documents.push_back(corpus.documents[i]);
    return out;
}

std::map<int, std::size_t> class_counts(const Corpus& corpus) {
    std::map<int, std::size_t> counts;
    for (const auto& doc : corpus.documents) ++counts[doc.label];
    return counts;
}

void save_split_manifest(const SplitCorpus& split, const std::string& path) {
    nlohmann::json j;
    j["seed"] = split.seed;
    j["train_fraction"] = split.train_fraction;
    j["provenance"] = split.train.provenance;
    j["total"] = split.train_indices.size() + split.test_indices.size();
    j["train_indices"] = split.train_indices;
    j["test_indices"] = split.test_indices;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write split manifest: " + path);
    out << j.dump(2) << "\n";
}

SplitCorpus apply_split_manifest(const Corpus& corpus,
                                 const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open split manifest: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("split manifest is not valid JSON: " + std::string(e.what()));
    }

    SplitCorpus out;
    try {
        out.seed = j.at("seed").get<std::uint64_t>();
        out.train_fraction = j.at("train_fraction").get<double>();
        out.train_indices = j.at("train_indices").get<std::vector<std::size_t>>();
        out.test_indices = j.at("test_indices").get<std::vector<std::size_t>>();
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("split manifest missing field: " + std::string(e.what()));
    }

    const std::size_t n = corpus.size();
    std::vector<char> seen(n, 0);
    auto take = [&](const std::vector<std::size_t>& indices, Corpus& dest) {
        for (auto i : indices) {
            if (i >= n || seen[i])
                throw FormatError("split manifest does not partition the corpus");
            seen[i] = 1;
            dest.documents.push_back(corpus.documents[i]);
        }
    };
    take(out.train_indices, out.train);
    take(out.test_indices, out.test);
    if (out.train_indices.size() + out.test_indices.size() != n)
        throw FormatError("split manifest does not cover the corpus");
    out.train.provenance = corpus.provenance;
    out.test.provenance = corpus.provenance;
    return out;
}

}  // namespace newslens
