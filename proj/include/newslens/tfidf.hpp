#pragma once

#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <Eigen/Core>

#include "newslens/corpus.hpp"
#include "newslens/tokenize.hpp"

namespace newslens {

struct TfidfConfig {
    int max_features = 300;
    int ngram = 1;  // 1 or 2
    bool stopword_removal = false;
};

struct TfidfModel {
    std::vector<std::string> terms;  // lexicographic order
    std::vector<double> idf;
    TfidfConfig config;
    std::vector<std::string> stopwords;  // list used at fit time
    std::unordered_map<std::string, int> index;  // derived from terms

    std::size_t dimension() const { return terms.size(); }
};

// The shared document-to-terms pipeline: lowercased basic tokens, optional
// stop-word removal, then n-grams of the configured order.
TokenSequence tfidf_terms_of(const std::string& text, const TfidfConfig& config,
                             const std::unordered_set<std::string>& stopset);

// Keeps the max_features terms with the highest corpus-wide raw count (ties
// broken lexicographically); idf(t) = ln((1 + N) / (1 + df(t))) + 1.
// Throws FormatError when no terms survive filtering.
TfidfModel fit_tfidf(const Corpus& train, const TfidfConfig& config,
                     const std::vector<std::string>& stopwords = {});

// v[i] = tf(term_i) * idf[i], L2-normalized; all-zero vectors stay zero.
Eigen::VectorXd tfidf_transform(const TfidfModel& model,
                                const std::string& text);

// JSON persistence: {terms, idf, config} with the stop-word list inside
// config so the transform pipeline is reproducible from the file alone.
void save_tfidf_model(const TfidfModel& model, const std::string& path);
TfidfModel load_tfidf_model(const std::string& path);

}  // namespace newslens
