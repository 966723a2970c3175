#include "newslens/tfidf.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include <json.hpp>

#include "newslens/common.hpp"

namespace newslens {

namespace {

void validate(const TfidfConfig& config) {
    if (config.max_features < 1)
        throw std::invalid_argument("max_features must be positive");
    if (config.ngram != 1 && config.ngram != 2)
        throw std::invalid_argument("ngram must be 1 or 2");
}

}  // namespace

TokenSequence tfidf_terms_of(const std::string& text, const TfidfConfig& config,
                             const std::unordered_set<std::string>& stopset) {
    TokenSequence tokens = basic_tokenize(text, /*lowercase=*/true);
    if (config.stopword_removal) tokens = remove_stopwords(tokens, stopset);
    return ngrams(tokens, config.ngram);
}

TfidfModel fit_tfidf(const Corpus& train, const TfidfConfig& config,
                     const std::vector<std::string>& stopwords) {
    validate(config);
    if (train.documents.empty())
        throw std::invalid_argument("cannot fit TF-IDF on an empty corpus");

    std::unordered_set<std::string> stopset(stopwords.begin(), stopwords.end());

    // Corpus-wide raw counts and document frequencies in one pass.
    std::map<std::string, std::size_t> total_count;
    std::map<std::string, std::size_t> doc_freq;
    for (const auto& doc : train.documents) {
        std::map<std::string, std::size_t> in_doc;
        for (auto& term : tfidf_terms_of(doc.text, config, stopset))
            ++in_doc[std::move(term)];
        for (const auto& [term, count] : in_doc) {
            total_count[term] += count;
            ++doc_freq[term];
        }
    }
    if (total_count.empty())
        throw FormatError("TF-IDF vocabulary is empty after filtering");

    std::vector<std::pair<std::string, std::size_t>> ranked(total_count.begin(),
                                                            total_count.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (ranked.size() > static_cast<std::size_t>(config.max_features))
        ranked.resize(static_cast<std::size_t>(config.max_features));

    TfidfModel model;
    model.config = config;
    model.stopwords = stopwords;
    model.terms.reserve(ranked.size());
    for (auto& [term, count] : ranked) model.terms.push_back(std::move(term));
    std::sort(model.terms.begin(), model.terms.end());

    const auto n = static_cast<double>(train.documents.size());
    model.idf.reserve(model.terms.size());
    for (std::size_t i = 0; i < model.terms.size(); ++i) {
        const auto df = static_cast<double>(doc_freq.at(model.terms[i]));
        model.idf.push_back(std::log((1.0 + n) / (1.0 + df)) + 1.0);
        model.index.emplace(model.terms[i], static_cast<int>(i));
    }
    return model;
}

Eigen::VectorXd tfidf_transform(const TfidfModel& model,
                                const std::string& text) {
    std::unordered_set<std::string> stopset(model.stopwords.begin(),
                                            model.stopwords.end());
    Eigen::VectorXd v = Eigen::VectorXd::Zero(
        static_cast<Eigen::Index>(model.terms.size()));
    for (const auto& term : tfidf_terms_of(text, model.config, stopset)) {
        auto it = model.index.find(term);
        if (it != model.index.end()) v[it->second] += model.idf[it->second];
    }
    const double norm = v.norm();
    if (norm > 0.0) v /= norm;
    return v;
}

void save_tfidf_model(const TfidfModel& model, const std::string& path) {
    nlohmann::json j;
    j["terms"] = model.terms;
    j["idf"] = model.idf;
    j["config"] = {{"max_features", model.config.max_features},
                   {"ngram", model.config.ngram},
                   {"stopword_removal", model.config.stopword_removal},
                   {"stopwords", model.stopwords}};
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write TF-IDF model: " + path);
    out << j.dump(2) << "\n";
}

TfidfModel load_tfidf_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open TF-IDF model: " + path);
    nlohmann::json j;
    try {
        in >> j;
        TfidfModel model;
        model.terms = j.at("terms").get<std::vector<std::string>>();
        model.idf = j.at("idf").get<std::vector<double>>();
        const auto& c = j.at("config");
        model.config.max_features = c.at("max_features").get<int>();
        model.config.ngram = c.at("ngram").get<int>();
        model.config.stopword_removal = c.at("stopword_removal").get<bool>();
        model.stopwords = c.at("stopwords").get<std::vector<std::string>>();
        if (model.idf.size() != model.terms.size())
            throw FormatError("TF-IDF model terms/idf length mismatch: " + path);
        for (std::size_t i = 0; i < model.terms.size(); ++i)
            model.index.emplace(model.terms[i], static_cast<int>(i));
        return model;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("malformed TF-IDF model file: " + std::string(e.what()));
    }
}

}  // namespace newslens
