#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace newslens {

using TokenSequence = std::vector<std::string>;

// Splits UTF-8 text into tokens: maximal runs of word characters become one
// token each and every punctuation character becomes its own token;
// whitespace only separates. The classification is fixed: whitespace per the
// usual Unicode set, punctuation for ASCII punctuation plus the common
// Unicode punctuation ranges listed in the implementation, word character
// otherwise. Lowercasing folds ASCII and Latin-1 capitals.
TokenSequence basic_tokenize(const std::string& text, bool lowercase);

// Order-preserving filter.
TokenSequence remove_stopwords(const TokenSequence& seq,
                               const std::unordered_set<std::string>& stoplist);

// One word per line, UTF-8.
std::unordered_set<std::string> load_stopwords(const std::string& path);

// The classic 179-word English list, also shipped as data/stopwords_english.txt.
const std::vector<std::string>& default_english_stopwords();

// Adjacent n-grams joined by single spaces. n = 1 returns the input;
// sequences shorter than n yield an empty sequence. Throws on n < 1.
TokenSequence ngrams(const TokenSequence& seq, int n);

struct WordPieceVocab {
    std::unordered_map<std::string, int> id_of;  // first occurrence wins
    std::vector<std::string> tokens;             // id -> token
    int cls_id = -1;
    int sep_id = -1;
    int unk_id = -1;
    int pad_id = -1;

    bool contains(const std::string& token) const {
        return id_of.find(token) != id_of.end();
    }
    int id_or_unk(const std::string& token) const {
        auto it = id_of.find(token);
        return it == id_of.end() ? unk_id : it->second;
    }
    std::size_t size() const { return tokens.size(); }
};

// Builds a vocabulary from an ordered token list (index = id). All four
// special tokens [CLS], [SEP], [UNK], [PAD] must be present.
WordPieceVocab make_wordpiece_vocab(std::vector<std::string> tokens);

// Vocab file: UTF-8 text, one token per line, line number = id.
WordPieceVocab load_wordpiece_vocab(const std::string& path);

// Lowercases and basic-tokenizes, then segments each word greedy
// longest-match-first; continuation pieces are matched with a "##" prefix.
// Words with no match at some position, and words longer than max_word_chars
// code points, become the [UNK] token.
TokenSequence wordpiece_tokenize(const std::string& text,
                                 const WordPieceVocab& vocab,
                                 std::size_t max_word_chars = 100);

struct EncodedSequence {
    std::vector<int> input_ids;
    std::vector<int> segment_ids;     // all zero: single-sequence task
    std::vector<int> attention_mask;  // 1 on non-pad positions

    std::size_t size() const { return input_ids.size(); }
};

// [CLS] + up to (max_length - 2) piece ids + [SEP]. pad_to > result length
// appends [PAD] ids with mask 0 up to pad_to. Requires max_length >= 3 and
// pad_to <= max_length.
EncodedSequence encode(const TokenSequence& seq, const WordPieceVocab& vocab,
                       int max_length, int pad_to = 0);

}  // namespace newslens
