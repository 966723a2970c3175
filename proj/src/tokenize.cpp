#include "newslens/tokenize.hpp"

#include <fstream>
#include <stdexcept>

#include "newslens/common.hpp"

namespace newslens {

namespace {

constexpr std::uint32_t kInvalidCp = 0xFFFFFFFFu;

// Decodes the UTF-8 sequence starting at s[i]; advances i past it. Malformed
// bytes decode as kInvalidCp one byte at a time.
std::uint32_t decode_utf8(const std::string& s, std::size_t& i) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    std::size_t len;
    std::uint32_t cp;
    if (b0 < 0x80) {
        ++i;
        return b0;
    } else if ((b0 & 0xE0) == 0xC0) {
        len = 2; cp = b0 & 0x1Fu;
    } else if ((b0 & 0xF0) == 0xE0) {
        len = 3; cp = b0 & 0x0Fu;
    } else if ((b0 & 0xF8) == 0xF0) {
        len = 4; cp = b0 & 0x07u;
    } else {
        ++i;
        return kInvalidCp;
    }
    if (i + len > s.size()) {
        ++i;
        return kInvalidCp;
    }
    for (std::size_t k = 1; k < len; ++k) {
        const auto b = static_cast<unsigned char>(s[i + k]);
        if ((b & 0xC0) != 0x80) {
            ++i;
            return kInvalidCp;
        }
        cp = (cp << 6) | (b & 0x3Fu);
    }
    i += len;
    return cp;
}

void append_utf8(std::string& out, std::uint32_t cp) {
    if (cp < 0x80) {
        out += static_cast<char>(cp);
    } else if (cp < 0x800) {
        out += static_cast<char>(0xC0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
        out += static_cast<char>(0xE0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
        out += static_cast<char>(0xF0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    }
}

bool is_space_cp(std::uint32_t cp) {
    if (cp < 0x20 || cp == 0x7F) return true;  // controls are separators too
    switch (cp) {
        case 0x20: case 0x85: case 0xA0: case 0x1680:
        case 0x2028: case 0x2029: case 0x202F: case 0x205F: case 0x3000:
            return true;
        default:
            return cp >= 0x2000 && cp <= 0x200A;
    }
}

bool is_punct_cp(std::uint32_t cp) {
    if (cp == kInvalidCp) return true;
    if (cp < 0x80) {
        return !(cp >= '0' && cp <= '9') && !(cp >= 'A' && cp <= 'Z') &&
               !(cp >= 'a' && cp <= 'z') && !is_space_cp(cp);
    }
    // Common Unicode punctuation: Latin-1 signs, general punctuation,
    // CJK symbols and fullwidth forms.
    return (cp >= 0xA1 && cp <= 0xBF) || cp == 0xD7 || cp == 0xF7 ||
           (cp >= 0x2010 && cp <= 0x2027) || (cp >= 0x2030 && cp <= 0x205E) ||
           (cp >= 0x3001 && cp <= 0x303F) || (cp >= 0xFE50 && cp <= 0xFE6F) ||
           (cp >= 0xFF01 && cp <= 0xFF0F) || (cp >= 0xFF1A && cp <= 0xFF20) ||
           (cp >= 0xFF3B && cp <= 0xFF40) || (cp >= 0xFF5B && cp <= 0xFF65);
}

std::uint32_t lower_cp(std::uint32_t cp) {
    if (cp >= 'A' && cp <= 'Z') return cp + 0x20;
    if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 0x20;  // Latin-1
    return cp;
}

}  // namespace

TokenSequence basic_tokenize(const std::string& text, bool lowercase) {
    TokenSequence tokens;
    std::string current;
    auto flush = [&] {
        if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    };
    std::size_t i = 0;
    while (i < text.size()) {
        const std::size_t start = i;
        std::uint32_t cp = decode_utf8(text, i);
        if (is_space_cp(cp)) {
            flush();
        } else if (is_punct_cp(cp)) {
            flush();
            if (cp == kInvalidCp) {
                tokens.push_back(text.substr(start, 1));
            } else {
                std::string p;
                append_utf8(p, cp);
                tokens.push_back(std::move(p));
            }
        } else {
            append_utf8(current, lowercase ? lower_cp(cp) : cp);
        }
    }
    flush();
    return tokens;
}

TokenSequence remove_stopwords(const TokenSequence& seq,
                               const std::unordered_set<std::string>& stoplist) {
    TokenSequence out;
    out.reserve(seq.size());
    for (const auto& t : seq)
        if (stoplist.find(t) == stoplist.end()) out.push_back(t);
    return out;
}

std::unordered_set<std::string> load_stopwords(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open stop-word list: " + path);
    std::unordered_set<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) words.insert(line);
    }
    return words;
}

const std::vector<std::string>& default_english_stopwords() {
    static const std::vector<std::string> words = {
        "i", "me", "my", "myself", "we", "our", "ours", "ourselves", "you",
        "you're", "you've", "you'll", "you'd", "your", "yours", "yourself",
        "yourselves", "he", "him", "his", "himself", "she", "she's", "her",
        "hers", "herself", "it", "it's", "its", "itself", "they", "them",
        "their", "theirs", "themselves", "what", "which", "who", "whom",
        "this", "that", "that'll", "these", "those", "am", "is", "are", "was",
        "were", "be", "been", "being", "have", "has", "had", "having", "do",
        "does", "did", "doing", "a", "an", "the", "and", "but", "if", "or",
        "because", "as", "until", "while", "of", "at", "by", "for", "with",
        "about", "against", "between", "into", "through", "during", "before",
        "after", "above", "below", "to", "from", "up", "down", "in", "out",
        "on", "off", "over", "under", "again", "further", "then", "once",
        "here", "there", "when", "where", "why", "how", "all", "any", "both",
        "each", "few", "more", "most", "other", "some", "such", "no", "nor",
        "not", "only", "own", "same", "so", "than", "too", "very", "s", "t",
        "can", "will", "just", "don", "don't", "should", "should've", "now",
        "d", "ll", "m", "o", "re", "ve", "y", "ain", "aren", "aren't",
        "couldn", "couldn't", "didn", "didn't", "doesn", "doesn't", "hadn",
        "hadn't", "hasn", "hasn't", "haven", "haven't", "isn", "isn't", "ma",
        "mightn", "mightn't", "mustn", "mustn't", "needn", "needn't", "shan",
        "shan't", "shouldn", "shouldn't", "wasn", "wasn't", "weren",
        "weren't", "won", "won't", "wouldn", "wouldn't"};
    return words;
}

TokenSequence ngrams(const TokenSequence& seq, int n) {
    if (n < 1) throw std::invalid_argument("ngram order must be >= 1");
    if (n == 1) return seq;
    TokenSequence out;
    if (seq.size() < static_cast<std::size_t>(n)) return out;
    out.reserve(seq.size() - n + 1);
    for (std::size_t i = 0; i + n <= seq.size(); ++i) {
        std::string gram = seq[i];
        for (std::size_t k = 1; k < static_cast<std::size_t>(n); ++k) {
            gram += ' ';
            gram += seq[i + k];
        }
        out.push_back(std::move(gram));
    }
    return out;
}

WordPieceVocab make_wordpiece_vocab(std::vector<std::string> tokens) {
    WordPieceVocab vocab;
    vocab.tokens = std::move(tokens);
    vocab.id_of.reserve(vocab.tokens.size());
    for (std::size_t i = 0; i < vocab.tokens.size(); ++i)
        vocab.id_of.emplace(vocab.tokens[i], static_cast<int>(i));

    auto special = [&](const char* name) {
        auto it = vocab.id_of.find(name);
        if (it == vocab.id_of.end())
            throw FormatError(std::string("vocabulary is missing the ") + name +
                              " token");
        return it->second;
    };
    vocab.cls_id = special("[CLS]");
    vocab.sep_id = special("[SEP]");
    vocab.unk_id = special("[UNK]");
    vocab.pad_id = special("[PAD]");
    return vocab;
}

WordPieceVocab load_wordpiece_vocab(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open vocabulary file: " + path);
    std::vector<std::string> tokens;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        tokens.push_back(line);
    }
    while (!tokens.empty() && tokens.back().empty()) tokens.pop_back();
    for (const auto& t : tokens)
        if (t.empty())
            throw FormatError("vocabulary file has an empty line: " + path);
    return make_wordpiece_vocab(std::move(tokens));
}

TokenSequence wordpiece_tokenize(const std::string& text,
                                 const WordPieceVocab& vocab,
                                 std::size_t max_word_chars) {
    const std::string unk = vocab.tokens[vocab.unk_id];
    TokenSequence out;
    for (const auto& word : basic_tokenize(text, /*lowercase=*/true)) {
        // Code point boundaries; pieces must not split multi-byte characters.
        std::vector<std::size_t> bounds;
        std::size_t i = 0;
        while (i < word.size()) {
            bounds.push_back(i);
            decode_utf8(word, i);
        }
        bounds.push_back(word.size());
        const std::size_t n_chars = bounds.size() - 1;
        if (n_chars > max_word_chars) {
            out.push_back(unk);
            continue;
        }

        TokenSequence pieces;
        bool bad = false;
        std::size_t start = 0;  // index into bounds
        while (start < n_chars) {
            std::size_t match_end = 0;
            std::string match;
            for (std::size_t end = n_chars; end > start; --end) {
                std::string candidate =
                    word.substr(bounds[start], bounds[end] - bounds[start]);
                if (start > 0) candidate = "##" + candidate;
                if (vocab.contains(candidate)) {
                    match = std::move(candidate);
                    match_end = end;
                    break;
                }
            }
            if (match_end == 0) {
                bad = true;
                break;
            }
            pieces.push_back(std::move(match));
            start = match_end;
        }
        if (bad) {
            out.push_back(unk);
        } else {
            out.insert(out.end(), pieces.begin(), pieces.end());
        }
    }
    return out;
}

EncodedSequence encode(const TokenSequence& seq, const WordPieceVocab& vocab,
                       int max_length, int pad_to) {
    if (max_length < 3)
        throw std::invalid_argument("max_length must be at least 3");
    if (pad_to > max_length)
        throw std::invalid_argument("pad_to must not exceed max_length");

    const std::size_t content =
        std::min(seq.size(), static_cast<std::size_t>(max_length) - 2);
    EncodedSequence enc;
    enc.input_ids.reserve(content + 2);
    enc.input_ids.push_back(vocab.cls_id);
    for (std::size_t i = 0; i < content; ++i)
        enc.input_ids.push_back(vocab.id_or_unk(seq[i]));
    enc.input_ids.push_back(vocab.sep_id);

    enc.attention_mask.assign(enc.input_ids.size(), 1);
    while (pad_to > 0 && enc.input_ids.size() < static_cast<std::size_t>(pad_to)) {
        enc.input_ids.push_back(vocab.pad_id);
        enc.attention_mask.push_back(0);
    }
    enc.segment_ids.assign(enc.input_ids.size(), 0);
    return enc;
}

}  // namespace newslens
