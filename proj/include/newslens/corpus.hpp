#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace newslens {

// One news article. Labels are fixed project-wide: 0 = fake, 1 = real.
struct Document {
    std::string text;
    int label = 0;
};

struct Corpus {
    std::vector<Document> documents;          // ingestion order, stable across runs
    std::vector<std::string> provenance;      // source file names

    std::size_t size() const { return documents.size(); }
};

struct SplitCorpus {
    Corpus train;
    Corpus test;
    std::uint64_t seed = 0;
    double train_fraction = 0.8;
    // Positions into the pre-split corpus, in shuffled order.
    std::vector<std::size_t> train_indices;
    std::vector<std::size_t> test_indices;
};

// Reads an RFC-4180 CSV file (UTF-8, header row) and keeps the "text" column;
// other columns are ignored. Quoted fields may contain commas, quotes and
// newlines. Rows whose text field is empty are dropped; the number of dropped
// rows is added to *dropped_empty when given.
//
// Throws IoError if the file cannot be read, FormatError if there is no
// "text" column.
Corpus load_csv(const std::string& path, int label,
                std::size_t* dropped_empty = nullptr);

// Removes the first occurrence of "(Reuters) -" together with everything
// before it (the dateline), then trims leading whitespace. Texts without the
// marker pass through unchanged.
std::string clean_reuters_prefix(const std::string& text);
Document clean_reuters_prefix(Document doc);

// Applies clean_reuters_prefix to every document with the given label and
// drops documents whose text ends up empty. Returns the number dropped.
std::size_t clean_corpus(Corpus& corpus, int label = 1);

// Seeded Fisher-Yates shuffle followed by a prefix/suffix split.
// |train| = round(train_fraction * N), clamped to [1, N-1] so neither side is
// empty. Same seed, same split.
//
// Throws std::invalid_argument unless 0 < train_fraction < 1 and N >= 2.
SplitCorpus split(const Corpus& corpus, double train_fraction,
                  std::uint64_t seed);

std::map<int, std::size_t> class_counts(const Corpus& corpus);

// Split manifest (JSON): seed, fraction, provenance, per-split indices.
void save_split_manifest(const SplitCorpus& split, const std::string& path);

// Re-applies a stored manifest to a corpus with the same ingestion order.
// Throws FormatError if the manifest does not partition [0, N).
SplitCorpus apply_split_manifest(const Corpus& corpus, const std::string& path);

}  // namespace newslens
