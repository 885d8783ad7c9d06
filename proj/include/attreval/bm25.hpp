#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "attreval/jsonl.hpp"

namespace attreval {

struct Passage {
    std::string doc_id;
    std::string text;

    bool operator==(const Passage&) const = default;
};

/// JSONL fields: {"doc_id","text"}. Duplicate doc_ids are rejected at build
/// time, not here.
std::vector<Passage> read_corpus_jsonl(const std::filesystem::path& path, IoMode mode);

struct ScoredPassage {
    Passage passage;
    double score = 0.0;
};

/// Okapi BM25 over a fixed passage corpus.
///
///   idf(t)        = ln((N - df + 0.5) / (df + 0.5) + 1)
///   score(t, d)   = idf(t) * tf * (k1 + 1) / (tf + k1 * (1 - b + b * len / avg_len))
///
/// The +1 inside the log keeps idf non-negative even when a term appears in
/// most passages. Query terms are iterated as a multiset, so a repeated
/// query term counts twice.
class Bm25Index {
  public:
    static constexpr double kDefaultK1 = 1.2;
    static constexpr double kDefaultB = 0.75;

    /// Tokenizes and indexes the corpus. Throws FormatError on a duplicate
    /// doc_id; throws Error on an empty corpus or non-positive parameters.
    static Bm25Index build(const std::vector<Passage>& corpus, double k1 = kDefaultK1,
                           double b = kDefaultB);

    /// Top-k passages with positive score, best first; ties broken by
    /// ascending doc_id. Zero-score passages never appear.
    std::vector<ScoredPassage> search(std::string_view query, size_t k) const;

    size_t num_passages() const { return passages_.size(); }
    double avg_length() const { return avg_len_; }
    double k1() const { return k1_; }
    double b() const { return b_; }
    const Passage& passage(size_t i) const { return passages_[i]; }

    /// Binary round trip. Files start with a magic tag and a format version;
    /// loading a different version throws VersionError.
    void save(const std::filesystem::path& path) const;
    static Bm25Index load(const std::filesystem::path& path);

  private:
    Bm25Index() = default;

    struct Posting {
        uint32_t doc = 0;
        uint32_t tf = 0;
    };

    double k1_ = kDefaultK1;
    double b_ = kDefaultB;
    double avg_len_ = 0.0;
    std::vector<Passage> passages_;
    std::vector<uint32_t> lengths_;
    // Sorted term map keeps serialization and iteration order stable.
    std::map<std::string, std::vector<Posting>, std::less<>> postings_;
};

}  // namespace attreval
