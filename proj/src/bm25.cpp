#include "attreval/bm25.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <unordered_map>
#include <unordered_set>

#include "attreval/errors.hpp"
#include "attreval/tokenize.hpp"
#include "attreval/version.hpp"

namespace attreval {

namespace {

constexpr char kMagic[8] = {'A', 'T', 'R', 'E', 'V', 'I', 'D', 'X'};

void put_u32(std::ostream& out, uint32_t v) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    out.write(reinterpret_cast<const char*>(b), 4);
}

void put_u64(std::ostream& out, uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    out.write(reinterpret_cast<const char*>(b), 8);
}

void put_f64(std::ostream& out, double v) {
    uint64_t bits;
    std::memcpy(&bits, &v, 8);
    put_u64(out, bits);
}

void put_str(std::ostream& out, std::string_view s) {
    put_u64(out, s.size());
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

uint32_t get_u32(std::istream& in) {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    if (!in) throw FormatError("index file truncated");
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= uint32_t(b[i]) << (8 * i);
    return v;
}

uint64_t get_u64(std::istream& in) {
    unsigned char b[8];
    in.read(reinterpret_cast<char*>(b), 8);
    if (!in) throw FormatError("index file truncated");
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= uint64_t(b[i]) << (8 * i);
    return v;
}

double get_f64(std::istream& in) {
    uint64_t bits = get_u64(in);
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
}

std::string get_str(std::istream& in) {
    uint64_t n = get_u64(in);
    std::string s(n, '\0');
    in.read(s.data(), static_cast<std::streamsize>(n));
    if (!in) throw FormatError("index file truncated");
    return s;
}

}  // namespace

std::vector<Passage> read_corpus_jsonl(const std::filesystem::path& path, IoMode mode) {
    std::vector<Passage> passages;
    for (const auto& row : read_jsonl(path)) {
        check_known_fields(row, {"doc_id", "text"}, mode, "corpus passage");
        Passage passage;
        for (const char* key : {"doc_id", "text"}) {
            auto it = row.find(key);
            if (it == row.end() || !it->is_string()) {
                throw FormatError(path.string() + ": corpus passage needs string field \"" +
                                  key + "\"");
            }
            (key == std::string_view("doc_id") ? passage.doc_id : passage.text) =
                it->get<std::string>();
        }
        passages.push_back(std::move(passage));
    }
    return passages;
}

Bm25Index Bm25Index::build(const std::vector<Passage>& corpus, double k1, double b) {
    if (corpus.empty()) throw Error("bm25: corpus is empty");
    if (k1 <= 0.0) throw Error("bm25: k1 must be positive");
    if (b < 0.0 || b > 1.0) throw Error("bm25: b must be in [0, 1]");

    Bm25Index index;
    index.k1_ = k1;
    index.b_ = b;
    index.passages_ = corpus;
    index.lengths_.reserve(corpus.size());

    std::unordered_set<std::string> ids;
    uint64_t total_len = 0;
    for (size_t doc = 0; doc < corpus.size(); ++doc) {
        if (!ids.insert(corpus[doc].doc_id).second) {
            throw FormatError("bm25: duplicate doc_id \"" + corpus[doc].doc_id + "\"");
        }
        std::unordered_map<std::string, uint32_t> counts;
        auto tokens = tokenize(corpus[doc].text);
        for (auto& token : tokens) ++counts[token];
        index.lengths_.push_back(static_cast<uint32_t>(tokens.size()));
        total_len += tokens.size();
        for (auto& [term, tf] : counts) {
            index.postings_[term].push_back({static_cast<uint32_t>(doc), tf});
        }
    }
    // Postings were appended in ascending doc order already; keep it explicit.
    for (auto& [term, list] : index.postings_) {
        std::sort(list.begin(), list.end(),
                  [](const Posting& a, const Posting& b2) { return a.doc < b2.doc; });
    }
    index.avg_len_ = static_cast<double>(total_len) / static_cast<double>(corpus.size());
    return index;
}

std::vector<ScoredPassage> Bm25Index::search(std::string_view query, size_t k) const {
    std::vector<double> scores(passages_.size(), 0.0);
    const double n = static_cast<double>(passages_.size());
    for (const auto& term : tokenize(query)) {
        auto it = postings_.find(term);
        if (it == postings_.end()) continue;
        const double df = static_cast<double>(it->second.size());
        const double idf = std::log((n - df + 0.5) / (df + 0.5) + 1.0);
        for (const Posting& p : it->second) {
            const double tf = static_cast<double>(p.tf);
            const double norm =
                tf + k1_ * (1.0 - b_ + b_ * static_cast<double>(lengths_[p.doc]) / avg_len_);
            scores[p.doc] += idf * tf * (k1_ + 1.0) / norm;
        }
    }

    std::vector<size_t> hits;
    for (size_t doc = 0; doc < scores.size(); ++doc) {
        if (scores[doc] > 0.0) hits.push_back(doc);
    }
    std::sort(hits.begin(), hits.end(), [&](size_t a, size_t b2) {
        if (scores[a] != scores[b2]) return scores[a] > scores[b2];
        return passages_[a].doc_id < passages_[b2].doc_id;
    });
    if (hits.size() > k) hits.resize(k);

    std::vector<ScoredPassage> results;
    results.reserve(hits.size());
    for (size_t doc : hits) results.push_back({passages_[doc], scores[doc]});
    return results;
}

void Bm25Index::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out.write(kMagic, sizeof(kMagic));
    put_u32(out, static_cast<uint32_t>(kIndexFormatVersion));
    put_f64(out, k1_);
    put_f64(out, b_);
    put_f64(out, avg_len_);
    put_u64(out, passages_.size());
    for (size_t i = 0; i < passages_.size(); ++i) {
        put_str(out, passages_[i].doc_id);
        put_str(out, passages_[i].text);
        put_u32(out, lengths_[i]);
    }
    put_u64(out, postings_.size());
    for (const auto& [term, list] : postings_) {
        put_str(out, term);
        put_u64(out, list.size());
        for (const Posting& p : list) {
            put_u32(out, p.doc);
            put_u32(out, p.tf);
        }
    }
    if (!out) throw Error("write failed: " + path.string());
}

Bm25Index Bm25Index::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open " + path.string());
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
        throw FormatError(path.string() + ": not an index file");
    }
    uint32_t version = get_u32(in);
    if (version != static_cast<uint32_t>(kIndexFormatVersion)) {
        throw VersionError(path.string() + ": index format version " + std::to_string(version) +
                           ", expected " + std::to_string(kIndexFormatVersion));
    }
    Bm25Index index;
    index.k1_ = get_f64(in);
    index.b_ = get_f64(in);
    index.avg_len_ = get_f64(in);
    uint64_t num_docs = get_u64(in);
    index.passages_.reserve(num_docs);
    index.lengths_.reserve(num_docs);
    for (uint64_t i = 0; i < num_docs; ++i) {
        Passage p;
        p.doc_id = get_str(in);
        p.text = get_str(in);
        index.passages_.push_back(std::move(p));
        index.lengths_.push_back(get_u32(in));
    }
    uint64_t num_terms = get_u64(in);
    for (uint64_t i = 0; i < num_terms; ++i) {
        std::string term = get_str(in);
        uint64_t num_postings = get_u64(in);
        std::vector<Posting> list;
        list.reserve(num_postings);
        for (uint64_t j = 0; j < num_postings; ++j) {
            Posting p;
            p.doc = get_u32(in);
            p.tf = get_u32(in);
            list.push_back(p);
        }
        index.postings_.emplace(std::move(term), std::move(list));
    }
    return index;
}

}  // namespace attreval
