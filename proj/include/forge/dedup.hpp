#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "forge/document.hpp"

namespace forge {

struct MinHashParams {
    int buckets = 14;
    int hashes_per_bucket = 8;
    int ngram_size = 5;
    std::uint64_t hash_seed = 0x1f9a3d5c7b2e4680ULL;

    int num_hashes() const { return buckets * hashes_per_bucket; }
    void validate() const;
    bool operator==(const MinHashParams&) const = default;
};

struct Signature {
    std::vector<std::uint64_t> values;  // length = buckets * hashes_per_bucket
    bool operator==(const Signature&) const = default;
};

struct DedupScope {
    enum class Mode { kGlobal, kPerGroup };
    Mode mode = Mode::kGlobal;
    std::string group_key;  // document field holding the group (e.g. "source")
};

struct DedupResult {
    std::vector<Document> kept;
    std::vector<Document> removed;
    // connected components of the candidate graph with >= 2 members,
    // in stream order; each lists document ids, representative first
    std::vector<std::vector<std::string>> clusters;
};

// Word-level n-gram shingle hashes over whitespace-split, lowercased text.
// Texts with fewer than n words contribute the whole text as one shingle.
std::vector<std::uint64_t> word_shingles(std::string_view text, int ngram_size,
                                         std::uint64_t seed);

Signature signature_from_shingles(std::span<const std::uint64_t> shingles,
                                  const MinHashParams& params);
Signature minhash_signature(std::string_view text, const MinHashParams& params);

// Per-document signature kernels; the OpenMP path must match the serial one
// exactly (docs are independent).
std::vector<Signature> compute_signatures_serial(std::span<const Document> docs,
                                                 const MinHashParams& params);
std::vector<Signature> compute_signatures(std::span<const Document> docs,
                                          const MinHashParams& params, int threads = 0);

// First occurrence of each normalized-text hash wins.
DedupResult exact_dedup(std::vector<Document> docs,
                        const std::function<std::string(std::string_view)>& normalizer = nullptr);

// Collapses runs of whitespace and trims; the stock normalizer for exact_dedup.
std::string whitespace_normalizer(std::string_view text);

// Banded-LSH near-duplicate removal: candidates are documents agreeing on all
// hashes of at least one bucket; clusters are connected components; the
// earliest document per cluster is kept. Per-group scope builds one
// independent index per group value. Results are worker-count independent.
// When verify_jaccard is set, candidate pairs are re-verified against the
// exact shingle-set Jaccard before joining a cluster.
DedupResult minhash_dedup(std::vector<Document> docs, const MinHashParams& params,
                          const DedupScope& scope = {}, int threads = 0,
                          std::span<const Signature> precomputed = {},
                          std::optional<double> verify_jaccard = std::nullopt);

double exact_jaccard(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b);

// P(detected) = 1 - (1 - s^r)^b for banded LSH with r hashes in each of b
// buckets.
double detection_probability(double jaccard, const MinHashParams& params);

// Signature cache: binary file with a params header and id -> signature
// records, letting large jobs resume without re-hashing.
void save_signature_cache(const std::string& path, const MinHashParams& params,
                          std::span<const std::string> ids, std::span<const Signature> sigs);
std::pair<MinHashParams, std::vector<std::pair<std::string, Signature>>> load_signature_cache(
    const std::string& path);

}  // namespace forge
