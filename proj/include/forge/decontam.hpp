#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "forge/document.hpp"
#include "forge/tokenizer.hpp"

namespace forge {

class FingerprintMismatch : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// 128-bit gram fingerprint; collision probability per membership query is
// below 2^-64 and accepted.
struct GramFingerprint {
    std::uint64_t hi = 0;
    std::uint64_t lo = 0;
    bool operator==(const GramFingerprint&) const = default;
};

struct GramFingerprintHash {
    std::size_t operator()(const GramFingerprint& f) const {
        return static_cast<std::size_t>(f.hi ^ (f.lo * 0x9e3779b97f4a7c15ULL));
    }
};

using GramSet = std::unordered_set<GramFingerprint, GramFingerprintHash>;

// Immutable membership structure over benchmark token windows of every
// length k in [k_min, k_max]. Also carries a punctuation-stripped shadow
// index and single-substitution wildcard fingerprints for approximate
// matching.
class BenchmarkIndex {
  public:
    BenchmarkIndex(int k_min, int k_max, std::uint64_t tokenizer_fingerprint);

    int k_min() const { return k_min_; }
    int k_max() const { return k_max_; }
    std::uint64_t tokenizer_fingerprint() const { return tokenizer_fingerprint_; }

    // total exact grams stored across all lengths
    std::size_t gram_count() const;
    // benchmark texts too short to produce any window
    std::size_t short_text_count() const { return short_texts_; }

    bool contains_window(std::span<const TokenId> window) const;
    bool contains_shadow_window(std::span<const TokenId> window) const;
    bool matches_with_one_substitution(std::span<const TokenId> window) const;

    void add_text(std::span<const TokenId> tokens, const TokenizerAdapter& tokenizer);

    void save(const std::string& path) const;
    static BenchmarkIndex load(const std::string& path);

    static GramFingerprint fingerprint_window(std::span<const TokenId> window);

  private:
    int k_min_;
    int k_max_;
    std::uint64_t tokenizer_fingerprint_;
    std::size_t short_texts_ = 0;
    std::vector<GramSet> grams_by_len_;  // index 0 == k_min
    GramSet shadow_;                     // k_min windows, punctuation removed
    GramSet wildcards_;                  // k_min windows with one position masked

    static GramFingerprint fingerprint_masked(std::span<const TokenId> window, int masked_pos);
};

BenchmarkIndex build_index(std::span<const std::string> benchmark_texts,
                           const TokenizerAdapter& tokenizer, int k_min = 8, int k_max = 32);

enum class MatchMode { kExact, kApproximate };
enum class MatchKind { kNone, kExact, kApproximate };

struct ContaminationReport {
    bool contaminated = false;
    int longest_match_len = 0;           // capped at k_max
    MatchKind match_kind = MatchKind::kNone;
    std::pair<int, int> matched_span{0, 0};  // [start, end) token offsets
};

ContaminationReport check_sample(std::string_view sample, const BenchmarkIndex& index,
                                 const TokenizerAdapter& tokenizer, MatchMode mode);

struct DecontamResult {
    std::vector<Document> clean;
    std::vector<Document> flagged;
    std::vector<ContaminationReport> flagged_reports;  // parallel to `flagged`
};

DecontamResult decontaminate(std::vector<Document> docs, const BenchmarkIndex& index,
                             const TokenizerAdapter& tokenizer, MatchMode mode,
                             int threads = 0);

// Batch check kernels for the report stage; parallel path must equal serial.
std::vector<ContaminationReport> check_batch_serial(std::span<const Document> docs,
                                                    const BenchmarkIndex& index,
                                                    const TokenizerAdapter& tokenizer,
                                                    MatchMode mode);
std::vector<ContaminationReport> check_batch(std::span<const Document> docs,
                                             const BenchmarkIndex& index,
                                             const TokenizerAdapter& tokenizer, MatchMode mode,
                                             int threads = 0);

}  // namespace forge
