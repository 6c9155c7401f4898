#include "forge/decontam.hpp"

#include <omp.h>

#include <algorithm>
#include <cstring>
#include <fstream>

#include "forge/hash.hpp"

namespace forge {
namespace {

constexpr char kIndexMagic[8] = {'F', 'R', 'G', 'I', 'D', 'X', '0', '1'};
constexpr TokenId kMaskSentinel = 0x7FFFFFFE;
constexpr std::uint64_t kSeedHi = 0xA5A5F00DULL;
constexpr std::uint64_t kSeedLo = 0x0DDBA11ULL;

std::vector<TokenId> strip_punctuation(std::span<const TokenId> tokens,
                                       const TokenizerAdapter& tokenizer,
                                       std::vector<int>* origin = nullptr) {
    std::vector<TokenId> out;
    out.reserve(tokens.size());
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (!tokenizer.is_punctuation(tokens[i])) {
            out.push_back(tokens[i]);
            if (origin) origin->push_back(static_cast<int>(i));
        }
    }
    return out;
}

void write_gram_set(std::ofstream& out, const GramSet& set) {
    std::vector<GramFingerprint> sorted(set.begin(), set.end());
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
        return a.hi != b.hi ? a.hi < b.hi : a.lo < b.lo;
    });
    const std::uint64_t n = sorted.size();
    out.write(reinterpret_cast<const char*>(&n), 8);
    for (const auto& f : sorted) {
        out.write(reinterpret_cast<const char*>(&f.hi), 8);
        out.write(reinterpret_cast<const char*>(&f.lo), 8);
    }
}

GramSet read_gram_set(std::ifstream& in, const std::string& path) {
    std::uint64_t n = 0;
    in.read(reinterpret_cast<char*>(&n), 8);
    GramSet set;
    set.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        GramFingerprint f;
        in.read(reinterpret_cast<char*>(&f.hi), 8);
        in.read(reinterpret_cast<char*>(&f.lo), 8);
        set.insert(f);
    }
    if (!in) throw std::runtime_error("truncated benchmark index: " + path);
    return set;
}

}  // namespace

BenchmarkIndex::BenchmarkIndex(int k_min, int k_max, std::uint64_t tokenizer_fingerprint)
    : k_min_(k_min), k_max_(k_max), tokenizer_fingerprint_(tokenizer_fingerprint) {
    if (k_min < 1) throw std::invalid_argument("k_min must be >= 1");
    if (k_min > k_max) throw std::invalid_argument("k_min must be <= k_max");
    grams_by_len_.resize(static_cast<std::size_t>(k_max - k_min + 1));
}

GramFingerprint BenchmarkIndex::fingerprint_window(std::span<const TokenId> window) {
    const auto* bytes = reinterpret_cast<const void*>(window.data());
    const std::size_t len = window.size() * sizeof(TokenId);
    return {xxhash64(bytes, len, kSeedHi), xxhash64(bytes, len, kSeedLo)};
}

GramFingerprint BenchmarkIndex::fingerprint_masked(std::span<const TokenId> window,
                                                   int masked_pos) {
    std::vector<TokenId> buf(window.begin(), window.end());
    buf[static_cast<std::size_t>(masked_pos)] = kMaskSentinel;
    buf.push_back(static_cast<TokenId>(masked_pos));  // same-position comparison only
    return fingerprint_window(buf);
}

std::size_t BenchmarkIndex::gram_count() const {
    std::size_t n = 0;
    for (const auto& set : grams_by_len_) n += set.size();
    return n;
}

bool BenchmarkIndex::contains_window(std::span<const TokenId> window) const {
    const int k = static_cast<int>(window.size());
    if (k < k_min_ || k > k_max_) return false;
    return grams_by_len_[static_cast<std::size_t>(k - k_min_)].count(fingerprint_window(window)) >
           0;
}

bool BenchmarkIndex::contains_shadow_window(std::span<const TokenId> window) const {
    if (static_cast<int>(window.size()) != k_min_) return false;
    return shadow_.count(fingerprint_window(window)) > 0;
}

bool BenchmarkIndex::matches_with_one_substitution(std::span<const TokenId> window) const {
    if (static_cast<int>(window.size()) != k_min_) return false;
    for (int i = 0; i < k_min_; ++i) {
        if (wildcards_.count(fingerprint_masked(window, i)) > 0) return true;
    }
    return false;
}

void BenchmarkIndex::add_text(std::span<const TokenId> tokens,
                              const TokenizerAdapter& tokenizer) {
    const auto n = static_cast<int>(tokens.size());
    if (n < k_min_) {
        ++short_texts_;
        return;
    }
    for (int k = k_min_; k <= k_max_ && k <= n; ++k) {
        auto& set = grams_by_len_[static_cast<std::size_t>(k - k_min_)];
        for (int start = 0; start + k <= n; ++start) {
            set.insert(fingerprint_window(tokens.subspan(static_cast<std::size_t>(start),
                                                         static_cast<std::size_t>(k))));
        }
    }
    for (int start = 0; start + k_min_ <= n; ++start) {
        const auto window = tokens.subspan(static_cast<std::size_t>(start),
                                           static_cast<std::size_t>(k_min_));
        for (int i = 0; i < k_min_; ++i) wildcards_.insert(fingerprint_masked(window, i));
    }
    const auto stripped = strip_punctuation(tokens, tokenizer);
    const auto sn = static_cast<int>(stripped.size());
    for (int start = 0; start + k_min_ <= sn; ++start) {
        shadow_.insert(fingerprint_window(std::span<const TokenId>(
            stripped.data() + start, static_cast<std::size_t>(k_min_))));
    }
}

void BenchmarkIndex::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open index for writing: " + path);
    out.write(kIndexMagic, sizeof(kIndexMagic));
    auto put_u64 = [&](std::uint64_t v) { out.write(reinterpret_cast<const char*>(&v), 8); };
    put_u64(static_cast<std::uint64_t>(k_min_));
    put_u64(static_cast<std::uint64_t>(k_max_));
    put_u64(tokenizer_fingerprint_);
    put_u64(short_texts_);
    for (const auto& set : grams_by_len_) write_gram_set(out, set);
    write_gram_set(out, shadow_);
    write_gram_set(out, wildcards_);
    if (!out) throw std::runtime_error("failed writing benchmark index: " + path);
}

BenchmarkIndex BenchmarkIndex::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open benchmark index: " + path);
    char magic[sizeof(kIndexMagic)];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kIndexMagic, sizeof(magic)) != 0) {
        throw std::runtime_error("bad benchmark index header: " + path);
    }
    auto get_u64 = [&]() {
        std::uint64_t v;
        in.read(reinterpret_cast<char*>(&v), 8);
        if (!in) throw std::runtime_error("truncated benchmark index: " + path);
        return v;
    };
    const int k_min = static_cast<int>(get_u64());
    const int k_max = static_cast<int>(get_u64());
    BenchmarkIndex index(k_min, k_max, get_u64());
    index.short_texts_ = get_u64();
    for (auto& set : index.grams_by_len_) set = read_gram_set(in, path);
    index.shadow_ = read_gram_set(in, path);
    index.wildcards_ = read_gram_set(in, path);
    return index;
}

BenchmarkIndex build_index(std::span<const std::string> benchmark_texts,
                           const TokenizerAdapter& tokenizer, int k_min, int k_max) {
    if (benchmark_texts.empty()) {
        throw std::invalid_argument("refusing to build an empty benchmark index");
    }
    BenchmarkIndex index(k_min, k_max, tokenizer.fingerprint());
    for (const auto& text : benchmark_texts) {
        const auto tokens = tokenizer.encode(text);
        index.add_text(tokens, tokenizer);
    }
    return index;
}

ContaminationReport check_sample(std::string_view sample, const BenchmarkIndex& index,
                                 const TokenizerAdapter& tokenizer, MatchMode mode) {
    if (tokenizer.fingerprint() != index.tokenizer_fingerprint()) {
        throw FingerprintMismatch("tokenizer does not match the benchmark index token space");
    }
    ContaminationReport report;
    const auto tokens = tokenizer.encode(sample);
    const auto n = static_cast<int>(tokens.size());
    const int k_min = index.k_min();
    const std::span<const TokenId> view(tokens);

    // exact decision: a shared run of length >= k_min contains a k_min-window
    int exact_at = -1;
    for (int start = 0; start + k_min <= n; ++start) {
        if (index.contains_window(view.subspan(static_cast<std::size_t>(start),
                                               static_cast<std::size_t>(k_min)))) {
            exact_at = start;
            break;
        }
    }
    if (exact_at >= 0) {
        report.contaminated = true;
        report.match_kind = MatchKind::kExact;
        // longest matching window, scanning down from the largest length
        for (int k = std::min(index.k_max(), n); k >= k_min; --k) {
            bool found = false;
            for (int start = 0; start + k <= n; ++start) {
                if (index.contains_window(view.subspan(static_cast<std::size_t>(start),
                                                       static_cast<std::size_t>(k)))) {
                    report.longest_match_len = k;
                    report.matched_span = {start, start + k};
                    found = true;
                    break;
                }
            }
            if (found) break;
        }
        return report;
    }

    if (mode == MatchMode::kApproximate) {
        for (int start = 0; start + k_min <= n; ++start) {
            const auto window = view.subspan(static_cast<std::size_t>(start),
                                             static_cast<std::size_t>(k_min));
            if (index.matches_with_one_substitution(window)) {
                report.contaminated = true;
                report.match_kind = MatchKind::kApproximate;
                report.longest_match_len = k_min;
                report.matched_span = {start, start + k_min};
                return report;
            }
        }
        std::vector<int> origin;
        const auto stripped = strip_punctuation(view, tokenizer, &origin);
        const auto sn = static_cast<int>(stripped.size());
        for (int start = 0; start + k_min <= sn; ++start) {
            if (index.contains_shadow_window(std::span<const TokenId>(
                    stripped.data() + start, static_cast<std::size_t>(k_min)))) {
                report.contaminated = true;
                report.match_kind = MatchKind::kApproximate;
                report.longest_match_len = k_min;
                report.matched_span = {origin[static_cast<std::size_t>(start)],
                                       origin[static_cast<std::size_t>(start + k_min - 1)] + 1};
                return report;
            }
        }
    }
    return report;
}

std::vector<ContaminationReport> check_batch_serial(std::span<const Document> docs,
                                                    const BenchmarkIndex& index,
                                                    const TokenizerAdapter& tokenizer,
                                                    MatchMode mode) {
    std::vector<ContaminationReport> reports(docs.size());
    for (std::size_t i = 0; i < docs.size(); ++i) {
        reports[i] = check_sample(docs[i].text, index, tokenizer, mode);
    }
    return reports;
}

std::vector<ContaminationReport> check_batch(std::span<const Document> docs,
                                             const BenchmarkIndex& index,
                                             const TokenizerAdapter& tokenizer, MatchMode mode,
                                             int threads) {
    if (tokenizer.fingerprint() != index.tokenizer_fingerprint()) {
        throw FingerprintMismatch("tokenizer does not match the benchmark index token space");
    }
    std::vector<ContaminationReport> reports(docs.size());
    const int nthreads = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 32) num_threads(nthreads)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(docs.size()); ++i) {
        reports[static_cast<std::size_t>(i)] =
            check_sample(docs[static_cast<std::size_t>(i)].text, index, tokenizer, mode);
    }
    return reports;
}

DecontamResult decontaminate(std::vector<Document> docs, const BenchmarkIndex& index,
                             const TokenizerAdapter& tokenizer, MatchMode mode, int threads) {
    const auto reports = check_batch(docs, index, tokenizer, mode, threads);
    DecontamResult result;
    for (std::size_t i = 0; i < docs.size(); ++i) {
        if (reports[i].contaminated) {
            result.flagged.push_back(std::move(docs[i]));
            result.flagged_reports.push_back(reports[i]);
        } else {
            result.clean.push_back(std::move(docs[i]));
        }
    }
    return result;
}

}  // namespace forge
