#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "forge/tokenizer.hpp"

namespace forge {

// Aggregated efficiency metrics for one (corpus, tokenizer) pair. Counts are
// mergeable by summation; the derived ratios are recomputed on access.
struct TokenizerReport {
    std::int64_t word_count = 0;
    std::int64_t token_count = 0;
    std::int64_t char_count = 0;
    std::int64_t continued_word_count = 0;  // words split into >= 2 tokens
    std::size_t vocab_size = 0;

    double fertility() const;        // tokens per word
    double pcw() const;              // fraction of words with >= 2 tokens
    double chars_per_token() const;  // compression

    TokenizerReport& operator+=(const TokenizerReport& o);
};

// Words are Unicode-whitespace-separated; each word is encoded in isolation.
std::optional<TokenizerReport> evaluate_chunk(std::span<const std::string> corpus,
                                              const TokenizerAdapter& tokenizer);
TokenizerReport evaluate_tokenizer_serial(std::span<const std::string> corpus,
                                          const TokenizerAdapter& tokenizer);
TokenizerReport evaluate_tokenizer(std::span<const std::string> corpus,
                                   const TokenizerAdapter& tokenizer, int threads = 0);

struct ModelShape {
    int n_layer = 0;
    int d_model = 0;
    int seq_len = 0;
    std::int64_t vocab = 0;
    std::optional<double> params;  // informational; not derivable from shape alone

    void validate() const;
};

// Per-token training cost for the shape: 96*l*h^2*(1 + s/(6h) + V/(16*l*h)).
double per_token_training_cost(const ModelShape& shape);

// Dataset training cost in FLOPs with D = base_units * fertility, so one
// corpus can be priced under tokenizers of different fertility.
double training_cost(const ModelShape& shape, double base_units, double fertility);

// Convenience overload for a raw token count D.
double training_cost_tokens(const ModelShape& shape, double tokens);

struct TokenizerRanking {
    std::string name;
    double fertility = 0.0;
    std::size_t vocab_size = 0;
    double cost_flops = 0.0;
    // 1 - cost/cost_of_most_expensive
    double savings_vs_most_expensive = 0.0;
};

// Ranks by fertility ascending. Each tokenizer is priced with its own vocab
// and fertility; savings(i vs j) = 1 - cost_i / cost_j.
std::vector<TokenizerRanking> compare_tokenizers(
    std::span<const std::pair<std::string, TokenizerReport>> reports, const ModelShape& shape,
    double base_units);

double savings(const TokenizerRanking& a, const TokenizerRanking& b);

}  // namespace forge
