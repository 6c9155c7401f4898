#include "forge/tokeval.hpp"

#include <omp.h>

#include <algorithm>
#include <stdexcept>

#include "forge/utf8.hpp"

namespace forge {
namespace {

void accumulate_text(std::string_view text, const TokenizerAdapter& tokenizer,
                     TokenizerReport& report) {
    std::size_t pos = 0, word_start = 0;
    bool in_word = false;
    auto flush = [&](std::size_t end) {
        const std::string_view word = text.substr(word_start, end - word_start);
        const auto tokens = tokenizer.encode(word);
        report.word_count += 1;
        report.token_count += static_cast<std::int64_t>(tokens.size());
        report.char_count += static_cast<std::int64_t>(utf8::count_codepoints(word));
        if (tokens.size() >= 2) report.continued_word_count += 1;
    };
    while (pos < text.size()) {
        const std::size_t cp_start = pos;
        const char32_t cp = utf8::next(text, pos);
        if (utf8::is_whitespace(cp)) {
            if (in_word) {
                flush(cp_start);
                in_word = false;
            }
        } else if (!in_word) {
            in_word = true;
            word_start = cp_start;
        }
    }
    if (in_word) flush(text.size());
}

}  // namespace

double TokenizerReport::fertility() const {
    if (word_count <= 0) throw std::domain_error("fertility undefined for an empty corpus");
    return static_cast<double>(token_count) / static_cast<double>(word_count);
}

double TokenizerReport::pcw() const {
    if (word_count <= 0) throw std::domain_error("pcw undefined for an empty corpus");
    return static_cast<double>(continued_word_count) / static_cast<double>(word_count);
}

double TokenizerReport::chars_per_token() const {
    if (token_count <= 0) throw std::domain_error("chars_per_token undefined without tokens");
    return static_cast<double>(char_count) / static_cast<double>(token_count);
}

TokenizerReport& TokenizerReport::operator+=(const TokenizerReport& o) {
    word_count += o.word_count;
    token_count += o.token_count;
    char_count += o.char_count;
    continued_word_count += o.continued_word_count;
    vocab_size = std::max(vocab_size, o.vocab_size);
    return *this;
}

std::optional<TokenizerReport> evaluate_chunk(std::span<const std::string> corpus,
                                              const TokenizerAdapter& tokenizer) {
    TokenizerReport report;
    report.vocab_size = tokenizer.vocab_size();
    for (const auto& text : corpus) accumulate_text(text, tokenizer, report);
    if (report.word_count == 0) return std::nullopt;
    return report;
}

TokenizerReport evaluate_tokenizer_serial(std::span<const std::string> corpus,
                                          const TokenizerAdapter& tokenizer) {
    auto report = evaluate_chunk(corpus, tokenizer);
    if (!report) throw std::invalid_argument("corpus yields no words");
    return *report;
}

TokenizerReport evaluate_tokenizer(std::span<const std::string> corpus,
                                   const TokenizerAdapter& tokenizer, int threads) {
    const int nthreads = threads > 0 ? threads : omp_get_max_threads();
    std::vector<TokenizerReport> partial(static_cast<std::size_t>(nthreads));
    for (auto& p : partial) p.vocab_size = tokenizer.vocab_size();
#pragma omp parallel num_threads(nthreads)
    {
        const auto tid = static_cast<std::size_t>(omp_get_thread_num());
#pragma omp for schedule(dynamic, 16)
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(corpus.size()); ++i) {
            accumulate_text(corpus[static_cast<std::size_t>(i)], tokenizer, partial[tid]);
        }
    }
    TokenizerReport total;
    total.vocab_size = tokenizer.vocab_size();
    for (const auto& p : partial) total += p;
    if (total.word_count == 0) throw std::invalid_argument("corpus yields no words");
    return total;
}

void ModelShape::validate() const {
    if (n_layer <= 0 || d_model <= 0 || seq_len <= 0 || vocab <= 0) {
        throw std::domain_error("model shape dimensions must be positive");
    }
    if (params && *params <= 0.0) throw std::domain_error("params must be positive");
}

double per_token_training_cost(const ModelShape& shape) {
    shape.validate();
    const double l = shape.n_layer;
    const double h = shape.d_model;
    const double s = shape.seq_len;
    const double v = static_cast<double>(shape.vocab);
    return 96.0 * l * h * h * (1.0 + s / (6.0 * h) + v / (16.0 * l * h));
}

double training_cost(const ModelShape& shape, double base_units, double fertility) {
    if (base_units <= 0.0 || fertility <= 0.0) {
        throw std::domain_error("base_units and fertility must be positive");
    }
    return per_token_training_cost(shape) * base_units * fertility;
}

double training_cost_tokens(const ModelShape& shape, double tokens) {
    if (tokens <= 0.0) throw std::domain_error("token count must be positive");
    return per_token_training_cost(shape) * tokens;
}

double savings(const TokenizerRanking& a, const TokenizerRanking& b) {
    return 1.0 - a.cost_flops / b.cost_flops;
}

std::vector<TokenizerRanking> compare_tokenizers(
    std::span<const std::pair<std::string, TokenizerReport>> reports, const ModelShape& shape,
    double base_units) {
    if (reports.size() < 2) throw std::invalid_argument("need at least two tokenizer reports");
    std::vector<TokenizerRanking> rows;
    rows.reserve(reports.size());
    for (const auto& [name, report] : reports) {
        for (const auto& row : rows) {
            if (row.name == name) throw std::invalid_argument("duplicate tokenizer name: " + name);
        }
        ModelShape own = shape;
        if (report.vocab_size > 0) own.vocab = static_cast<std::int64_t>(report.vocab_size);
        TokenizerRanking row;
        row.name = name;
        row.fertility = report.fertility();
        row.vocab_size = static_cast<std::size_t>(own.vocab);
        row.cost_flops = training_cost(own, base_units, row.fertility);
        rows.push_back(std::move(row));
    }
    std::stable_sort(rows.begin(), rows.end(),
                     [](const auto& a, const auto& b) { return a.fertility < b.fertility; });
    const double worst =
        std::max_element(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
            return a.cost_flops < b.cost_flops;
        })->cost_flops;
    for (auto& row : rows) row.savings_vs_most_expensive = 1.0 - row.cost_flops / worst;
    return rows;
}

}  // namespace forge
