#pragma once

#include <map>
#include <optional>
#include <regex>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "forge/document.hpp"

namespace forge {

struct FilterConfig {
    double lang_threshold_primary = 0.65;
    double lang_threshold_secondary = 0.87;
    std::unordered_set<std::string> stop_words;
    int min_stop_word_hits = 2;
    std::pair<double, double> avg_word_length_bounds{3.0, 10.0};
    double max_duplicate_line_fraction = 0.30;
    double max_duplicate_paragraph_fraction = 0.30;
    // n-gram size -> maximum character coverage of the most frequent n-gram
    std::map<int, double> max_top_ngram_fraction{{2, 0.20}, {3, 0.18}, {4, 0.16}};
    double min_terminal_punct_line_fraction = 0.12;
    std::int64_t min_tokens = 50;
    int toxicity_route_threshold = 3;
    // strict: routing a document without token_count/toxicity_score is an
    // error; lenient: such documents take the default route.
    bool strict_routing = true;

    void validate() const;
    static FilterConfig from_json_file(const std::string& path);
    void load_stop_words(const std::string& path);
};

struct FilterVerdict {
    bool passed = true;
    std::string rule;  // first failing rule; empty iff passed
    std::map<std::string, double> measurements;
};

// Adapter for language-identification backends. Scores are per-language
// confidences in [0,1] summing to at most 1 (+epsilon), deterministic for a
// fixed text.
class LanguageScorer {
  public:
    virtual ~LanguageScorer() = default;
    virtual std::map<std::string, double> scores(std::string_view text) const = 0;
};

// Built-in scorer: cosine similarity of character-trigram frequency vectors
// against bundled pt/en/es profiles, normalized so the scores sum to 1. Lets
// the pipeline run with no external models; production setups plug their own
// backend through LanguageScorer.
class TrigramLanguageScorer : public LanguageScorer {
  public:
    TrigramLanguageScorer();
    std::map<std::string, double> scores(std::string_view text) const override;

  private:
    std::map<std::string, std::map<std::string, double>> profiles_;
};

FilterVerdict language_gate(const Document& doc, const LanguageScorer& scorer,
                            const std::string& target, double threshold);
FilterVerdict repetition_filter(const Document& doc, const FilterConfig& cfg);
FilterVerdict quality_filter(const Document& doc, const FilterConfig& cfg);

struct ScrubRule {
    std::string pattern;      // ECMAScript regex
    std::string replacement;  // may use capture group references
};

// Compiled pattern->replacement rewriting; invalid patterns are a fatal
// configuration error at construction.
class Scrubber {
  public:
    explicit Scrubber(std::span<const ScrubRule> rules);
    Document apply(const Document& doc) const;
    std::string apply_text(const std::string& text) const;

    // Bundled defaults: e-mail addresses, phone-like digit runs, excessive
    // symbol runs (collapsed to three).
    static Scrubber default_rules();

  private:
    std::vector<std::pair<std::regex, std::string>> compiled_;
};

inline Document scrub_formatting(const Document& doc, std::span<const ScrubRule> rules) {
    return Scrubber(rules).apply(doc);
}

enum class Route { kDefault, kExcluded, kDropped };

class MissingScoreError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

Route route_document(const Document& doc, const FilterConfig& cfg);

using CodepointRange = std::pair<char32_t, char32_t>;

// Latin blocks plus common punctuation, digits and whitespace.
std::vector<CodepointRange> latin_default_ranges();

FilterVerdict latin_script_gate(const Document& doc, std::span<const CodepointRange> allowed);

inline FilterVerdict latin_script_gate(const Document& doc) {
    const auto ranges = latin_default_ranges();
    return latin_script_gate(doc, ranges);
}

// Batch kernels (OpenMP when threads != 1) with a serial reference. The
// parallel path must produce identical verdicts to the serial one.
std::vector<FilterVerdict> batch_quality_verdicts_serial(std::span<const Document> docs,
                                                         const FilterConfig& cfg);
std::vector<FilterVerdict> batch_quality_verdicts(std::span<const Document> docs,
                                                  const FilterConfig& cfg, int threads = 0);

}  // namespace forge
