#include "forge/filtering.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "forge/utf8.hpp"

namespace forge {
namespace {

std::vector<std::string_view> split_words(std::string_view text) {
    std::vector<std::string_view> words;
    std::size_t pos = 0, word_start = 0;
    bool in_word = false;
    while (pos < text.size()) {
        const std::size_t cp_start = pos;
        const char32_t cp = utf8::next(text, pos);
        if (utf8::is_whitespace(cp)) {
            if (in_word) {
                words.push_back(text.substr(word_start, cp_start - word_start));
                in_word = false;
            }
        } else if (!in_word) {
            in_word = true;
            word_start = cp_start;
        }
    }
    if (in_word) words.push_back(text.substr(word_start));
    return words;
}

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto nl = text.find('\n', start);
        if (nl == std::string_view::npos) {
            if (start < text.size()) lines.push_back(text.substr(start));
            break;
        }
        lines.push_back(text.substr(start, nl - start));
        start = nl + 1;
    }
    return lines;
}

double duplicate_fraction(const std::vector<std::string_view>& parts) {
    if (parts.empty()) return 0.0;
    std::unordered_set<std::string_view> seen;
    std::size_t dups = 0;
    for (const auto& p : parts) {
        if (!seen.insert(p).second) ++dups;
    }
    return static_cast<double>(dups) / static_cast<double>(parts.size());
}

std::string lower_ascii(std::string_view s) {
    std::string out(s);
    for (char& c : out) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    return out;
}

}  // namespace

void FilterConfig::validate() const {
    auto check_fraction = [](double v, const char* name) {
        if (v < 0.0 || v > 1.0) {
            throw std::invalid_argument(std::string(name) + " must be in [0,1]");
        }
    };
    check_fraction(lang_threshold_primary, "lang_threshold_primary");
    check_fraction(lang_threshold_secondary, "lang_threshold_secondary");
    check_fraction(max_duplicate_line_fraction, "max_duplicate_line_fraction");
    check_fraction(max_duplicate_paragraph_fraction, "max_duplicate_paragraph_fraction");
    check_fraction(min_terminal_punct_line_fraction, "min_terminal_punct_line_fraction");
    for (const auto& [n, f] : max_top_ngram_fraction) {
        if (n < 1) throw std::invalid_argument("ngram size must be >= 1");
        check_fraction(f, "max_top_ngram_fraction");
    }
    if (avg_word_length_bounds.first >= avg_word_length_bounds.second) {
        throw std::invalid_argument("avg_word_length_bounds must satisfy low < high");
    }
    if (min_tokens < 0) throw std::invalid_argument("min_tokens must be >= 0");
}

FilterConfig FilterConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open filter config: " + path);
    nlohmann::json j;
    in >> j;
    FilterConfig cfg;
    cfg.lang_threshold_primary = j.value("lang_threshold_primary", cfg.lang_threshold_primary);
    cfg.lang_threshold_secondary =
        j.value("lang_threshold_secondary", cfg.lang_threshold_secondary);
    if (j.contains("stop_words")) {
        cfg.stop_words.clear();
        for (const auto& w : j.at("stop_words")) cfg.stop_words.insert(w.get<std::string>());
    }
    cfg.min_stop_word_hits = j.value("min_stop_word_hits", cfg.min_stop_word_hits);
    if (j.contains("avg_word_length_bounds")) {
        const auto& b = j.at("avg_word_length_bounds");
        cfg.avg_word_length_bounds = {b.at(0).get<double>(), b.at(1).get<double>()};
    }
    cfg.max_duplicate_line_fraction =
        j.value("max_duplicate_line_fraction", cfg.max_duplicate_line_fraction);
    cfg.max_duplicate_paragraph_fraction =
        j.value("max_duplicate_paragraph_fraction", cfg.max_duplicate_paragraph_fraction);
    if (j.contains("max_top_ngram_fraction")) {
        cfg.max_top_ngram_fraction.clear();
        for (const auto& [k, v] : j.at("max_top_ngram_fraction").items()) {
            cfg.max_top_ngram_fraction[std::stoi(k)] = v.get<double>();
        }
    }
    cfg.min_terminal_punct_line_fraction =
        j.value("min_terminal_punct_line_fraction", cfg.min_terminal_punct_line_fraction);
    cfg.min_tokens = j.value("min_tokens", cfg.min_tokens);
    cfg.toxicity_route_threshold = j.value("toxicity_route_threshold", cfg.toxicity_route_threshold);
    cfg.strict_routing = j.value("strict_routing", cfg.strict_routing);
    cfg.validate();
    return cfg;
}

void FilterConfig::load_stop_words(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open stop-word list: " + path);
    stop_words.clear();
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) stop_words.insert(lower_ascii(line));
    }
}

FilterVerdict language_gate(const Document& doc, const LanguageScorer& scorer,
                            const std::string& target, double threshold) {
    if (threshold < 0.0 || threshold > 1.0) {
        throw std::invalid_argument("language threshold must be in [0,1]");
    }
    FilterVerdict v;
    std::map<std::string, double> scores;
    try {
        scores = scorer.scores(doc.text);
    } catch (const std::exception&) {
        v.passed = false;
        v.rule = "scorer_error";
        return v;
    }
    const auto it = scores.find(target);
    const double confidence = it == scores.end() ? 0.0 : it->second;
    v.measurements["language_confidence"] = confidence;
    if (confidence < threshold) {
        v.passed = false;
        v.rule = "language";
    }
    return v;
}

FilterVerdict repetition_filter(const Document& doc, const FilterConfig& cfg) {
    FilterVerdict v;
    const auto lines = split_lines(doc.text);
    const double dup_lines = duplicate_fraction(lines);
    v.measurements["duplicate_line_fraction"] = dup_lines;

    // paragraphs: runs of non-empty lines
    std::vector<std::string_view> paragraphs;
    {
        const std::string_view text = doc.text;
        std::size_t start = 0;
        while (start < text.size()) {
            auto sep = text.find("\n\n", start);
            if (sep == std::string_view::npos) sep = text.size();
            auto para = text.substr(start, sep - start);
            while (!para.empty() && para.front() == '\n') para.remove_prefix(1);
            while (!para.empty() && para.back() == '\n') para.remove_suffix(1);
            if (!para.empty()) paragraphs.push_back(para);
            start = sep + 2;
        }
    }
    const double dup_paras = duplicate_fraction(paragraphs);
    v.measurements["duplicate_paragraph_fraction"] = dup_paras;

    if (dup_lines > cfg.max_duplicate_line_fraction) {
        v.passed = false;
        v.rule = "duplicate_lines";
        return v;
    }
    if (dup_paras > cfg.max_duplicate_paragraph_fraction) {
        v.passed = false;
        v.rule = "duplicate_paragraphs";
        return v;
    }

    const auto words = split_words(doc.text);
    const std::size_t text_chars = utf8::count_codepoints(doc.text);
    for (const auto& [n, limit] : cfg.max_top_ngram_fraction) {
        if (words.size() < static_cast<std::size_t>(n) || text_chars == 0) {
            v.measurements["top_" + std::to_string(n) + "gram_fraction"] = 0.0;
            continue;
        }
        // most frequent word n-gram, coverage = occurrences * gram chars / text chars
        std::unordered_map<std::string, std::size_t> counts;
        for (std::size_t i = 0; i + n <= words.size(); ++i) {
            std::string key;
            for (int k = 0; k < n; ++k) {
                if (k) key.push_back(' ');
                key.append(words[i + k]);
            }
            ++counts[key];
        }
        std::size_t best_count = 0;
        std::size_t best_chars = 0;
        for (const auto& [gram, count] : counts) {
            const std::size_t chars = utf8::count_codepoints(gram);
            if (count > best_count || (count == best_count && chars > best_chars)) {
                best_count = count;
                best_chars = chars;
            }
        }
        const double coverage =
            std::min(1.0, static_cast<double>(best_count * best_chars) /
                              static_cast<double>(text_chars));
        const std::string key = "top_" + std::to_string(n) + "gram_fraction";
        v.measurements[key] = coverage;
        if (best_count >= 2 && coverage > limit) {
            v.passed = false;
            v.rule = key;
            return v;
        }
    }
    return v;
}

FilterVerdict quality_filter(const Document& doc, const FilterConfig& cfg) {
    if (cfg.stop_words.empty()) throw std::invalid_argument("quality_filter requires stop words");
    FilterVerdict v;
    const auto words = split_words(doc.text);

    std::size_t stop_hits = 0;
    std::size_t total_word_chars = 0;
    for (const auto& w : words) {
        std::string bare;
        bare.reserve(w.size());
        std::size_t pos = 0;
        while (pos < w.size()) {
            const std::size_t cp_start = pos;
            const char32_t cp = utf8::next(w, pos);
            if (!utf8::is_punctuation(cp)) bare.append(w.substr(cp_start, pos - cp_start));
        }
        if (cfg.stop_words.count(lower_ascii(bare)) > 0) ++stop_hits;
        total_word_chars += utf8::count_codepoints(w);
    }
    v.measurements["stop_word_hits"] = static_cast<double>(stop_hits);
    if (stop_hits < static_cast<std::size_t>(cfg.min_stop_word_hits)) {
        v.passed = false;
        v.rule = "stop_words";
        return v;
    }

    const double avg_len =
        words.empty() ? 0.0
                      : static_cast<double>(total_word_chars) / static_cast<double>(words.size());
    v.measurements["avg_word_length"] = avg_len;
    if (avg_len < cfg.avg_word_length_bounds.first || avg_len > cfg.avg_word_length_bounds.second) {
        v.passed = false;
        v.rule = "avg_word_length";
        return v;
    }

    const auto lines = split_lines(doc.text);
    std::size_t terminal = 0, counted = 0;
    for (const auto& line : lines) {
        std::string_view trimmed = line;
        while (!trimmed.empty() && (trimmed.back() == ' ' || trimmed.back() == '\t' ||
                                    trimmed.back() == '\r')) {
            trimmed.remove_suffix(1);
        }
        if (trimmed.empty()) continue;
        ++counted;
        const char c = trimmed.back();
        if (c == '.' || c == '!' || c == '?' || c == '"' || c == '\'') ++terminal;
    }
    const double punct_fraction =
        counted == 0 ? 0.0 : static_cast<double>(terminal) / static_cast<double>(counted);
    v.measurements["terminal_punct_line_fraction"] = punct_fraction;
    if (punct_fraction < cfg.min_terminal_punct_line_fraction) {
        v.passed = false;
        v.rule = "terminal_punctuation";
        return v;
    }
    return v;
}

Scrubber::Scrubber(std::span<const ScrubRule> rules) {
    for (const auto& rule : rules) {
        try {
            compiled_.emplace_back(std::regex(rule.pattern, std::regex::ECMAScript),
                                   rule.replacement);
        } catch (const std::regex_error& e) {
            throw std::invalid_argument("invalid scrub pattern '" + rule.pattern +
                                        "': " + e.what());
        }
    }
}

std::string Scrubber::apply_text(const std::string& text) const {
    std::string out = text;
    for (const auto& [re, repl] : compiled_) {
        out = std::regex_replace(out, re, repl);
    }
    return out;
}

Document Scrubber::apply(const Document& doc) const {
    Document out = doc;
    out.text = apply_text(doc.text);
    return out;
}

Scrubber Scrubber::default_rules() {
    static const std::vector<ScrubRule> kRules = {
        {R"([A-Za-z0-9._%+-]+@[A-Za-z0-9.-]+\.[A-Za-z]{2,})", "<EMAIL>"},
        {R"(\+?\d[\d().\s-]{7,}\d)", "<PHONE>"},
        {R"(([!?*#=+~_-])\1{3,})", "$1$1$1"},
    };
    return Scrubber(kRules);
}

Route route_document(const Document& doc, const FilterConfig& cfg) {
    if (!doc.token_count || !doc.scores.toxicity_score) {
        if (cfg.strict_routing) {
            throw MissingScoreError("document '" + doc.id +
                                    "' lacks token_count or toxicity_score");
        }
        if (doc.token_count && *doc.token_count < cfg.min_tokens) return Route::kDropped;
        return Route::kDefault;
    }
    if (*doc.token_count < cfg.min_tokens) return Route::kDropped;
    if (*doc.scores.toxicity_score > cfg.toxicity_route_threshold) return Route::kExcluded;
    return Route::kDefault;
}

std::vector<CodepointRange> latin_default_ranges() {
    return {
        {0x09, 0x0D},      // control whitespace
        {0x20, 0x7E},      // basic latin
        {0xA0, 0xFF},      // latin-1 supplement
        {0x100, 0x17F},    // latin extended-A
        {0x180, 0x24F},    // latin extended-B
        {0x300, 0x36F},    // combining diacritics
        {0x2010, 0x2027},  // dashes, quotes
        {0x2030, 0x205E},  // general punctuation
        {0x20AC, 0x20AC},  // euro sign
    };
}

FilterVerdict latin_script_gate(const Document& doc, std::span<const CodepointRange> allowed) {
    FilterVerdict v;
    std::size_t pos = 0;
    const std::string_view text = doc.text;
    while (pos < text.size()) {
        const char32_t cp = utf8::next(text, pos);
        bool ok = false;
        for (const auto& [lo, hi] : allowed) {
            if (cp >= lo && cp <= hi) {
                ok = true;
                break;
            }
        }
        if (!ok) {
            v.passed = false;
            v.rule = "non_latin_codepoint";
            v.measurements["offending_codepoint"] = static_cast<double>(cp);
            return v;
        }
    }
    return v;
}

std::vector<FilterVerdict> batch_quality_verdicts_serial(std::span<const Document> docs,
                                                         const FilterConfig& cfg) {
    std::vector<FilterVerdict> out(docs.size());
    for (std::size_t i = 0; i < docs.size(); ++i) {
        auto rep = repetition_filter(docs[i], cfg);
        out[i] = rep.passed ? quality_filter(docs[i], cfg) : std::move(rep);
    }
    return out;
}

std::vector<FilterVerdict> batch_quality_verdicts(std::span<const Document> docs,
                                                  const FilterConfig& cfg, int threads) {
    std::vector<FilterVerdict> out(docs.size());
    const int nthreads = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 64) num_threads(nthreads)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(docs.size()); ++i) {
        auto rep = repetition_filter(docs[i], cfg);
        out[i] = rep.passed ? quality_filter(docs[i], cfg) : std::move(rep);
    }
    return out;
}

}  // namespace forge
