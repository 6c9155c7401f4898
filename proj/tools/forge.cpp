// forge: batch CLI over the corpus curation and training-planning library.
//
// Subcommands: stats, filter, route, dedup, decontam, tokeval, plan, signal,
// footprint. Data goes to files; logs to stderr; a summary JSON (counts,
// timings, resolved config) is printed to stdout and optionally written to
// --summary. Exit codes: 0 ok, 1 runtime failure, 2 usage, 3 data integrity.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "forge/decontam.hpp"
#include "forge/dedup.hpp"
#include "forge/filtering.hpp"
#include "forge/footprint.hpp"
#include "forge/jsonl.hpp"
#include "forge/planner.hpp"
#include "forge/signal.hpp"
#include "forge/tokenizer.hpp"
#include "forge/tokeval.hpp"

namespace {

using forge::Document;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIntegrity = 3;

class Timer {
  public:
    Timer() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

  private:
    std::chrono::steady_clock::time_point start_;
};

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    json j;
    in >> j;
    return j;
}

// File values fill in options the user did not pass on the command line or
// through the environment.
template <typename T>
void config_override(const CLI::App& app, const json& cfg, const std::string& flag,
                     const std::string& key, T& value) {
    if (cfg.is_null() || !cfg.contains(key)) return;
    const auto* opt = app.get_option_no_throw(flag);
    if (opt != nullptr && opt->count() > 0) return;  // CLI/env wins
    value = cfg.at(key).get<T>();
}

void emit_summary(json summary, const std::string& summary_path, double elapsed_seconds) {
    summary["timings"] = {{"seconds", elapsed_seconds}};
    const std::string text = summary.dump(2);
    std::cout << text << '\n';
    if (!summary_path.empty()) {
        std::ofstream out(summary_path);
        if (!out) throw std::runtime_error("cannot write summary to " + summary_path);
        out << text << '\n';
    }
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    return out;
}

std::vector<Document> read_input(const std::string& path, std::size_t error_cap,
                                 std::size_t* error_count) {
    auto reader = forge::DocumentReader::open(path, {}, error_cap);
    auto docs = reader.read_all();
    if (error_count) *error_count = reader.errors().size();
    for (const auto& err : reader.errors()) {
        std::cerr << "warning: " << path << ":" << err.line << ": " << err.message << '\n';
    }
    return docs;
}

forge::ModelShape parse_shape(const std::string& spec) {
    forge::ModelShape shape;
    char sep;
    std::istringstream in(spec);
    if (!(in >> shape.n_layer >> sep >> shape.d_model >> sep >> shape.seq_len >> sep >>
          shape.vocab)) {
        throw CLI::ValidationError("--shape", "expected l,h,s,V (e.g. 28,1536,4096,49152)");
    }
    shape.validate();
    return shape;
}

// ---------------------------------------------------------------------------
// stats

struct StatsArgs {
    std::string in, summary, config;
    int edu_threshold = 3;
    int toxicity_threshold = 3;
    std::size_t error_cap = 1000;
};

int run_stats(const CLI::App& app, StatsArgs& args) {
    Timer timer;
    if (!args.config.empty()) {
        const json cfg = load_json_file(args.config);
        config_override(app, cfg, "--edu-threshold", "edu_threshold", args.edu_threshold);
        config_override(app, cfg, "--toxicity-threshold", "toxicity_threshold",
                        args.toxicity_threshold);
    }
    std::size_t bad_lines = 0;
    const auto docs = read_input(args.in, args.error_cap, &bad_lines);
    const auto stats = forge::corpus_stats(docs, args.edu_threshold, args.toxicity_threshold);
    json summary;
    summary["subcommand"] = "stats";
    summary["config"] = {{"in", args.in},
                         {"edu_threshold", args.edu_threshold},
                         {"toxicity_threshold", args.toxicity_threshold}};
    summary["counts"] = {{"input", stats.document_count},
                         {"malformed_lines", bad_lines},
                         {"total_tokens", stats.total_tokens},
                         {"educational_tokens", stats.educational_tokens},
                         {"excluded", stats.excluded_count}};
    if (stats.total_tokens > 0) {
        summary["educational_fraction"] = static_cast<double>(stats.educational_tokens) /
                                          static_cast<double>(stats.total_tokens);
    }
    emit_summary(std::move(summary), args.summary, timer.seconds());
    return kExitOk;
}

// ---------------------------------------------------------------------------
// filter

struct FilterArgs {
    std::string in, out_passed, out_failed, summary, config, stop_words;
    std::string target_lang = "pt";
    double lang_threshold = 0.65;
    bool skip_language = false;
    bool latin_gate = false;
    bool scrub = false;
    int workers = 0;
    std::size_t error_cap = 1000;
};

int run_filter(const CLI::App& app, FilterArgs& args) {
    Timer timer;
    forge::FilterConfig cfg;
    if (!args.config.empty()) {
        cfg = forge::FilterConfig::from_json_file(args.config);
        const json raw = load_json_file(args.config);
        config_override(app, raw, "--target-lang", "target_lang", args.target_lang);
        config_override(app, raw, "--lang-threshold", "lang_threshold", args.lang_threshold);
    }
    if (!args.stop_words.empty()) cfg.load_stop_words(args.stop_words);
    if (cfg.stop_words.empty()) {
        // minimal built-in Portuguese stop-word list
        cfg.stop_words = {"a",   "o",   "e",   "de",  "da",  "do",  "em", "um",  "uma", "que",
                          "com", "por", "para", "como", "os",  "as",  "no", "na",  "se",  "mais"};
    }
    cfg.validate();

    auto docs = read_input(args.in, args.error_cap, nullptr);
    const forge::TrigramLanguageScorer scorer;
    const auto scrubber = forge::Scrubber::default_rules();
    const auto latin_ranges = forge::latin_default_ranges();

    auto passed_out = open_output(args.out_passed);
    std::ofstream failed_out;
    if (!args.out_failed.empty()) failed_out = open_output(args.out_failed);

    std::map<std::string, std::int64_t> failures;
    std::int64_t passed = 0;
    const auto quality = forge::batch_quality_verdicts(docs, cfg, args.workers);
    for (std::size_t i = 0; i < docs.size(); ++i) {
        // pipeline order: language gate, then repetition/quality, then script
        forge::FilterVerdict verdict;
        if (!args.skip_language) {
            verdict = forge::language_gate(docs[i], scorer, args.target_lang, args.lang_threshold);
        }
        if (verdict.passed) verdict = quality[i];
        if (verdict.passed && args.latin_gate) {
            verdict = forge::latin_script_gate(docs[i], latin_ranges);
        }
        if (verdict.passed) {
            const Document emitted = args.scrub ? scrubber.apply(docs[i]) : docs[i];
            passed_out << forge::document_to_json_line(emitted) << '\n';
            ++passed;
        } else {
            ++failures[verdict.rule];
            if (failed_out.is_open()) {
                json line = json::parse(forge::document_to_json_line(docs[i]));
                line["rule"] = verdict.rule;
                failed_out << line.dump() << '\n';
            }
        }
    }

    json summary;
    summary["subcommand"] = "filter";
    summary["config"] = {{"in", args.in},
                         {"target_lang", args.target_lang},
                         {"lang_threshold", args.lang_threshold},
                         {"skip_language", args.skip_language},
                         {"latin_gate", args.latin_gate},
                         {"scrub", args.scrub},
                         {"workers", args.workers}};
    summary["counts"] = {{"input", docs.size()},
                         {"passed", passed},
                         {"failed", docs.size() - static_cast<std::size_t>(passed)}};
    summary["failures_by_rule"] = failures;
    emit_summary(std::move(summary), args.summary, timer.seconds());
    return kExitOk;
}

// ---------------------------------------------------------------------------
// route

struct RouteArgs {
    std::string in, out_default, out_excluded, out_dropped, summary, config, vocab;
    std::int64_t min_tokens = 50;
    int toxicity_threshold = 3;
    bool lenient = false;
    std::size_t error_cap = 1000;
};

int run_route(const CLI::App& app, RouteArgs& args) {
    Timer timer;
    if (!args.config.empty()) {
        const json cfg = load_json_file(args.config);
        config_override(app, cfg, "--min-tokens", "min_tokens", args.min_tokens);
        config_override(app, cfg, "--toxicity-threshold", "toxicity_route_threshold",
                        args.toxicity_threshold);
    }
    forge::FilterConfig cfg;
    cfg.min_tokens = args.min_tokens;
    cfg.toxicity_route_threshold = args.toxicity_threshold;
    cfg.strict_routing = !args.lenient;

    auto docs = read_input(args.in, args.error_cap, nullptr);
    if (!args.vocab.empty()) {
        // fill missing token counts with the configured tokenizer
        const auto tokenizer = forge::ReferenceTokenizer::from_file(args.vocab);
        for (auto& doc : docs) {
            if (!doc.token_count) {
                doc.token_count =
                    static_cast<std::int64_t>(tokenizer.encode(doc.text).size());
            }
        }
    }
    auto default_out = open_output(args.out_default);
    auto excluded_out = open_output(args.out_excluded);
    std::ofstream dropped_out;
    if (!args.out_dropped.empty()) dropped_out = open_output(args.out_dropped);

    std::int64_t n_default = 0, n_excluded = 0, n_dropped = 0;
    for (const auto& doc : docs) {
        switch (forge::route_document(doc, cfg)) {
            case forge::Route::kDefault:
                default_out << forge::document_to_json_line(doc) << '\n';
                ++n_default;
                break;
            case forge::Route::kExcluded:
                excluded_out << forge::document_to_json_line(doc) << '\n';
                ++n_excluded;
                break;
            case forge::Route::kDropped:
                if (dropped_out.is_open()) {
                    dropped_out << forge::document_to_json_line(doc) << '\n';
                }
                ++n_dropped;
                break;
        }
    }

    json summary;
    summary["subcommand"] = "route";
    summary["config"] = {{"in", args.in},
                         {"min_tokens", args.min_tokens},
                         {"toxicity_route_threshold", args.toxicity_threshold},
                         {"lenient", args.lenient},
                         {"vocab", args.vocab}};
    summary["counts"] = {{"input", docs.size()},
                         {"default", n_default},
                         {"excluded", n_excluded},
                         {"dropped", n_dropped}};
    emit_summary(std::move(summary), args.summary, timer.seconds());
    return kExitOk;
}

// ---------------------------------------------------------------------------
// dedup

struct DedupArgs {
    std::string in, out_kept, out_removed, summary, config, audit, cache_in, cache_out;
    std::string mode = "minhash";
    std::string scope = "global";
    std::string group_key = "source";
    int buckets = 14;
    int hashes_per_bucket = 8;
    int ngram = 5;
    std::uint64_t seed = 0x1f9a3d5c7b2e4680ULL;
    double verify_jaccard = -1.0;  // < 0: no verification
    bool normalize_whitespace = false;
    int workers = 0;
    std::size_t error_cap = 1000;
};

int run_dedup(const CLI::App& app, DedupArgs& args) {
    Timer timer;
    if (!args.config.empty()) {
        const json cfg = load_json_file(args.config);
        config_override(app, cfg, "--mode", "mode", args.mode);
        config_override(app, cfg, "--buckets", "buckets", args.buckets);
        config_override(app, cfg, "--hashes-per-bucket", "hashes_per_bucket",
                        args.hashes_per_bucket);
        config_override(app, cfg, "--ngram", "ngram", args.ngram);
        config_override(app, cfg, "--seed", "seed", args.seed);
        config_override(app, cfg, "--scope", "scope", args.scope);
        config_override(app, cfg, "--group-key", "group_key", args.group_key);
    }
    auto docs = read_input(args.in, args.error_cap, nullptr);
    const std::size_t input_count = docs.size();

    forge::MinHashParams params;
    params.buckets = args.buckets;
    params.hashes_per_bucket = args.hashes_per_bucket;
    params.ngram_size = args.ngram;
    params.hash_seed = args.seed;

    forge::DedupResult result;
    if (args.mode == "exact") {
        result = args.normalize_whitespace
                     ? forge::exact_dedup(std::move(docs), forge::whitespace_normalizer)
                     : forge::exact_dedup(std::move(docs));
    } else if (args.mode == "minhash") {
        forge::DedupScope scope;
        if (args.scope == "per-group") {
            scope.mode = forge::DedupScope::Mode::kPerGroup;
            scope.group_key = args.group_key;
        } else if (args.scope != "global") {
            throw CLI::ValidationError("--scope", "must be 'global' or 'per-group'");
        }
        std::vector<forge::Signature> cached;
        if (!args.cache_in.empty()) {
            auto [cached_params, records] = forge::load_signature_cache(args.cache_in);
            if (!(cached_params == params)) {
                std::cerr << "error: signature cache parameters do not match the job\n";
                return kExitIntegrity;
            }
            if (records.size() != docs.size()) {
                std::cerr << "error: signature cache record count does not match the input\n";
                return kExitIntegrity;
            }
            cached.reserve(records.size());
            for (std::size_t i = 0; i < records.size(); ++i) {
                if (records[i].first != docs[i].id) {
                    std::cerr << "error: signature cache ids diverge from the input stream\n";
                    return kExitIntegrity;
                }
                cached.push_back(std::move(records[i].second));
            }
        } else {
            cached = forge::compute_signatures(docs, params, args.workers);
        }
        if (!args.cache_out.empty()) {
            std::vector<std::string> ids;
            ids.reserve(docs.size());
            for (const auto& d : docs) ids.push_back(d.id);
            forge::save_signature_cache(args.cache_out, params, ids, cached);
        }
        const std::optional<double> verify =
            args.verify_jaccard >= 0.0 ? std::optional<double>(args.verify_jaccard)
                                       : std::nullopt;
        result = forge::minhash_dedup(std::move(docs), params, scope, args.workers, cached,
                                      verify);
    } else {
        throw CLI::ValidationError("--mode", "must be 'exact' or 'minhash'");
    }

    {
        auto kept_out = open_output(args.out_kept);
        forge::write_documents(result.kept, kept_out);
        auto removed_out = open_output(args.out_removed);
        forge::write_documents(result.removed, removed_out);
    }
    if (!args.audit.empty()) {
        auto audit_out = open_output(args.audit);
        for (std::size_t c = 0; c < result.clusters.size(); ++c) {
            json line;
            line["cluster"] = c;
            line["kept"] = result.clusters[c].front();
            line["removed"] = json::array();
            for (std::size_t m = 1; m < result.clusters[c].size(); ++m) {
                line["removed"].push_back(result.clusters[c][m]);
            }
            audit_out << line.dump() << '\n';
        }
    }

    json summary;
    summary["subcommand"] = "dedup";
    summary["config"] = {{"in", args.in},          {"mode", args.mode},
                         {"buckets", args.buckets}, {"hashes_per_bucket", args.hashes_per_bucket},
                         {"ngram", args.ngram},     {"seed", args.seed},
                         {"scope", args.scope},     {"group_key", args.group_key},
                         {"workers", args.workers}};
    summary["counts"] = {{"input", input_count},
                         {"kept", result.kept.size()},
                         {"removed", result.removed.size()},
                         {"clusters", result.clusters.size()}};
    emit_summary(std::move(summary), args.summary, timer.seconds());
    return kExitOk;
}

// ---------------------------------------------------------------------------
// decontam

struct DecontamArgs {
    std::string in, benchmark, out_clean, out_flagged, summary, config, vocab;
    std::string index_in, index_out;
    std::string mode = "approximate";
    int k_min = 8;
    int k_max = 32;
    int workers = 0;
    std::size_t error_cap = 1000;
};

int run_decontam(const CLI::App& app, DecontamArgs& args) {
    Timer timer;
    if (!args.config.empty()) {
        const json cfg = load_json_file(args.config);
        config_override(app, cfg, "--kmin", "k_min", args.k_min);
        config_override(app, cfg, "--kmax", "k_max", args.k_max);
        config_override(app, cfg, "--mode", "mode", args.mode);
    }
    forge::MatchMode mode;
    if (args.mode == "exact") {
        mode = forge::MatchMode::kExact;
    } else if (args.mode == "approximate") {
        mode = forge::MatchMode::kApproximate;
    } else {
        throw CLI::ValidationError("--mode", "must be 'exact' or 'approximate'");
    }

    const auto tokenizer = forge::ReferenceTokenizer::from_file(args.vocab);

    std::optional<forge::BenchmarkIndex> index;
    if (!args.index_in.empty()) {
        index = forge::BenchmarkIndex::load(args.index_in);
    } else {
        if (args.benchmark.empty()) {
            throw CLI::RequiredError("--benchmark (or --index-in)");
        }
        const auto bench_docs = read_input(args.benchmark, args.error_cap, nullptr);
        std::vector<std::string> texts;
        texts.reserve(bench_docs.size());
        for (const auto& d : bench_docs) texts.push_back(d.text);
        index = forge::build_index(texts, tokenizer, args.k_min, args.k_max);
        if (index->short_text_count() > 0) {
            std::cerr << "warning: " << index->short_text_count()
                      << " benchmark texts were shorter than k_min and stored no grams\n";
        }
    }
    if (!args.index_out.empty()) index->save(args.index_out);

    auto docs = read_input(args.in, args.error_cap, nullptr);
    const std::size_t input_count = docs.size();
    forge::DecontamResult result;
    try {
        result = forge::decontaminate(std::move(docs), *index, tokenizer, mode, args.workers);
    } catch (const forge::FingerprintMismatch& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIntegrity;
    }

    {
        auto clean_out = open_output(args.out_clean);
        forge::write_documents(result.clean, clean_out);
    }
    {
        auto flagged_out = open_output(args.out_flagged);
        for (std::size_t i = 0; i < result.flagged.size(); ++i) {
            json line = json::parse(forge::document_to_json_line(result.flagged[i]));
            const auto& report = result.flagged_reports[i];
            line["longest_match_len"] = report.longest_match_len;
            line["match_kind"] =
                report.match_kind == forge::MatchKind::kExact ? "exact" : "approximate";
            line["matched_span"] = {report.matched_span.first, report.matched_span.second};
            flagged_out << line.dump() << '\n';
        }
    }

    json summary;
    summary["subcommand"] = "decontam";
    summary["config"] = {{"in", args.in},   {"benchmark", args.benchmark},
                         {"k_min", args.k_min}, {"k_max", args.k_max},
                         {"mode", args.mode},   {"vocab", args.vocab},
                         {"workers", args.workers}};
    summary["counts"] = {{"input", input_count},
                         {"clean", result.clean.size()},
                         {"flagged", result.flagged.size()},
                         {"index_grams", index->gram_count()}};
    emit_summary(std::move(summary), args.summary, timer.seconds());
    return kExitOk;
}

// ---------------------------------------------------------------------------
// tokeval

struct TokevalArgs {
    std::string in, vocab, summary, config, report;
    std::string shape;
    double base_units = 0.0;
    int workers = 0;
    std::size_t error_cap = 1000;
};

int run_tokeval(const CLI::App& app, TokevalArgs& args) {
    Timer timer;
    if (!args.config.empty()) {
        const json cfg = load_json_file(args.config);
        config_override(app, cfg, "--shape", "shape", args.shape);
        config_override(app, cfg, "--base-units", "base_units", args.base_units);
    }
    const auto tokenizer = forge::ReferenceTokenizer::from_file(args.vocab);
    const auto docs = read_input(args.in, args.error_cap, nullptr);
    std::vector<std::string> corpus;
    corpus.reserve(docs.size());
    for (const auto& d : docs) corpus.push_back(d.text);
    const auto report = forge::evaluate_tokenizer(corpus, tokenizer, args.workers);

    json rj;
    rj["word_count"] = report.word_count;
    rj["token_count"] = report.token_count;
    rj["char_count"] = report.char_count;
    rj["fertility"] = report.fertility();
    rj["pcw"] = report.pcw();
    rj["chars_per_token"] = report.chars_per_token();
    rj["vocab_size"] = report.vocab_size;
    if (!args.shape.empty() && args.base_units > 0.0) {
        forge::ModelShape shape = parse_shape(args.shape);
        shape.vocab = static_cast<std::int64_t>(report.vocab_size);
        rj["training_cost_flops"] = forge::training_cost(shape, args.base_units,
                                                         report.fertility());
    }
    if (!args.report.empty()) {
        std::ofstream out(args.report);
        if (!out) throw std::runtime_error("cannot write report to " + args.report);
        out << rj.dump(2) << '\n';
    }

    json summary;
    summary["subcommand"] = "tokeval";
    summary["config"] = {{"in", args.in},
                         {"vocab", args.vocab},
                         {"shape", args.shape},
                         {"base_units", args.base_units},
                         {"workers", args.workers}};
    summary["counts"] = {{"documents", docs.size()}, {"words", report.word_count}};
    summary["report"] = rj;
    emit_summary(std::move(summary), args.summary, timer.seconds());
    return kExitOk;
}

// ---------------------------------------------------------------------------
// plan

struct PlanArgs {
    std::string shape, plan_file, out, lr_csv, summary, config;
    double tokens = 0.0;
    double params = 0.0;
    std::int64_t warmup_steps = 2000;
    std::int64_t decay_steps = 0;  // 0: 18% of total
    std::int64_t lr_every = 100;
};

int run_plan(const CLI::App& app, PlanArgs& args) {
    Timer timer;
    if (!args.config.empty()) {
        const json cfg = load_json_file(args.config);
        config_override(app, cfg, "--shape", "shape", args.shape);
        config_override(app, cfg, "--tokens", "tokens", args.tokens);
        config_override(app, cfg, "--params", "params", args.params);
    }

    forge::TrainingPlan plan;
    bool have_plan_file = false;
    if (!args.plan_file.empty()) {
        plan = forge::TrainingPlan::from_json_file(args.plan_file);
        have_plan_file = true;
    } else {
        if (args.shape.empty() || args.tokens <= 0.0) {
            throw CLI::RequiredError("--shape and --tokens (or --plan)");
        }
        plan.shape = parse_shape(args.shape);
    }
    double tokens = args.tokens;
    if (tokens <= 0.0 && plan.batch_tokens > 0 && plan.schedule.total_steps() > 0) {
        tokens = static_cast<double>(plan.batch_tokens) *
                 static_cast<double>(plan.schedule.total_steps());
    }
    if (tokens <= 0.0) {
        throw CLI::RequiredError("--tokens (or a plan with batch_tokens and a schedule)");
    }

    json out;
    out["shape"] = {{"n_layer", plan.shape.n_layer},
                    {"d_model", plan.shape.d_model},
                    {"seq_len", plan.shape.seq_len},
                    {"vocab", plan.shape.vocab}};
    out["tokens"] = tokens;

    const double shape_budget = forge::compute_budget({plan.shape, tokens});
    double n_params = args.params;
    bool estimated = false;
    if (n_params <= 0.0 && plan.shape.params) n_params = *plan.shape.params;
    if (n_params <= 0.0) {
        // classic dense-transformer approximation
        const double l = plan.shape.n_layer, h = plan.shape.d_model;
        n_params = 12.0 * l * h * h + static_cast<double>(plan.shape.vocab) * h;
        estimated = true;
    }
    const double simple = forge::simple_budget(n_params, tokens);
    out["budgets"] = {{"shape_formula_flops", shape_budget},
                      {"simple_6nd_flops", simple},
                      {"params", n_params},
                      {"params_estimated", estimated}};

    auto hp_json = [](const forge::HeuristicHparams& h) {
        return json{{"max_lr", h.max_lr},
                    {"raw_batch_tokens", h.raw_batch_tokens},
                    {"batch_tokens", h.batch_tokens},
                    {"muon_lr", h.muon_lr}};
    };
    const auto hp_shape = forge::heuristic_hparams(shape_budget);
    const auto hp_simple = forge::heuristic_hparams(simple);
    out["hparams"] = {{"from_shape_budget", hp_json(hp_shape)},
                      {"from_6nd_budget", hp_json(hp_simple)}};

    // schedule: from the plan file when present, otherwise derived
    if (!have_plan_file || plan.schedule.total_steps() == 0) {
        const auto& hp = hp_simple;
        plan.batch_tokens = hp.batch_tokens;
        const auto total = static_cast<std::int64_t>(
            std::llround(tokens / static_cast<double>(hp.batch_tokens)));
        forge::ScheduleSpec spec;
        spec.warmup_steps = std::min(args.warmup_steps, total);
        spec.decay_steps = args.decay_steps > 0
                               ? args.decay_steps
                               : static_cast<std::int64_t>(std::llround(0.18 * total));
        spec.stable_steps = std::max<std::int64_t>(0, total - spec.warmup_steps - spec.decay_steps);
        spec.peak_lr = {{"adamw", hp.max_lr}, {"muon", hp.muon_lr}};
        plan.schedule = spec;
    }
    out["schedule"] = {{"warmup_steps", plan.schedule.warmup_steps},
                       {"stable_steps", plan.schedule.stable_steps},
                       {"decay_steps", plan.schedule.decay_steps},
                       {"total_steps", plan.schedule.total_steps()},
                       {"peak_lr", plan.schedule.peak_lr},
                       {"min_lr", plan.schedule.min_lr}};
    out["batch_tokens"] = plan.batch_tokens;

    if (!plan.stages.empty()) {
        const auto mixture = forge::validate_mixture(plan);
        json stages = json::array();
        for (const auto& stage : mixture.stages) {
            stages.push_back({{"name", stage.name},
                              {"effective_total", stage.effective_total},
                              {"language_tokens", stage.language_tokens},
                              {"language_shares", stage.language_shares}});
        }
        json discrepancies = json::array();
        for (const auto& d : mixture.discrepancies) {
            discrepancies.push_back({{"stage", d.stage},
                                     {"what", d.what},
                                     {"declared", d.declared},
                                     {"computed", d.computed}});
        }
        out["mixture"] = {{"stages", stages},
                          {"grand_total", mixture.grand_total},
                          {"discrepancies", discrepancies}};
        if (mixture.budget_mismatch_fraction) {
            out["mixture"]["budget_mismatch_fraction"] = *mixture.budget_mismatch_fraction;
        }
    }

    if (!args.lr_csv.empty()) {
        std::ofstream csv(args.lr_csv);
        if (!csv) throw std::runtime_error("cannot write LR curve to " + args.lr_csv);
        csv << "step";
        for (const auto& [group, peak] : plan.schedule.peak_lr) csv << ',' << group;
        csv << '\n';
        for (std::int64_t step = 0; step <= plan.schedule.total_steps();
             step += args.lr_every) {
            csv << step;
            for (const auto& [group, peak] : plan.schedule.peak_lr) {
                csv << ',' << forge::lr_at(step, plan.schedule, group);
            }
            csv << '\n';
        }
    }
    if (!args.out.empty()) {
        std::ofstream f(args.out);
        if (!f) throw std::runtime_error("cannot write report to " + args.out);
        f << out.dump(2) << '\n';
    }

    // human-readable table
    std::cerr << "budget (shape formula): " << shape_budget << " FLOPs\n"
              << "budget (6ND):           " << simple << " FLOPs\n"
              << "max_lr: " << hp_simple.max_lr << "  batch_tokens: " << hp_simple.batch_tokens
              << "  muon_lr: " << hp_simple.muon_lr << '\n';

    json summary;
    summary["subcommand"] = "plan";
    summary["config"] = {{"shape", args.shape},
                         {"tokens", tokens},
                         {"plan_file", args.plan_file},
                         {"warmup_steps", args.warmup_steps},
                         {"lr_every", args.lr_every}};
    summary["report"] = out;
    emit_summary(std::move(summary), args.summary, timer.seconds());
    return kExitOk;
}

// ---------------------------------------------------------------------------
// signal

struct SignalArgs {
    std::string scores, specs, scaling, out, csv_out, summary, config;
    double margin = 5.0;
    std::size_t scaling_baseline = 0;
    double flops_per_token = 0.0;
    bool raw_scale = false;
};

int run_signal(const CLI::App& app, SignalArgs& args) {
    Timer timer;
    if (!args.config.empty()) {
        const json cfg = load_json_file(args.config);
        config_override(app, cfg, "--margin", "margin", args.margin);
    }

    json out;
    std::map<std::string, forge::BenchmarkSpec> specs;
    if (!args.specs.empty()) {
        for (const auto& sj : load_json_file(args.specs)) {
            forge::BenchmarkSpec spec;
            spec.name = sj.value("name", "");
            spec.baseline = sj.value("baseline", 0.0);
            spec.max_score = sj.value("max_score", 100.0);
            spec.preferred_metric = sj.value("preferred_metric", "");
            specs[spec.name] = spec;
        }
    }

    std::size_t n_points = 0;
    if (!args.scores.empty()) {
        std::map<std::string, forge::ScoreSeries> series;
        auto in = forge::open_input(args.scores);
        const bool csv = args.scores.size() >= 4 &&
                         args.scores.substr(args.scores.size() - 4) == ".csv";
        std::string line;
        std::vector<std::string> header;
        while (std::getline(*in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            std::string benchmark;
            forge::ScorePoint p;
            if (csv) {
                std::vector<std::string> cells;
                std::stringstream row(line);
                std::string cell;
                while (std::getline(row, cell, ',')) cells.push_back(cell);
                if (header.empty()) {
                    header = cells;
                    continue;
                }
                for (std::size_t c = 0; c < header.size() && c < cells.size(); ++c) {
                    if (header[c] == "benchmark") benchmark = cells[c];
                    if (header[c] == "step") p.step = std::stoll(cells[c]);
                    if (header[c] == "tokens") p.tokens = std::stod(cells[c]);
                    if (header[c] == "score") p.score = std::stod(cells[c]);
                }
            } else {
                const json j = json::parse(line);
                p.step = j.at("step").get<std::int64_t>();
                p.tokens = j.value("tokens", 0.0);
                p.score = j.at("score").get<double>();
                benchmark = j.at("benchmark").get<std::string>();
            }
            series[benchmark].points.push_back(p);
            ++n_points;
        }
        if (n_points == 0) throw std::runtime_error("no score points");

        std::vector<forge::BenchmarkSignalRow> rows;
        std::vector<std::pair<double, forge::BenchmarkSpec>> latest;
        json benchmarks = json::object();
        for (auto& [name, s] : series) {
            std::sort(s.points.begin(), s.points.end(),
                      [](const auto& a, const auto& b) { return a.step < b.step; });
            const auto spec_it = specs.find(name);
            const forge::BenchmarkSpec spec =
                spec_it != specs.end() ? spec_it->second : forge::BenchmarkSpec{name, 0.0, 100.0, ""};
            const auto metrics = forge::series_metrics(
                s, args.raw_scale ? forge::ScoreScale::kRaw : forge::ScoreScale::kPercent);
            const auto surpass = forge::surpass_point(s, spec, args.margin);
            json bj;
            bj["points"] = s.points.size();
            bj["mean_abs_change"] = metrics.mean_abs_change;
            bj["snr"] = metrics.snr ? json(*metrics.snr) : json(nullptr);
            bj["spearman"] = metrics.spearman ? json(*metrics.spearman) : json(nullptr);
            if (surpass) {
                bj["surpass"] = {{"step", surpass->step},
                                 {"tokens", surpass->tokens},
                                 {"score", surpass->score}};
            } else {
                bj["surpass"] = nullptr;
            }
            benchmarks[name] = bj;
            forge::BenchmarkSignalRow row;
            row.name = name;
            if (surpass) row.tokens_to_surpass = surpass->tokens;
            row.snr = metrics.snr;
            row.spearman = metrics.spearman;
            rows.push_back(row);
            latest.emplace_back(s.points.back().score, spec);
        }
        const auto tiers = forge::classify_tiers(rows);
        for (const auto& [name, tier] : tiers) {
            benchmarks[name]["tier"] = tier == forge::Tier::kEasy
                                           ? "easy"
                                           : tier == forge::Tier::kHard ? "hard" : "unclassified";
        }
        out["benchmarks"] = benchmarks;
        out["npm_latest"] = forge::npm(latest);
        out["std_convention"] = "sample (n-1)";

        if (!args.csv_out.empty()) {
            std::ofstream csv_file(args.csv_out);
            if (!csv_file) throw std::runtime_error("cannot write CSV to " + args.csv_out);
            csv_file << "benchmark,points,mean_abs_change,snr,spearman,surpass_step,"
                        "surpass_tokens,tier\n";
            for (const auto& [name, bj] : benchmarks.items()) {
                csv_file << name << ',' << bj["points"].get<std::size_t>() << ','
                         << bj["mean_abs_change"].get<double>() << ',';
                if (!bj["snr"].is_null()) csv_file << bj["snr"].get<double>();
                csv_file << ',';
                if (!bj["spearman"].is_null()) csv_file << bj["spearman"].get<double>();
                csv_file << ',';
                if (!bj["surpass"].is_null()) {
                    csv_file << bj["surpass"]["step"].get<std::int64_t>() << ','
                             << bj["surpass"]["tokens"].get<double>();
                } else {
                    csv_file << ',';
                }
                csv_file << ',' << bj["tier"].get<std::string>() << '\n';
            }
        }
    }

    if (!args.scaling.empty()) {
        std::vector<forge::ScalingRun> runs;
        for (const auto& rj : load_json_file(args.scaling)) {
            forge::ScalingRun run;
            run.nodes = rj.value("nodes", 0);
            run.gpus = rj.at("gpus").get<int>();
            run.time_per_step = rj.at("time_per_step").get<double>();
            run.global_batch_tokens = rj.at("global_batch_tokens").get<double>();
            runs.push_back(run);
        }
        const auto table = forge::scaling_report(
            runs, args.scaling_baseline,
            args.flops_per_token > 0.0 ? std::optional<double>(args.flops_per_token)
                                       : std::nullopt);
        json tj = json::array();
        for (const auto& row : table) {
            json r = {{"nodes", row.nodes},
                      {"gpus", row.gpus},
                      {"time_per_step", row.time_per_step},
                      {"tokens_per_second", row.tokens_per_second},
                      {"speedup", row.speedup},
                      {"efficiency_percent", row.efficiency * 100.0}};
            if (row.tflops_per_gpu) r["tflops_per_gpu"] = *row.tflops_per_gpu;
            tj.push_back(r);
        }
        out["scaling"] = tj;
    }

    if (args.scores.empty() && args.scaling.empty()) {
        throw CLI::RequiredError("--scores or --scaling");
    }
    if (!args.out.empty()) {
        std::ofstream f(args.out);
        if (!f) throw std::runtime_error("cannot write report to " + args.out);
        f << out.dump(2) << '\n';
    }

    json summary;
    summary["subcommand"] = "signal";
    summary["config"] = {{"scores", args.scores},
                         {"specs", args.specs},
                         {"margin", args.margin},
                         {"scaling", args.scaling}};
    summary["counts"] = {{"score_points", n_points}};
    summary["report"] = out;
    emit_summary(std::move(summary), args.summary, timer.seconds());
    return kExitOk;
}

// ---------------------------------------------------------------------------
// footprint

struct FootprintArgs {
    std::string records, runs, gpu_spec, out, summary, config;
    double intensity = forge::kDefaultGridIntensity;
    bool table = false;
};

int run_footprint(const CLI::App& app, FootprintArgs& args) {
    Timer timer;
    if (!args.config.empty()) {
        const json cfg = load_json_file(args.config);
        config_override(app, cfg, "--intensity", "intensity", args.intensity);
    }
    std::vector<forge::EnergyRecord> records;
    if (!args.records.empty()) {
        for (const auto& rj : load_json_file(args.records)) {
            forge::EnergyRecord rec;
            rec.label = rj.value("label", "");
            rec.energy_kwh = rj.value("energy_kwh", 0.0);
            if (rj.contains("gpu_hours")) rec.gpu_hours = rj.at("gpu_hours").get<double>();
            if (rj.contains("avg_power_kw")) rec.avg_power_kw = rj.at("avg_power_kw").get<double>();
            if (rj.contains("intensity_kg_per_kwh")) {
                rec.intensity_kg_per_kwh = rj.at("intensity_kg_per_kwh").get<double>();
            }
            if (rec.energy_kwh == 0.0 && rec.gpu_hours && rec.avg_power_kw) {
                rec.energy_kwh = forge::energy_from_gpu_hours(*rec.gpu_hours, *rec.avg_power_kw);
            }
            records.push_back(std::move(rec));
        }
    }
    std::vector<forge::RunAllocation> runs;
    if (!args.runs.empty()) {
        forge::GpuSpec shared;
        bool have_shared = false;
        if (!args.gpu_spec.empty()) {
            shared = forge::GpuSpec::from_json_file(args.gpu_spec);
            have_shared = true;
        }
        for (const auto& rj : load_json_file(args.runs)) {
            forge::RunAllocation run;
            run.label = rj.value("label", "");
            run.run_flops = rj.at("run_flops").get<double>();
            run.mfu = rj.value("mfu", 0.6);
            if (rj.contains("gpu_spec_file")) {
                run.spec = forge::GpuSpec::from_json_file(rj.at("gpu_spec_file").get<std::string>());
            } else if (have_shared) {
                run.spec = shared;
            } else {
                throw std::runtime_error("run '" + run.label +
                                         "' has no GPU spec (use --gpu-spec or gpu_spec_file)");
            }
            runs.push_back(std::move(run));
        }
    }
    const auto report = forge::aggregate_footprint(records, runs, args.intensity);

    json rj;
    rj["total_kwh"] = report.total_kwh;
    rj["total_kgco2e"] = report.total_kgco2e;
    rj["per_element_kg"] = report.per_element_kg;
    rj["intensity_kg_per_kwh"] = args.intensity;
    json phases = json::array();
    for (const auto& phase : report.phases) {
        phases.push_back({{"label", phase.label}, {"kwh", phase.kwh}, {"kgco2e", phase.kgco2e}});
    }
    rj["phases"] = phases;
    json runs_json = json::array();
    for (const auto& run : report.runs) {
        runs_json.push_back({{"label", run.label}, {"element_kg", run.element_kg}});
    }
    rj["runs"] = runs_json;

    if (args.table) {
        std::ostringstream t;
        t << std::left << std::setw(40) << "Phase" << std::right << std::setw(16)
          << "Energy (kWh)" << std::setw(20) << "Carbon (kg CO2e)" << '\n';
        t << std::string(76, '-') << '\n';
        for (const auto& phase : report.phases) {
            t << std::left << std::setw(40) << phase.label << std::right << std::setw(16)
              << std::fixed << std::setprecision(0) << phase.kwh << std::setw(20) << phase.kgco2e
              << '\n';
        }
        t << std::string(76, '-') << '\n';
        t << std::left << std::setw(40) << "Total (tracked)" << std::right << std::setw(16)
          << report.total_kwh << std::setw(20) << report.total_kgco2e << '\n';
        std::cerr << t.str();
    }
    if (!args.out.empty()) {
        std::ofstream f(args.out);
        if (!f) throw std::runtime_error("cannot write report to " + args.out);
        f << rj.dump(2) << '\n';
    }

    json summary;
    summary["subcommand"] = "footprint";
    summary["config"] = {{"records", args.records},
                         {"runs", args.runs},
                         {"intensity", args.intensity}};
    summary["counts"] = {{"phases", report.phases.size()}, {"runs", report.runs.size()}};
    summary["report"] = rj;
    emit_summary(std::move(summary), args.summary, timer.seconds());
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"corpus curation and training-planning toolkit"};
    app.require_subcommand(1);

    StatsArgs stats;
    auto* stats_cmd = app.add_subcommand("stats", "corpus-level token and score statistics");
    stats_cmd->add_option("--in", stats.in, "input JSONL (gzip accepted)")->required();
    stats_cmd->add_option("--edu-threshold", stats.edu_threshold,
                          "educational score threshold (inclusive)");
    stats_cmd->add_option("--toxicity-threshold", stats.toxicity_threshold,
                          "toxicity exclusion threshold (strictly greater)");
    stats_cmd->add_option("--error-cap", stats.error_cap, "malformed-line cap before aborting");
    stats_cmd->add_option("--summary", stats.summary, "write the summary JSON here too");
    stats_cmd->add_option("--config", stats.config, "JSON config file");

    FilterArgs filter;
    auto* filter_cmd = app.add_subcommand("filter", "repetition/quality/language filtering");
    filter_cmd->add_option("--in", filter.in)->required();
    filter_cmd->add_option("--out-passed", filter.out_passed)->required();
    filter_cmd->add_option("--out-failed", filter.out_failed);
    filter_cmd->add_option("--stop-words", filter.stop_words, "one word per line");
    filter_cmd->add_option("--target-lang", filter.target_lang)->envname("FORGE_TARGET_LANG");
    filter_cmd->add_option("--lang-threshold", filter.lang_threshold);
    filter_cmd->add_flag("--no-lang", filter.skip_language, "skip the language gate");
    filter_cmd->add_flag("--latin", filter.latin_gate, "require Latin-script text");
    filter_cmd->add_flag("--scrub", filter.scrub, "apply the bundled PII/formatting scrubbers");
    filter_cmd->add_option("--workers", filter.workers)->envname("FORGE_WORKERS");
    filter_cmd->add_option("--error-cap", filter.error_cap);
    filter_cmd->add_option("--summary", filter.summary);
    filter_cmd->add_option("--config", filter.config);

    RouteArgs route;
    auto* route_cmd = app.add_subcommand("route", "final length/toxicity routing");
    route_cmd->add_option("--in", route.in)->required();
    route_cmd->add_option("--out-default", route.out_default)->required();
    route_cmd->add_option("--out-excluded", route.out_excluded)->required();
    route_cmd->add_option("--out-dropped", route.out_dropped);
    route_cmd->add_option("--min-tokens", route.min_tokens)->envname("FORGE_MIN_TOKENS");
    route_cmd->add_option("--toxicity-threshold", route.toxicity_threshold);
    route_cmd->add_option("--vocab", route.vocab,
                          "tokenizer vocabulary; fills missing token_count lazily");
    route_cmd->add_flag("--lenient", route.lenient,
                        "route documents with missing scores to default");
    route_cmd->add_option("--error-cap", route.error_cap);
    route_cmd->add_option("--summary", route.summary);
    route_cmd->add_option("--config", route.config);

    DedupArgs dedup;
    auto* dedup_cmd = app.add_subcommand("dedup", "exact or MinHash-LSH deduplication");
    dedup_cmd->add_option("--in", dedup.in)->required();
    dedup_cmd->add_option("--out-kept", dedup.out_kept)->required();
    dedup_cmd->add_option("--out-removed", dedup.out_removed)->required();
    dedup_cmd->add_option("--mode", dedup.mode, "exact | minhash");
    dedup_cmd->add_option("--buckets", dedup.buckets);
    dedup_cmd->add_option("--hashes-per-bucket", dedup.hashes_per_bucket);
    dedup_cmd->add_option("--ngram", dedup.ngram);
    dedup_cmd->add_option("--seed", dedup.seed)->envname("FORGE_SEED");
    dedup_cmd->add_option("--scope", dedup.scope, "global | per-group");
    dedup_cmd->add_option("--group-key", dedup.group_key);
    dedup_cmd->add_option("--verify-jaccard", dedup.verify_jaccard,
                          "re-verify candidate pairs at this exact Jaccard threshold");
    dedup_cmd->add_flag("--normalize-whitespace", dedup.normalize_whitespace,
                        "normalize whitespace before exact hashing");
    dedup_cmd->add_option("--audit", dedup.audit, "removed-document audit JSONL");
    dedup_cmd->add_option("--cache-in", dedup.cache_in, "resume from a signature cache");
    dedup_cmd->add_option("--cache-out", dedup.cache_out, "write the signature cache");
    dedup_cmd->add_option("--workers", dedup.workers)->envname("FORGE_WORKERS");
    dedup_cmd->add_option("--error-cap", dedup.error_cap);
    dedup_cmd->add_option("--summary", dedup.summary);
    dedup_cmd->add_option("--config", dedup.config);

    DecontamArgs decontam;
    auto* decontam_cmd =
        app.add_subcommand("decontam", "token-level k-gram contamination removal");
    decontam_cmd->add_option("--in", decontam.in)->required();
    decontam_cmd->add_option("--benchmark", decontam.benchmark, "benchmark JSONL");
    decontam_cmd->add_option("--out-clean", decontam.out_clean)->required();
    decontam_cmd->add_option("--out-flagged", decontam.out_flagged)->required();
    decontam_cmd->add_option("--vocab", decontam.vocab, "tokenizer vocabulary file")->required();
    decontam_cmd->add_option("--kmin", decontam.k_min);
    decontam_cmd->add_option("--kmax", decontam.k_max);
    decontam_cmd->add_option("--mode", decontam.mode, "exact | approximate");
    decontam_cmd->add_option("--index-in", decontam.index_in, "load a serialized index");
    decontam_cmd->add_option("--index-out", decontam.index_out, "save the built index");
    decontam_cmd->add_option("--workers", decontam.workers)->envname("FORGE_WORKERS");
    decontam_cmd->add_option("--error-cap", decontam.error_cap);
    decontam_cmd->add_option("--summary", decontam.summary);
    decontam_cmd->add_option("--config", decontam.config);

    TokevalArgs tokeval;
    auto* tokeval_cmd = app.add_subcommand("tokeval", "tokenizer efficiency metrics");
    tokeval_cmd->add_option("--in", tokeval.in)->required();
    tokeval_cmd->add_option("--vocab", tokeval.vocab)->required();
    tokeval_cmd->add_option("--report", tokeval.report, "write the report JSON here");
    tokeval_cmd->add_option("--shape", tokeval.shape, "l,h,s,V for cost estimation");
    tokeval_cmd->add_option("--base-units", tokeval.base_units,
                            "base unit count; D = base_units * fertility");
    tokeval_cmd->add_option("--workers", tokeval.workers)->envname("FORGE_WORKERS");
    tokeval_cmd->add_option("--error-cap", tokeval.error_cap);
    tokeval_cmd->add_option("--summary", tokeval.summary);
    tokeval_cmd->add_option("--config", tokeval.config);

    PlanArgs plan;
    auto* plan_cmd = app.add_subcommand("plan", "compute budgets, hparams, WSD schedule");
    plan_cmd->add_option("--shape", plan.shape, "l,h,s,V");
    plan_cmd->add_option("--tokens", plan.tokens, "training token budget D");
    plan_cmd->add_option("--params", plan.params, "parameter count N for the 6ND budget");
    plan_cmd->add_option("--plan", plan.plan_file, "full plan JSON (with mixture stages)");
    plan_cmd->add_option("--out", plan.out, "write the report JSON here");
    plan_cmd->add_option("--lr-csv", plan.lr_csv, "sample the LR curve to CSV");
    plan_cmd->add_option("--lr-every", plan.lr_every, "LR curve sampling stride");
    plan_cmd->add_option("--warmup-steps", plan.warmup_steps);
    plan_cmd->add_option("--decay-steps", plan.decay_steps);
    plan_cmd->add_option("--summary", plan.summary);
    plan_cmd->add_option("--config", plan.config);

    SignalArgs signal;
    auto* signal_cmd = app.add_subcommand("signal", "benchmark signal-quality analytics");
    signal_cmd->add_option("--scores", signal.scores, "checkpoint-score JSONL");
    signal_cmd->add_option("--specs", signal.specs, "benchmark specs JSON");
    signal_cmd->add_option("--margin", signal.margin, "surpass margin in points");
    signal_cmd->add_flag("--raw-scale", signal.raw_scale, "MAC on raw (not percent) scores");
    signal_cmd->add_option("--scaling", signal.scaling, "scaling runs JSON");
    signal_cmd->add_option("--scaling-baseline", signal.scaling_baseline);
    signal_cmd->add_option("--flops-per-token", signal.flops_per_token);
    signal_cmd->add_option("--out", signal.out);
    signal_cmd->add_option("--csv-out", signal.csv_out, "per-benchmark metrics CSV for plotting");
    signal_cmd->add_option("--summary", signal.summary);
    signal_cmd->add_option("--config", signal.config);

    FootprintArgs footprint;
    auto* footprint_cmd = app.add_subcommand("footprint", "energy/carbon/material accounting");
    footprint_cmd->add_option("--records", footprint.records, "energy records JSON");
    footprint_cmd->add_option("--runs", footprint.runs, "FLOP allocation runs JSON");
    footprint_cmd->add_option("--gpu-spec", footprint.gpu_spec, "shared GPU spec JSON");
    footprint_cmd->add_option("--intensity", footprint.intensity, "kg CO2e per kWh");
    footprint_cmd->add_flag("--table", footprint.table, "print a text table to stderr");
    footprint_cmd->add_option("--out", footprint.out);
    footprint_cmd->add_option("--summary", footprint.summary);
    footprint_cmd->add_option("--config", footprint.config);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*stats_cmd) return run_stats(*stats_cmd, stats);
        if (*filter_cmd) return run_filter(*filter_cmd, filter);
        if (*route_cmd) return run_route(*route_cmd, route);
        if (*dedup_cmd) return run_dedup(*dedup_cmd, dedup);
        if (*decontam_cmd) return run_decontam(*decontam_cmd, decontam);
        if (*tokeval_cmd) return run_tokeval(*tokeval_cmd, tokeval);
        if (*plan_cmd) return run_plan(*plan_cmd, plan);
        if (*signal_cmd) return run_signal(*signal_cmd, signal);
        if (*footprint_cmd) return run_footprint(*footprint_cmd, footprint);
    } catch (const CLI::RequiredError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const forge::FingerprintMismatch& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIntegrity;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitUsage;
}
