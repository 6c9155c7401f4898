#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace forge {

struct BenchmarkSpec {
    std::string name;
    double baseline = 0.0;     // random score, in percent
    double max_score = 100.0;
    std::string preferred_metric;
};

// Mean over benchmarks of 100 * (score - baseline) / (max - baseline).
double npm(std::span<const std::pair<double, BenchmarkSpec>> results);

struct ScorePoint {
    std::int64_t step = 0;
    double tokens = 0.0;
    double score = 0.0;  // percent
};

struct ScoreSeries {
    std::vector<ScorePoint> points;  // steps strictly increasing
    void validate() const;
};

struct SignalMetrics {
    double mean_abs_change = 0.0;
    std::optional<double> snr;       // absent when the series has zero variance
    std::optional<double> spearman;  // absent when undefined
};

enum class ScoreScale {
    kPercent,  // scores in [0,100]; MAC reported on the [0,1] scale
    kRaw,      // scores used as-is
};

// MAC over consecutive points, SNR = mean/sample-std, Spearman rank
// correlation of scores against steps (average-rank ties). Sample (n-1)
// standard deviation throughout.
SignalMetrics series_metrics(const ScoreSeries& series, ScoreScale scale = ScoreScale::kPercent);

// Spearman rank correlation with average-rank tie handling; nullopt when
// either side has zero rank variance.
std::optional<double> spearman_correlation(std::span<const double> x, std::span<const double> y);

// First checkpoint with score >= baseline + margin.
std::optional<ScorePoint> surpass_point(const ScoreSeries& series, const BenchmarkSpec& spec,
                                        double margin = 5.0);

struct TierThresholds {
    double easy_max_tokens = 200e9;
    double easy_min_snr = 10.0;
    double easy_min_spearman = 0.57;
    double hard_min_tokens = 660e9;
    double hard_min_spearman = 0.8;
};

enum class Tier { kEasy, kHard, kUnclassified };

struct BenchmarkSignalRow {
    std::string name;
    std::optional<double> tokens_to_surpass;
    std::optional<double> snr;
    std::optional<double> spearman;
};

std::map<std::string, Tier> classify_tiers(std::span<const BenchmarkSignalRow> rows,
                                           const TierThresholds& thresholds = {});

struct GradientSeries {
    std::vector<double> norms;  // per-step gradient L2 norms
};

struct GradientStability {
    std::optional<double> variability;  // sample-std / mean; absent when mean is 0
    double volatility = 0.0;            // sample-std of consecutive differences
};

GradientStability gradient_stability(const GradientSeries& series);

struct ScalingRun {
    int nodes = 0;
    int gpus = 0;
    double time_per_step = 0.0;        // seconds
    double global_batch_tokens = 0.0;  // must match across runs
};

struct ScalingRow {
    int nodes = 0;
    int gpus = 0;
    double time_per_step = 0.0;
    double tokens_per_second = 0.0;
    double speedup = 0.0;
    double efficiency = 0.0;  // fraction; 1.0 == perfect scaling
    std::optional<double> tflops_per_gpu;
};

std::vector<ScalingRow> scaling_report(std::span<const ScalingRun> runs,
                                       std::size_t baseline_index,
                                       std::optional<double> flops_per_token = std::nullopt);

}  // namespace forge
