#include "forge/signal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace forge {
namespace {

double mean_of(std::span<const double> xs) {
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

// sample (n-1) standard deviation
double sample_std(std::span<const double> xs) {
    if (xs.size() < 2) return 0.0;
    const double mu = mean_of(xs);
    double ss = 0.0;
    for (const double x : xs) ss += (x - mu) * (x - mu);
    return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

// average ranks (1-based) with ties sharing the mean of their positions
std::vector<double> average_ranks(std::span<const double> xs) {
    const std::size_t n = xs.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && xs[order[j + 1]] == xs[order[i]]) ++j;
        const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
        i = j + 1;
    }
    return ranks;
}

double pearson(std::span<const double> x, std::span<const double> y) {
    const double mx = mean_of(x);
    const double my = mean_of(y);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace

void ScoreSeries::validate() const {
    for (std::size_t i = 1; i < points.size(); ++i) {
        if (points[i].step <= points[i - 1].step) {
            throw std::invalid_argument("score series steps must be strictly increasing");
        }
    }
}

double npm(std::span<const std::pair<double, BenchmarkSpec>> results) {
    if (results.empty()) throw std::invalid_argument("npm requires at least one benchmark");
    double sum = 0.0;
    for (const auto& [score, spec] : results) {
        if (spec.baseline >= spec.max_score) {
            throw std::domain_error("benchmark '" + spec.name + "' has baseline >= max score");
        }
        sum += 100.0 * (score - spec.baseline) / (spec.max_score - spec.baseline);
    }
    return sum / static_cast<double>(results.size());
}

std::optional<double> spearman_correlation(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 3) return std::nullopt;
    const auto rx = average_ranks(x);
    const auto ry = average_ranks(y);
    if (sample_std(rx) == 0.0 || sample_std(ry) == 0.0) return std::nullopt;
    return pearson(rx, ry);
}

SignalMetrics series_metrics(const ScoreSeries& series, ScoreScale scale) {
    series.validate();
    if (series.points.size() < 2) {
        throw std::invalid_argument("series_metrics needs at least two points");
    }
    std::vector<double> scores;
    scores.reserve(series.points.size());
    for (const auto& p : series.points) scores.push_back(p.score);

    SignalMetrics m;
    const double unit = scale == ScoreScale::kPercent ? 0.01 : 1.0;
    double mac = 0.0;
    for (std::size_t i = 1; i < scores.size(); ++i) {
        mac += std::abs(scores[i] - scores[i - 1]) * unit;
    }
    m.mean_abs_change = mac / static_cast<double>(scores.size() - 1);

    const double sd = sample_std(scores);
    if (sd > 0.0) m.snr = mean_of(scores) / sd;

    if (scores.size() >= 3) {
        std::vector<double> steps;
        steps.reserve(series.points.size());
        for (const auto& p : series.points) steps.push_back(static_cast<double>(p.step));
        m.spearman = spearman_correlation(scores, steps);
    }
    return m;
}

std::optional<ScorePoint> surpass_point(const ScoreSeries& series, const BenchmarkSpec& spec,
                                        double margin) {
    if (margin < 0.0) throw std::invalid_argument("margin must be nonnegative");
    series.validate();
    const double threshold = spec.baseline + margin;
    for (const auto& p : series.points) {
        if (p.score >= threshold) return p;
    }
    return std::nullopt;
}

std::map<std::string, Tier> classify_tiers(std::span<const BenchmarkSignalRow> rows,
                                           const TierThresholds& t) {
    std::map<std::string, Tier> out;
    for (const auto& row : rows) {
        Tier tier = Tier::kUnclassified;
        if (row.tokens_to_surpass && *row.tokens_to_surpass < t.easy_max_tokens && row.snr &&
            *row.snr > t.easy_min_snr && row.spearman && *row.spearman > t.easy_min_spearman) {
            tier = Tier::kEasy;
        } else if (row.tokens_to_surpass && *row.tokens_to_surpass > t.hard_min_tokens &&
                   row.spearman && *row.spearman > t.hard_min_spearman) {
            tier = Tier::kHard;
        }
        out[row.name] = tier;
    }
    return out;
}

GradientStability gradient_stability(const GradientSeries& series) {
    if (series.norms.size() < 2) {
        throw std::invalid_argument("gradient stability needs at least two norms");
    }
    GradientStability out;
    const double mu = mean_of(series.norms);
    const double sd = sample_std(series.norms);
    if (mu != 0.0) out.variability = sd / mu;
    std::vector<double> deltas;
    deltas.reserve(series.norms.size() - 1);
    for (std::size_t i = 1; i < series.norms.size(); ++i) {
        deltas.push_back(series.norms[i] - series.norms[i - 1]);
    }
    out.volatility = deltas.size() < 2 ? 0.0 : sample_std(deltas);
    return out;
}

std::vector<ScalingRow> scaling_report(std::span<const ScalingRun> runs,
                                       std::size_t baseline_index,
                                       std::optional<double> flops_per_token) {
    if (baseline_index >= runs.size()) throw std::invalid_argument("baseline run missing");
    const auto& base = runs[baseline_index];
    for (const auto& run : runs) {
        if (run.gpus <= 0 || run.time_per_step <= 0.0 || run.global_batch_tokens <= 0.0) {
            throw std::invalid_argument("scaling runs must have positive gpus, time and batch");
        }
        if (run.global_batch_tokens != base.global_batch_tokens) {
            throw std::invalid_argument("all scaling runs must share the global batch size");
        }
    }
    std::vector<ScalingRow> rows;
    rows.reserve(runs.size());
    for (const auto& run : runs) {
        ScalingRow row;
        row.nodes = run.nodes;
        row.gpus = run.gpus;
        row.time_per_step = run.time_per_step;
        row.tokens_per_second = run.global_batch_tokens / run.time_per_step;
        row.speedup = base.time_per_step / run.time_per_step;
        row.efficiency =
            row.speedup / (static_cast<double>(run.gpus) / static_cast<double>(base.gpus));
        if (flops_per_token) {
            row.tflops_per_gpu =
                row.tokens_per_second * *flops_per_token / static_cast<double>(run.gpus) / 1e12;
        }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace forge
