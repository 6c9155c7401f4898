#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "forge/tokeval.hpp"

namespace forge {

struct BudgetInputs {
    ModelShape shape;
    double tokens = 0.0;  // D
};

// (72*l*h^2 + 12*l*h*s) * D
double compute_budget(const BudgetInputs& inputs);

// First-order estimate C = 6*N*D.
double simple_budget(double params, double tokens);

struct HeuristicHparams {
    double max_lr = 0.0;
    double raw_batch_tokens = 0.0;
    std::int64_t batch_tokens = 0;  // raw value rounded to the nearest power of two
    double muon_lr = 0.0;           // 10x the AdamW learning rate
};

// Empirical power laws relating the compute budget to the AdamW peak
// learning rate (0.3118 * C^-0.125) and batch size (0.2920 * C^0.3271).
HeuristicHparams heuristic_hparams(double budget_flops);

std::int64_t nearest_power_of_two(double value);

// Warmup-Stable-Decay schedule with a 1-sqrt terminal decay. The peak is per
// optimizer group; the shape is shared and scaled by each group's peak.
struct ScheduleSpec {
    std::int64_t warmup_steps = 0;
    std::int64_t stable_steps = 0;
    std::int64_t decay_steps = 0;
    std::map<std::string, double> peak_lr;  // group -> peak
    double min_lr = 0.0;
    enum class DecayKind { kOneMinusSqrt } decay_kind = DecayKind::kOneMinusSqrt;

    std::int64_t total_steps() const { return warmup_steps + stable_steps + decay_steps; }
    void validate() const;
};

double lr_at(std::int64_t step, const ScheduleSpec& spec, const std::string& group);

struct MixtureEntry {
    std::string dataset;
    std::string language;
    double unique_tokens = 0.0;
    int repetition = 1;

    double effective_tokens() const { return unique_tokens * repetition; }
};

struct MixtureStage {
    std::string name;
    std::vector<MixtureEntry> entries;
    std::optional<double> declared_total;
    std::map<std::string, double> declared_language_shares;  // tag -> fraction
};

struct TrainingPlan {
    ModelShape shape;
    double budget_flops = 0.0;
    std::int64_t batch_tokens = 0;
    ScheduleSpec schedule;
    std::vector<MixtureStage> stages;

    static TrainingPlan from_json_file(const std::string& path);
    void save_json(const std::string& path) const;
};

struct MixtureDiscrepancy {
    std::string stage;
    std::string what;  // human-readable description
    double declared = 0.0;
    double computed = 0.0;
};

struct StageLedger {
    std::string name;
    double effective_total = 0.0;
    std::map<std::string, double> language_tokens;  // effective, per tag
    std::map<std::string, double> language_shares;
};

struct MixtureReport {
    std::vector<StageLedger> stages;
    double grand_total = 0.0;
    std::vector<MixtureDiscrepancy> discrepancies;  // declared vs computed beyond 1%
    // | sum(effective) - batch_tokens * total_steps | / expected, when the
    // plan declares both; nullopt otherwise
    std::optional<double> budget_mismatch_fraction;
};

MixtureReport validate_mixture(const TrainingPlan& plan);

}  // namespace forge
