#include "forge/planner.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace forge {
namespace {

using nlohmann::json;

json schedule_to_json(const ScheduleSpec& s) {
    json j;
    j["warmup_steps"] = s.warmup_steps;
    j["stable_steps"] = s.stable_steps;
    j["decay_steps"] = s.decay_steps;
    j["peak_lr"] = s.peak_lr;
    j["min_lr"] = s.min_lr;
    j["decay_kind"] = "one_minus_sqrt";
    return j;
}

ScheduleSpec schedule_from_json(const json& j) {
    ScheduleSpec s;
    s.warmup_steps = j.value("warmup_steps", std::int64_t{0});
    s.stable_steps = j.value("stable_steps", std::int64_t{0});
    s.decay_steps = j.value("decay_steps", std::int64_t{0});
    if (j.contains("peak_lr")) {
        for (const auto& [k, v] : j.at("peak_lr").items()) s.peak_lr[k] = v.get<double>();
    }
    s.min_lr = j.value("min_lr", 0.0);
    if (j.contains("decay_kind") && j.at("decay_kind").get<std::string>() != "one_minus_sqrt") {
        throw std::invalid_argument("unknown decay_kind (supported: one_minus_sqrt)");
    }
    s.validate();
    return s;
}

}  // namespace

double compute_budget(const BudgetInputs& inputs) {
    inputs.shape.validate();
    if (inputs.tokens < 0.0) throw std::domain_error("token count must be nonnegative");
    const double l = inputs.shape.n_layer;
    const double h = inputs.shape.d_model;
    const double s = inputs.shape.seq_len;
    return (72.0 * l * h * h + 12.0 * l * h * s) * inputs.tokens;
}

double simple_budget(double params, double tokens) {
    if (params < 0.0 || tokens < 0.0) {
        throw std::domain_error("params and tokens must be nonnegative");
    }
    return 6.0 * params * tokens;
}

std::int64_t nearest_power_of_two(double value) {
    if (!std::isfinite(value) || value >= 4.6e18) {
        throw std::domain_error("value out of range for power-of-two rounding");
    }
    if (value <= 1.0) return 1;
    const auto lower_exp = static_cast<int>(std::floor(std::log2(value)));
    const std::int64_t lower = std::int64_t{1} << lower_exp;
    const std::int64_t upper = lower << 1;
    return (value - static_cast<double>(lower)) <= (static_cast<double>(upper) - value) ? lower
                                                                                        : upper;
}

HeuristicHparams heuristic_hparams(double budget_flops) {
    if (budget_flops <= 0.0) throw std::domain_error("compute budget must be positive");
    HeuristicHparams h;
    h.max_lr = 0.3118 * std::pow(budget_flops, -0.125);
    h.raw_batch_tokens = 0.2920 * std::pow(budget_flops, 0.3271);
    h.batch_tokens = nearest_power_of_two(h.raw_batch_tokens);
    h.muon_lr = 10.0 * h.max_lr;
    return h;
}

void ScheduleSpec::validate() const {
    if (warmup_steps < 0 || stable_steps < 0 || decay_steps < 0) {
        throw std::invalid_argument("schedule step counts must be nonnegative");
    }
    for (const auto& [group, peak] : peak_lr) {
        if (min_lr > peak) {
            throw std::invalid_argument("min_lr exceeds peak for group '" + group + "'");
        }
    }
}

double lr_at(std::int64_t step, const ScheduleSpec& spec, const std::string& group) {
    const auto it = spec.peak_lr.find(group);
    if (it == spec.peak_lr.end()) throw std::invalid_argument("unknown optimizer group: " + group);
    if (step < 0 || step > spec.total_steps()) {
        throw std::domain_error("step outside the schedule range");
    }
    const double peak = it->second;
    if (step <= spec.warmup_steps) {
        if (spec.warmup_steps == 0) return peak;
        return peak * static_cast<double>(step) / static_cast<double>(spec.warmup_steps);
    }
    if (step <= spec.warmup_steps + spec.stable_steps) return peak;
    const double fraction = static_cast<double>(step - spec.warmup_steps - spec.stable_steps) /
                            static_cast<double>(spec.decay_steps);
    return std::max(spec.min_lr, peak * (1.0 - std::sqrt(fraction)));
}

MixtureReport validate_mixture(const TrainingPlan& plan) {
    if (plan.stages.empty()) throw std::invalid_argument("plan has no mixture stages");
    MixtureReport report;
    for (const auto& stage : plan.stages) {
        StageLedger ledger;
        ledger.name = stage.name;
        for (const auto& entry : stage.entries) {
            if (entry.repetition < 1) {
                throw std::invalid_argument("repetition must be >= 1 ('" + entry.dataset + "')");
            }
            if (entry.unique_tokens <= 0.0) {
                throw std::invalid_argument("unique_tokens must be positive ('" + entry.dataset +
                                            "')");
            }
            ledger.effective_total += entry.effective_tokens();
            ledger.language_tokens[entry.language] += entry.effective_tokens();
        }
        for (const auto& [tag, tokens] : ledger.language_tokens) {
            ledger.language_shares[tag] = tokens / ledger.effective_total;
        }
        if (stage.declared_total) {
            const double rel = std::abs(ledger.effective_total - *stage.declared_total) /
                               *stage.declared_total;
            if (rel > 0.01) {
                report.discrepancies.push_back({stage.name, "total effective tokens",
                                                *stage.declared_total, ledger.effective_total});
            }
        }
        for (const auto& [tag, declared] : stage.declared_language_shares) {
            const auto it = ledger.language_shares.find(tag);
            const double computed = it == ledger.language_shares.end() ? 0.0 : it->second;
            if (std::abs(computed - declared) > 0.01) {
                report.discrepancies.push_back(
                    {stage.name, "language share '" + tag + "'", declared, computed});
            }
        }
        report.grand_total += ledger.effective_total;
        report.stages.push_back(std::move(ledger));
    }
    if (plan.batch_tokens > 0 && plan.schedule.total_steps() > 0) {
        const double expected = static_cast<double>(plan.batch_tokens) *
                                static_cast<double>(plan.schedule.total_steps());
        report.budget_mismatch_fraction = std::abs(report.grand_total - expected) / expected;
    }
    return report;
}

TrainingPlan TrainingPlan::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open plan file: " + path);
    json j;
    in >> j;
    TrainingPlan plan;
    if (j.contains("shape")) {
        const auto& s = j.at("shape");
        plan.shape.n_layer = s.value("n_layer", 0);
        plan.shape.d_model = s.value("d_model", 0);
        plan.shape.seq_len = s.value("seq_len", 0);
        plan.shape.vocab = s.value("vocab", std::int64_t{0});
        if (s.contains("params")) plan.shape.params = s.at("params").get<double>();
    }
    plan.budget_flops = j.value("budget_flops", 0.0);
    plan.batch_tokens = j.value("batch_tokens", std::int64_t{0});
    if (j.contains("schedule")) plan.schedule = schedule_from_json(j.at("schedule"));
    if (j.contains("stages")) {
        for (const auto& sj : j.at("stages")) {
            MixtureStage stage;
            stage.name = sj.value("name", "");
            for (const auto& ej : sj.value("entries", json::array())) {
                MixtureEntry entry;
                entry.dataset = ej.value("dataset", "");
                entry.language = ej.value("language", "");
                entry.unique_tokens = ej.value("unique_tokens", 0.0);
                entry.repetition = ej.value("repetition", 1);
                stage.entries.push_back(std::move(entry));
            }
            if (sj.contains("declared_total")) {
                stage.declared_total = sj.at("declared_total").get<double>();
            }
            if (sj.contains("declared_language_shares")) {
                for (const auto& [k, v] : sj.at("declared_language_shares").items()) {
                    stage.declared_language_shares[k] = v.get<double>();
                }
            }
            plan.stages.push_back(std::move(stage));
        }
    }
    return plan;
}

void TrainingPlan::save_json(const std::string& path) const {
    json j;
    j["shape"] = {{"n_layer", shape.n_layer},
                  {"d_model", shape.d_model},
                  {"seq_len", shape.seq_len},
                  {"vocab", shape.vocab}};
    if (shape.params) j["shape"]["params"] = *shape.params;
    j["budget_flops"] = budget_flops;
    j["batch_tokens"] = batch_tokens;
    j["schedule"] = schedule_to_json(schedule);
    j["stages"] = json::array();
    for (const auto& stage : stages) {
        json sj;
        sj["name"] = stage.name;
        sj["entries"] = json::array();
        for (const auto& entry : stage.entries) {
            sj["entries"].push_back({{"dataset", entry.dataset},
                                     {"language", entry.language},
                                     {"unique_tokens", entry.unique_tokens},
                                     {"repetition", entry.repetition}});
        }
        if (stage.declared_total) sj["declared_total"] = *stage.declared_total;
        if (!stage.declared_language_shares.empty()) {
            sj["declared_language_shares"] = stage.declared_language_shares;
        }
        j["stages"].push_back(std::move(sj));
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open plan file for writing: " + path);
    out << j.dump(2) << '\n';
}

}  // namespace forge
