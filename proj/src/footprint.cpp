#include "forge/footprint.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace forge {

void EnergyRecord::validate() const {
    if (energy_kwh < 0.0) throw std::domain_error("energy_kwh must be nonnegative");
    if (gpu_hours && *gpu_hours < 0.0) throw std::domain_error("gpu_hours must be nonnegative");
    if (gpu_hours && avg_power_kw && energy_kwh > 0.0) {
        const double implied = *gpu_hours * *avg_power_kw;
        if (std::abs(implied - energy_kwh) / energy_kwh > 0.01) {
            throw std::invalid_argument("record '" + label +
                                        "': energy_kwh disagrees with gpu_hours * avg_power_kw");
        }
    }
}

void GpuSpec::validate() const {
    if (peak_flops_per_s <= 0.0) throw std::domain_error("peak_flops_per_s must be positive");
    if (lifespan_seconds <= 0.0) throw std::domain_error("lifespan_seconds must be positive");
    for (const auto& [element, kg] : composition_kg) {
        if (kg < 0.0) throw std::domain_error("composition mass for '" + element + "' is negative");
    }
}

GpuSpec GpuSpec::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open GPU spec: " + path);
    nlohmann::json j;
    in >> j;
    GpuSpec spec;
    spec.name = j.value("name", "");
    spec.peak_flops_per_s = j.value("peak_flops_per_s", 0.0);
    if (j.contains("lifespan_years")) {
        spec.lifespan_seconds = j.at("lifespan_years").get<double>() * kSecondsPerYear;
    } else {
        spec.lifespan_seconds = j.value("lifespan_seconds", spec.lifespan_seconds);
    }
    if (j.contains("composition_kg")) {
        for (const auto& [k, v] : j.at("composition_kg").items()) {
            spec.composition_kg[k] = v.get<double>();
        }
    }
    spec.validate();
    return spec;
}

double carbon_emissions(double energy_kwh, double intensity_kg_per_kwh) {
    if (energy_kwh < 0.0 || intensity_kg_per_kwh < 0.0) {
        throw std::domain_error("energy and carbon intensity must be nonnegative");
    }
    return energy_kwh * intensity_kg_per_kwh;
}

double energy_from_gpu_hours(double gpu_hours, double avg_power_kw) {
    if (gpu_hours < 0.0 || avg_power_kw < 0.0) {
        throw std::domain_error("gpu hours and power must be nonnegative");
    }
    return gpu_hours * avg_power_kw;
}

std::map<std::string, double> material_allocation(double run_flops, double mfu,
                                                  const GpuSpec& spec) {
    spec.validate();
    if (run_flops < 0.0) throw std::domain_error("run_flops must be nonnegative");
    if (mfu <= 0.0 || mfu > 1.0) throw std::domain_error("mfu must be in (0,1]");
    const double lifetime_flops = spec.peak_flops_per_s * mfu * spec.lifespan_seconds;
    const double share = run_flops / lifetime_flops;
    std::map<std::string, double> out;
    for (const auto& [element, kg] : spec.composition_kg) out[element] = share * kg;
    return out;
}

FootprintReport aggregate_footprint(std::span<const EnergyRecord> records,
                                    std::span<const RunAllocation> runs,
                                    double intensity_kg_per_kwh) {
    FootprintReport report;
    for (const auto& record : records) {
        record.validate();
        const double intensity = record.intensity_kg_per_kwh.value_or(intensity_kg_per_kwh);
        const double carbon = carbon_emissions(record.energy_kwh, intensity);
        report.total_kwh += record.energy_kwh;
        report.total_kgco2e += carbon;
        report.phases.push_back({record.label, record.energy_kwh, carbon});
    }
    for (const auto& run : runs) {
        auto masses = material_allocation(run.run_flops, run.mfu, run.spec);
        for (const auto& [element, kg] : masses) report.per_element_kg[element] += kg;
        report.runs.push_back({run.label, std::move(masses)});
    }
    return report;
}

}  // namespace forge
