#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace forge {

inline constexpr double kDefaultGridIntensity = 0.38;  // kg CO2e per kWh
inline constexpr double kSecondsPerYear = 365.0 * 24.0 * 3600.0;

struct EnergyRecord {
    std::string label;
    double energy_kwh = 0.0;
    std::optional<double> gpu_hours;
    std::optional<double> avg_power_kw;
    std::optional<double> intensity_kg_per_kwh;  // overrides the default grid

    // energy must agree with gpu_hours * avg_power_kw within 1% when all
    // three are present
    void validate() const;
};

struct GpuSpec {
    std::string name;
    double peak_flops_per_s = 0.0;
    double lifespan_seconds = 3.0 * kSecondsPerYear;
    std::map<std::string, double> composition_kg;  // element -> kg per device

    void validate() const;
    static GpuSpec from_json_file(const std::string& path);
};

double carbon_emissions(double energy_kwh, double intensity_kg_per_kwh = kDefaultGridIntensity);
double energy_from_gpu_hours(double gpu_hours, double avg_power_kw);

// FLOP-based allocation: the run's share of one device lifetime is
// run_flops / (peak * mfu * lifespan); per-element mass scales composition
// by that share. Shares above 1 are legal (multi-device runs).
std::map<std::string, double> material_allocation(double run_flops, double mfu,
                                                  const GpuSpec& spec);

struct RunAllocation {
    std::string label;
    double run_flops = 0.0;
    double mfu = 0.6;
    GpuSpec spec;
};

struct FootprintReport {
    double total_kwh = 0.0;
    double total_kgco2e = 0.0;
    std::map<std::string, double> per_element_kg;

    struct PhaseItem {
        std::string label;
        double kwh = 0.0;
        double kgco2e = 0.0;
    };
    std::vector<PhaseItem> phases;

    struct RunItem {
        std::string label;
        std::map<std::string, double> element_kg;
    };
    std::vector<RunItem> runs;
};

FootprintReport aggregate_footprint(std::span<const EnergyRecord> records,
                                    std::span<const RunAllocation> runs,
                                    double intensity_kg_per_kwh = kDefaultGridIntensity);

}  // namespace forge
