#pragma once

#include "mmcov/params.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace mmcov
{

inline constexpr const char* kToolVersion = "0.1.0";

enum class SweepVariable
{
    threshold_db,
    cell_radius_m,
};

struct SweepGrid
{
    double min{-20.0};
    double max{40.0};
    std::size_t count{13};
    bool log_spacing{false};

    /// Grid values in ascending order; log spacing needs min > 0.
    std::vector<double> values() const;
};

struct SweepModes
{
    bool analytic{true};
    bool mc_snr_only{false};
    bool mc_full_sinr{false};

    bool any() const { return analytic || mc_snr_only || mc_full_sinr; }
    bool any_mc() const { return mc_snr_only || mc_full_sinr; }
};

/// Parses a comma separated list of analytic, mc_snr_only, mc_full_sinr.
SweepModes parse_modes(const std::string& text);

struct SweepSpec
{
    /// Exactly one of preset / scenario_file is used; the file wins when set.
    std::string preset{"mmwave-28"};
    std::string scenario_file;
    OutageVariant outage_variant{OutageVariant::corrected};
    /// Forces outage_enabled on the loaded scenario when set.
    std::optional<bool> outage_enabled;

    SweepVariable variable{SweepVariable::threshold_db};
    SweepGrid grid;
    /// Fixed cell radius for threshold sweeps (meters); unset keeps the
    /// scenario's density.
    std::optional<double> cell_radius_m;
    /// Fixed threshold for radius sweeps, dB.
    double threshold_db{0.0};

    SweepModes modes;
    std::size_t n_realizations{100000};
    std::uint64_t base_seed{1};
    double truncation_epsilon{1e-6};
    unsigned threads{0};

    /// Rate sweeps only: preset evaluated analytically at the same radii for
    /// a ratio column.
    std::string compare_preset;
};

/// Throws ParameterError when the spec breaks its own invariants.
void check_sweep_spec(const SweepSpec& spec);

/// Scenario described by the spec, with outage override and cell radius
/// applied.
Scenario resolve_scenario(const SweepSpec& spec);

struct SweepResult
{
    std::vector<std::string> header;  // provenance lines, without '#'
    std::vector<std::string> columns; // excluding the trailing status column
    std::vector<std::vector<double>> rows;
    std::vector<std::string> status; // "ok" or the failure of that row
};

/// Coverage versus threshold (dB) or versus cell radius (meters).
SweepResult run_coverage_sweep(const SweepSpec& spec);

/// Average rate versus cell radius. Requires variable == cell_radius_m.
SweepResult run_rate_sweep(const SweepSpec& spec);

void write_csv(std::ostream& out, const SweepResult& result);
std::string to_csv(const SweepResult& result);

} // namespace mmcov
