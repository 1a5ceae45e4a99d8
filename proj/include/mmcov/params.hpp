#pragma once

#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mmcov
{

/// Raised when a model parameter violates its invariants.
class ParameterError : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

/// Distance-dependent blockage model: LOS decay (delta_los, gamma_los) and
/// outage onset (delta_out, gamma_out). Distances in meters.
struct BlockageParams
{
    double delta_los{0.0}; // 1/m
    double gamma_los{1.0};
    double delta_out{0.0}; // 1/m
    double gamma_out{1.0};

    /// Distance below which no link is in outage: ln(gamma_out)/delta_out.
    double crossover_radius() const;
};

/// Path-loss l_s(r) = (kappa_s r)^beta_s.
struct PathLossParams
{
    double kappa_los{1.0};
    double beta_los{2.0};
    double kappa_nlos{1.0};
    double beta_nlos{2.0};
};

struct ShadowingParams
{
    double mu_los_db{0.0};
    double sigma_los_db{1.0};
    double mu_nlos_db{0.0};
    double sigma_nlos_db{1.0};
};

/// Two-level sectored pattern; omega is the main-lobe beamwidth in radians.
struct AntennaPattern
{
    double g_max_db{0.0};
    double g_min_db{0.0};
    double omega{2.0 * std::numbers::pi};
};

struct SystemParams
{
    double tx_power_dbm{30.0};
    double bandwidth_hz{1.0};
    double noise_figure_db{0.0};
    double density{1.0}; // base stations per m^2

    double cell_radius() const;
    void set_cell_radius(double radius_m);
};

/// Which pair of 28/73 GHz outage parameters a preset carries.
enum class OutageVariant
{
    corrected,  // delta_out = 1/30 m^-1, gamma_out = e^5.2
    as_printed, // delta_out = 5.2 m^-1, gamma_out = e^(1/30)
};

/// Full parameter set for one network configuration. Immutable once built;
/// share freely between threads.
struct Scenario
{
    std::string name;
    BlockageParams blockage;
    PathLossParams pathloss;
    ShadowingParams shadowing;
    AntennaPattern bs_antenna;
    AntennaPattern mt_antenna;
    SystemParams system;
    bool outage_enabled{false};
    /// Monte Carlo exclusion radius around the user, meters.
    double min_distance_m{1.0};
    /// Optional (alpha, beta) provenance of the path-loss bases, dB. When
    /// present they must agree with kappa; see pathloss_alpha_mismatch_db.
    std::optional<double> alpha_los_db;
    std::optional<double> alpha_nlos_db;
};

// Unit conversions -----------------------------------------------------------

double db_to_linear(double db);
double linear_to_db(double linear);
double dbm_to_mw(double dbm);

/// kappa = 10^(alpha_db / (10 beta)).
double kappa_from_alpha(double alpha_db, double beta);
/// Inverse of kappa_from_alpha: 10 beta log10(kappa).
double alpha_from_kappa(double kappa, double beta);

/// Thermal noise power: -174 + 10 log10(BW) + F.
double noise_power_dbm(double bandwidth_hz, double noise_figure_db);

double density_from_cell_radius(double radius_m);
double cell_radius_from_density(double density);

// Presets --------------------------------------------------------------------

inline constexpr std::string_view kPresetMmWave28 = "mmwave-28";
inline constexpr std::string_view kPresetMmWave73 = "mmwave-73";
inline constexpr std::string_view kPresetUWave25 = "uwave-2.5";

std::vector<std::string> preset_names();

/// Loads one of the built-in parameter sets. The density defaults to a
/// 100 m average cell radius.
Scenario load_preset(std::string_view name,
                     OutageVariant variant = OutageVariant::corrected);

/// Throws ParameterError on any violated invariant. Returns non-fatal
/// warnings (e.g. p_OUT(0) > 0).
std::vector<std::string> check_scenario(const Scenario& scenario);

/// Largest |alpha - 10 beta log10 kappa| over the states that carry an
/// alpha, in dB. Zero when no alpha is recorded.
double pathloss_alpha_mismatch_db(const Scenario& scenario);

// Scenario files -------------------------------------------------------------

/// Parses the key = value scenario format. Unknown or duplicate keys and
/// malformed values are ParameterErrors.
Scenario parse_scenario(std::string_view text);
Scenario load_scenario_file(const std::string& path);

/// Canonical text form; parse_scenario(serialize_scenario(s)) reproduces s
/// bit for bit.
std::string serialize_scenario(const Scenario& scenario);

/// Stable 64-bit FNV-1a digest of serialize_scenario, hex encoded.
std::string scenario_digest(const Scenario& scenario);

} // namespace mmcov
