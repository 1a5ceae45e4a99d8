#pragma once

#include "mmcov/params.hpp"
#include "mmcov/propagation.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

namespace mmcov
{

using Rng = std::mt19937_64;

/// Independent stream for realization `index` under `base_seed`. A
/// realization is a pure function of this pair.
Rng realization_stream(std::uint64_t base_seed, std::uint64_t index);

struct BaseStationSample
{
    double distance{0.0};
    LinkState state{LinkState::out};
    double path_loss{0.0}; // +inf for OUT
    double shadowing{1.0};
    double gain{1.0};
};

struct NetworkRealization
{
    std::vector<BaseStationSample> stations;
    /// Smallest finite path-loss; empty when every station is in outage.
    std::optional<std::size_t> serving;
    double truncation_radius{0.0};
};

struct EmpiricalEstimate
{
    double mean{0.0};
    double half_width_95{0.0};
    std::size_t n_realizations{0};
};

enum class InterferenceMode
{
    snr_only,
    full_sinr,
};

/// Per-realization outcome. Outage realizations have outage = true and
/// zero SNR/SINR.
struct LinkOutcome
{
    double snr{0.0};
    double sinr{0.0};
    double serving_path_loss{0.0}; // +inf when in outage
    bool outage{true};
};

struct SimulationOptions
{
    /// Probability budget for the truncation window; see truncation_radius.
    double truncation_epsilon{1e-6};
    /// Overrides the epsilon rule when set.
    std::optional<double> truncation_radius;
    /// Worker threads; 0 picks the hardware concurrency. Results do not
    /// depend on this value.
    unsigned threads{0};
};

/// Radius beyond which base stations are ignored.
///
/// Outage enabled: distance where gamma_out e^(-delta_out r) falls to
/// epsilon. Otherwise max(20 R_c, r*) with r* the distance at which the mean
/// received power of a unit-gain interferer (averaged over link state and
/// shadowing) drops below epsilon times the noise power.
double truncation_radius(const Scenario& scenario, double epsilon);

/// Monte Carlo sampler bound to one scenario.
class NetworkSimulator
{
  public:
    explicit NetworkSimulator(const Scenario& scenario);

    const Scenario& scenario() const { return scenario_; }
    const LinkBudget& budget() const { return budget_; }

    /// Poisson number of stations uniform in the disk of the given radius
    /// around the user; stations closer than min_distance_m are redrawn.
    NetworkRealization sample_realization(Rng& rng, double truncation_radius) const;

    /// Linear SINR of the realization (interference from every non-serving
    /// station with finite path-loss), or SNR in snr_only mode. Returns
    /// nullopt when no station can serve.
    std::optional<double> sinr(const NetworkRealization& real, InterferenceMode mode) const;

    LinkOutcome outcome(const NetworkRealization& real) const;

  private:
    Scenario scenario_;
    LinkBudget budget_;
};

/// Outcomes of realizations 0..n-1 under base_seed, in index order.
std::vector<LinkOutcome> simulate_outcomes(const Scenario& scenario, std::size_t n, std::uint64_t base_seed,
                                           const SimulationOptions& options = {});

/// Fraction of outcomes with SINR (or SNR) >= t; outage counts as not
/// covered. Normal-approximation 95% half-width.
EmpiricalEstimate coverage_from(std::span<const LinkOutcome> outcomes, double t, InterferenceMode mode);

/// Mean of BW log2(1 + SINR), outage contributing zero.
EmpiricalEstimate rate_from(std::span<const LinkOutcome> outcomes, double bandwidth_hz, InterferenceMode mode);

EmpiricalEstimate estimate_coverage(const Scenario& scenario, double t, std::size_t n, std::uint64_t base_seed,
                                    InterferenceMode mode = InterferenceMode::full_sinr,
                                    const SimulationOptions& options = {});

EmpiricalEstimate estimate_rate(const Scenario& scenario, std::size_t n, std::uint64_t base_seed,
                                InterferenceMode mode = InterferenceMode::full_sinr,
                                const SimulationOptions& options = {});

} // namespace mmcov
