#pragma once

#include "mmcov/intensity.hpp"
#include "mmcov/params.hpp"
#include "mmcov/propagation.hpp"

#include <functional>
#include <span>

namespace mmcov
{

struct CoverageResult
{
    double total{0.0};
    double los_term{0.0};
    double nlos_term{0.0};
    double quadrature_error_estimate{0.0};
};

struct CoverageTerm
{
    double value{0.0};
    double error{0.0};
};

struct RateResult
{
    double rate_bps{0.0};
    double error{0.0};
};

struct AnalyticsOptions
{
    double coverage_rel_tol{1e-8};
    double rate_rel_tol{1e-6};
};

/// Noise-limited coverage probability and average rate of one scenario.
///
/// The coverage term of state s integrates, over the serving path-loss x,
/// the log-normal exceedance probability of the SNR times the density of the
/// smallest path-loss being an s-link. Integration runs in ln x, split at the
/// two breakpoints Z_LOS, Z_NLOS and at the erfc transition, and is truncated
/// where the serving-link mass left outside is below 1e-14 on either side.
class CoverageAnalyzer
{
  public:
    explicit CoverageAnalyzer(const Scenario& scenario, AnalyticsOptions options = {});

    /// P_s(T) for s in {LOS, NLOS}, threshold t linear.
    CoverageTerm coverage_term(LinkState s, double t) const;

    /// Sum of both terms; the error estimate adds up.
    CoverageResult coverage_probability(double t) const;

    /// BW / ln 2 * integral of P(t) / (1 + t) over t > 0.
    RateResult average_rate() const;

    const IntensityMeasure& intensity() const { return intensity_; }
    const LinkBudget& budget() const { return budget_; }
    const Scenario& scenario() const { return scenario_; }

  private:
    Scenario scenario_;
    AnalyticsOptions options_;
    LinkBudget budget_;
    IntensityMeasure intensity_;
    long double y_lo_;
    long double y_hi_;
    long double tail_mass_;
};

/// Average rate for an arbitrary non-increasing coverage curve. The
/// integral runs in ln t from 1e-13 up to where coverage drops below 1e-10;
/// threshold_breaks lists thresholds (linear) where coverage is not smooth.
RateResult average_rate_of(const std::function<double(double)>& coverage, double bandwidth_hz,
                           double rel_tol = 1e-6, std::span<const double> threshold_breaks = {});

/// erfc clamped to {0, 2} for |arg| > 38.
long double clamped_erfc(long double arg);

} // namespace mmcov
