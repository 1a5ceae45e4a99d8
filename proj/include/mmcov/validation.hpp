#pragma once

#include "mmcov/intensity.hpp"
#include "mmcov/params.hpp"

#include <string>
#include <vector>

namespace mmcov
{

struct CheckResult
{
    std::string name;
    bool passed{false};
    bool applicable{true};
    double worst{0.0};     // worst observed deviation
    double threshold{0.0}; // pass bound on `worst`
    std::string detail;
};

struct ValidationReport
{
    std::vector<CheckResult> checks;

    bool passed() const;
};

/// Fast invariant suite for one scenario: parameter invariants, alpha/kappa
/// consistency, closed form vs quadrature oracle, continuity at the
/// breakpoints, analytic vs finite-difference derivatives, exact probability
/// sums and the serving-link normalization. Never throws for a bad
/// scenario; failures are reported as failed checks.
ValidationReport validate_scenario(const Scenario& scenario);

/// Log grid of `count` points in [lo, hi] for derivative checks on state s,
/// with the upper end pulled in to where x Lambda_s'(x) / Lambda_s(x) falls
/// below 1e-6 (past that point finite differences only see rounding), and
/// points within 1e-2 relative of Z_s dropped.
std::vector<double> derivative_check_grid(const IntensityMeasure& im, LinkState s, double lo, double hi,
                                          std::size_t count);

/// Derivative of Lambda_s from closed-form values only: Richardson
/// extrapolated central differences, step scaled to the local decay rate.
long double finite_difference(const IntensityMeasure& im, long double x, LinkState s);

struct NormalizationCheck
{
    double integral{0.0}; // integral of Lambda'(x) e^-Lambda(x) over x > 0
    double expected{0.0}; // 1 - e^-Lambda_inf
    double quadrature_error{0.0};
};

/// Integrates the serving-link density numerically, in ln x, from e^-60 to
/// e^150 with panel breaks at Z_LOS and Z_NLOS.
NormalizationCheck serving_link_normalization(const IntensityMeasure& im);

} // namespace mmcov
