#pragma once

#include "mmcov/params.hpp"
#include "mmcov/propagation.hpp"

namespace mmcov
{

/// Per-state constants of the intensity measure (index 0: LOS, 1: NLOS).
/// Only meaningful with the outage state enabled; in the no-outage route
/// the outage-dependent members are left at zero and z is +inf.
struct IntensityConstants
{
    long double k1{0};
    long double k2{0};
    long double r_const{0};
    long double w_const{0};
    long double q[2]{0, 0};
    long double t[2]{0, 0};
    long double v[2]{0, 0};
    long double z[2]{0, 0};
};

/// Intensity measure of the path-loss process seen by the typical user:
/// Lambda([0, x)) = expected number of base stations with path-loss below x,
/// split by link state, with first derivatives in x.
///
/// Bound to one scenario; immutable and safe to evaluate concurrently.
/// Internally evaluated in extended precision; all exponentials take
/// x^(1/beta) arguments.
class IntensityMeasure
{
  public:
    /// Throws ParameterError when the outage state is enabled with
    /// gamma_out < 1 or delta_out == 0.
    explicit IntensityMeasure(const Scenario& scenario);

    bool outage_enabled() const { return outage_; }
    const IntensityConstants& constants() const { return c_; }

    /// Path-loss value where the crossover radius maps for state s; +inf
    /// without outage.
    double breakpoint(LinkState s) const;

    /// Building blocks; OUT is a DomainError. With the outage state
    /// disabled they reduce to the no-outage closed forms.
    double upsilon0(double x, LinkState s) const;
    double upsilon1(double x, LinkState s) const;
    double upsilon0_deriv(double x, LinkState s) const;
    double upsilon1_deriv(double x, LinkState s) const;

    /// Lambda_s([0, x)); zero for OUT.
    double lambda_component(double x, LinkState s) const;
    /// No-outage closed forms. Throws DomainError on an outage-enabled
    /// scenario.
    double lambda_component_no_outage(double x, LinkState s) const;
    double lambda(double x) const;

    /// d Lambda_s / dx for x > 0, atom-free. Zero for OUT.
    double lambda_deriv(double x, LinkState s) const;

    /// Lambda_s([0, inf)); +inf without outage.
    double lambda_limit(LinkState s) const;
    double lambda_limit() const;

    /// Serving (smallest) path-loss CDF: 1 - exp(-Lambda([0, x))).
    double cdf_min_path_loss(double x) const;

    /// Extended-precision variants used by the analytic integrators.
    long double lambda_ld(long double x) const;
    long double lambda_component_ld(long double x, LinkState s) const;
    long double lambda_deriv_ld(long double x, LinkState s) const;

    double density() const { return static_cast<double>(lambda_); }

  private:
    int index(LinkState s) const;
    long double k1_term(long double u, long double rho) const;
    long double u0(long double x, int i, bool outage_route) const;
    long double u1(long double x, int i, bool outage_route) const;
    long double u0_deriv(long double x, int i, bool outage_route) const;
    long double u1_deriv(long double x, int i, bool outage_route) const;

    bool outage_;
    long double lambda_;
    long double delta_los_;
    long double gamma_los_;
    long double delta_out_;
    long double gamma_out_;
    long double log_gamma_out_;
    long double crossover_;
    long double kappa_[2];
    long double beta_[2];
    IntensityConstants c_;
};

/// Independent numerical evaluation of Lambda_s([0, x)) by integrating
/// 2 pi lambda p_s(r) r over r <= x^(1/beta_s)/kappa_s with adaptive
/// quadrature (relative tolerance 1e-10). Shares nothing with the closed
/// forms beyond link_state_probs and the scenario parameters. When the
/// scenario records alpha for the state, kappa_s is rebuilt from it.
double oracle_intensity_quadrature(const Scenario& scenario, double x, LinkState s);

} // namespace mmcov
