#include "mmcov/intensity.hpp"

#include "mmcov/quadrature.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace mmcov
{

namespace
{

constexpr long double kPi = std::numbers::pi_v<long double>;
constexpr long double kInf = std::numeric_limits<long double>::infinity();

// 1 - e^(-u)(1 + u), i.e. u^2 times the normalized truncated second moment
// of an exponential. Series below u = 1 where the direct form cancels.
long double
moment_fraction(long double u)
{
    if (u < 1)
    {
        long double power = u * u / 2; // u^n / n!
        long double sum = 0;
        for (int n = 2; n < 40; ++n)
        {
            const long double term = (n - 1) * power;
            sum += (n % 2 == 0) ? term : -term;
            power *= u / (n + 1);
        }
        return sum;
    }
    if (u > 1e4L)
    {
        return 1;
    }
    return 1 - std::exp(-u) * (1 + u);
}

} // namespace

IntensityMeasure::IntensityMeasure(const Scenario& scenario)
    : outage_(scenario.outage_enabled),
      lambda_(scenario.system.density),
      delta_los_(scenario.blockage.delta_los),
      gamma_los_(scenario.blockage.gamma_los),
      delta_out_(scenario.blockage.delta_out),
      gamma_out_(scenario.blockage.gamma_out),
      log_gamma_out_(0),
      crossover_(kInf),
      kappa_{scenario.pathloss.kappa_los, scenario.pathloss.kappa_nlos},
      beta_{scenario.pathloss.beta_los, scenario.pathloss.beta_nlos}
{
    check_scenario(scenario);

    if (gamma_los_ > 0 && delta_los_ > 0)
    {
        c_.k1 = 2 * kPi * lambda_ * gamma_los_ / (delta_los_ * delta_los_);
    }
    else if (gamma_los_ > 0)
    {
        c_.k1 = kInf; // constant LOS share; k1_term switches to its limit
    }
    for (int i = 0; i < 2; ++i)
    {
        c_.q[i] = delta_los_ / kappa_[i];
        c_.z[i] = kInf;
    }

    if (!outage_)
    {
        return;
    }
    if (gamma_out_ < 1)
    {
        throw ParameterError("outage model with gamma_out < 1 is not supported");
    }
    if (!(delta_out_ > 0))
    {
        throw ParameterError("outage model requires delta_out > 0; disable the outage state instead");
    }

    log_gamma_out_ = std::log(gamma_out_);
    crossover_ = log_gamma_out_ / delta_out_;
    const long double dsum = delta_los_ + delta_out_;
    c_.k2 = gamma_los_ > 0 ? 2 * kPi * lambda_ * gamma_los_ * gamma_out_ / (dsum * dsum) : 0;
    c_.r_const = delta_los_ * crossover_;
    c_.w_const = dsum * crossover_;
    for (int i = 0; i < 2; ++i)
    {
        c_.t[i] = delta_out_ / kappa_[i];
        c_.v[i] = dsum / kappa_[i];
        c_.z[i] = std::pow(kappa_[i] * crossover_, beta_[i]);
    }
}

int
IntensityMeasure::index(LinkState s) const
{
    if (s == LinkState::out)
    {
        throw DomainError("intensity building blocks are undefined for the OUT state");
    }
    return s == LinkState::los ? 0 : 1;
}

double
IntensityMeasure::breakpoint(LinkState s) const
{
    return static_cast<double>(c_.z[index(s)]);
}

// K1 (1 - e^-u - u e^-u) with u = Q x^(1/beta) = delta_los rho. When
// delta_los = 0 the LOS share is constant and the term tends to
// pi lambda gamma_los rho^2.
long double
IntensityMeasure::k1_term(long double u, long double rho) const
{
    if (gamma_los_ == 0)
    {
        return 0;
    }
    if (delta_los_ == 0)
    {
        return kPi * lambda_ * gamma_los_ * rho * rho;
    }
    return c_.k1 * moment_fraction(u);
}

long double
IntensityMeasure::u0(long double x, int i, bool outage_route) const
{
    if (gamma_los_ == 0)
    {
        return 0;
    }
    const long double root = std::pow(x, 1 / beta_[i]);
    if (!outage_route || x < c_.z[i])
    {
        return k1_term(c_.q[i] * root, root / kappa_[i]);
    }
    // e^-W + W e^-W - e^-Vy - Vy e^-Vy rewritten as a difference of moment
    // fractions to avoid cancellation when both exponents are small.
    return k1_term(c_.r_const, crossover_) +
           c_.k2 * (moment_fraction(c_.v[i] * root) - moment_fraction(c_.w_const));
}

long double
IntensityMeasure::u1(long double x, int i, bool outage_route) const
{
    const long double root = std::pow(x, 1 / beta_[i]);
    if (!outage_route || x < c_.z[i])
    {
        return kPi * lambda_ * root * root / (kappa_[i] * kappa_[i]);
    }
    return kPi * lambda_ * crossover_ * crossover_ +
           2 * kPi * lambda_ * gamma_out_ / (delta_out_ * delta_out_) *
               (moment_fraction(c_.t[i] * root) - moment_fraction(log_gamma_out_));
}

// The derivative coefficients simplify: K1 Q_s^2 = 2 pi lambda gamma_los
// kappa_s^-2, K2 V_s^2 = K1 Q_s^2 gamma_out and delta_out^-2 T_s^2 =
// kappa_s^-2. The Dirac terms are absent because u0, u1 are continuous at Z_s.
long double
IntensityMeasure::u0_deriv(long double x, int i, bool outage_route) const
{
    if (gamma_los_ == 0)
    {
        return 0;
    }
    const long double root = std::pow(x, 1 / beta_[i]);
    const long double coeff = 2 * kPi * lambda_ / (kappa_[i] * kappa_[i] * beta_[i]) * root * root / x;
    if (!outage_route || x < c_.z[i])
    {
        return coeff * gamma_los_ * std::exp(-c_.q[i] * root);
    }
    return coeff * gamma_los_ * gamma_out_ * std::exp(-c_.v[i] * root);
}

long double
IntensityMeasure::u1_deriv(long double x, int i, bool outage_route) const
{
    const long double root = std::pow(x, 1 / beta_[i]);
    const long double coeff = 2 * kPi * lambda_ / (kappa_[i] * kappa_[i] * beta_[i]) * root * root / x;
    if (!outage_route || x < c_.z[i])
    {
        return coeff;
    }
    return coeff * gamma_out_ * std::exp(-c_.t[i] * root);
}

double
IntensityMeasure::upsilon0(double x, LinkState s) const
{
    if (!(x >= 0))
    {
        throw DomainError("upsilon0: x must be >= 0");
    }
    return static_cast<double>(u0(x, index(s), outage_));
}

double
IntensityMeasure::upsilon1(double x, LinkState s) const
{
    if (!(x >= 0))
    {
        throw DomainError("upsilon1: x must be >= 0");
    }
    return static_cast<double>(u1(x, index(s), outage_));
}

double
IntensityMeasure::upsilon0_deriv(double x, LinkState s) const
{
    if (!(x > 0))
    {
        throw DomainError("upsilon0_deriv: x must be > 0");
    }
    return static_cast<double>(u0_deriv(x, index(s), outage_));
}

double
IntensityMeasure::upsilon1_deriv(double x, LinkState s) const
{
    if (!(x > 0))
    {
        throw DomainError("upsilon1_deriv: x must be > 0");
    }
    return static_cast<double>(u1_deriv(x, index(s), outage_));
}

long double
IntensityMeasure::lambda_component_ld(long double x, LinkState s) const
{
    if (!(x >= 0))
    {
        throw DomainError("lambda_component: x must be >= 0");
    }
    switch (s)
    {
    case LinkState::los:
        return u0(x, 0, outage_);
    case LinkState::nlos:
        return u1(x, 1, outage_) - u0(x, 1, outage_);
    case LinkState::out:
        break;
    }
    return 0;
}

double
IntensityMeasure::lambda_component(double x, LinkState s) const
{
    return static_cast<double>(lambda_component_ld(x, s));
}

double
IntensityMeasure::lambda_component_no_outage(double x, LinkState s) const
{
    if (outage_)
    {
        throw DomainError("no-outage closed forms requested for a scenario with the outage state enabled");
    }
    if (!(x >= 0))
    {
        throw DomainError("lambda_component_no_outage: x must be >= 0");
    }
    switch (s)
    {
    case LinkState::los:
        return static_cast<double>(u0(x, 0, false));
    case LinkState::nlos:
        return static_cast<double>(u1(x, 1, false) - u0(x, 1, false));
    case LinkState::out:
        break;
    }
    return 0;
}

long double
IntensityMeasure::lambda_ld(long double x) const
{
    return lambda_component_ld(x, LinkState::los) + lambda_component_ld(x, LinkState::nlos);
}

double
IntensityMeasure::lambda(double x) const
{
    return static_cast<double>(lambda_ld(x));
}

long double
IntensityMeasure::lambda_deriv_ld(long double x, LinkState s) const
{
    if (!(x > 0))
    {
        throw DomainError("lambda_deriv: x must be > 0");
    }
    switch (s)
    {
    case LinkState::los:
        return u0_deriv(x, 0, outage_);
    case LinkState::nlos: {
        // u1' - u0' = u1' (1 - gamma_los e^(-Q X)) on both sides of Z, since
        // V = Q + T. Factored to keep precision where Q X is tiny.
        const long double root = std::pow(x, 1 / beta_[1]);
        return u1_deriv(x, 1, outage_) * ((1 - gamma_los_) - gamma_los_ * std::expm1(-c_.q[1] * root));
    }
    case LinkState::out:
        break;
    }
    return 0;
}

double
IntensityMeasure::lambda_deriv(double x, LinkState s) const
{
    return static_cast<double>(lambda_deriv_ld(x, s));
}

double
IntensityMeasure::lambda_limit(LinkState s) const
{
    if (s == LinkState::out)
    {
        return 0;
    }
    long double los = 0;
    if (gamma_los_ > 0)
    {
        if (!outage_)
        {
            los = c_.k1; // +inf when delta_los == 0
        }
        else
        {
            los = k1_term(c_.r_const, crossover_) + c_.k2 * (1 - moment_fraction(c_.w_const));
        }
    }
    if (s == LinkState::los)
    {
        return static_cast<double>(los);
    }
    if (!outage_)
    {
        return std::numeric_limits<double>::infinity();
    }
    const long double all = kPi * lambda_ * crossover_ * crossover_ +
                            2 * kPi * lambda_ / (delta_out_ * delta_out_) * (1 + log_gamma_out_);
    return static_cast<double>(all - los);
}

double
IntensityMeasure::lambda_limit() const
{
    return lambda_limit(LinkState::los) + lambda_limit(LinkState::nlos);
}

double
IntensityMeasure::cdf_min_path_loss(double x) const
{
    if (!(x >= 0))
    {
        throw DomainError("cdf_min_path_loss: x must be >= 0");
    }
    if (std::isinf(x))
    {
        return -std::expm1(-lambda_limit());
    }
    return static_cast<double>(-std::expm1(-lambda_ld(x)));
}

double
oracle_intensity_quadrature(const Scenario& scenario, double x, LinkState s)
{
    if (!(x >= 0))
    {
        throw DomainError("oracle_intensity_quadrature: x must be >= 0");
    }
    if (s == LinkState::out || x == 0)
    {
        return 0;
    }
    const bool los = s == LinkState::los;
    const long double beta = los ? scenario.pathloss.beta_los : scenario.pathloss.beta_nlos;
    // Rebuild kappa from the recorded alpha when there is one, so a kappa that
    // disagrees with its alpha shows up as a mismatch against the closed form.
    const auto& alpha = los ? scenario.alpha_los_db : scenario.alpha_nlos_db;
    const long double kappa = alpha ? std::pow(10.0L, static_cast<long double>(*alpha) / (10 * beta))
                                    : (los ? scenario.pathloss.kappa_los : scenario.pathloss.kappa_nlos);
    const long double rho = std::pow(static_cast<long double>(x), 1 / beta) / kappa;
    const long double lambda = scenario.system.density;

    const auto integrand = [&](long double r) -> long double {
        const auto p = link_state_probs(static_cast<double>(r), scenario);
        return 2 * kPi * lambda * (los ? p.p_los : p.p_nlos) * r;
    };

    // Panels resolve the blockage decay lengths and the outage kink.
    const auto& b = scenario.blockage;
    long double scale = kInf;
    if (b.delta_los > 0)
    {
        scale = std::min<long double>(scale, 1 / static_cast<long double>(b.delta_los));
    }
    long double kink = kInf;
    if (scenario.outage_enabled && b.delta_out > 0)
    {
        scale = std::min<long double>(scale, 1 / static_cast<long double>(b.delta_los + b.delta_out));
        kink = std::max<long double>(0, std::log(static_cast<long double>(b.gamma_out)) / b.delta_out);
    }

    std::vector<long double> points;
    if (kink < rho)
    {
        points = geometric_breakpoints(0, kink, std::min(scale, kink));
        const auto tail = geometric_breakpoints(kink, rho, scale);
        points.insert(points.end(), tail.begin(), tail.end());
    }
    else
    {
        points = geometric_breakpoints(0, rho, scale);
    }
    points = merge_breakpoints(std::move(points), 0, rho);

    const auto result = integrate_panels(integrand, points, 1e-12L);
    if (result.error > 1e-10L * std::abs(result.value))
    {
        throw QuadratureError("intensity oracle missed its 1e-10 relative tolerance", result.value, result.error);
    }
    return static_cast<double>(result.value);
}

} // namespace mmcov
