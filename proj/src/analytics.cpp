#include "mmcov/analytics.hpp"

#include "mmcov/quadrature.hpp"

#include <cmath>
#include <numbers>

namespace mmcov
{

namespace
{

constexpr long double kTailMass = 1e-14L;
constexpr long double kRateLowerT = 1e-13L;
constexpr double kRateCoverageFloor = 1e-10;
constexpr long double kRateMaxLogT = 69.0L; // t = 1e30

// Largest y in [lo, hi] with pred(y) true, assuming pred is true below some
// point and false above it.
template <typename Pred>
long double
bisect_last_true(long double lo, long double hi, Pred pred, int iterations)
{
    for (int i = 0; i < iterations; ++i)
    {
        const long double mid = (lo + hi) / 2;
        (pred(mid) ? lo : hi) = mid;
    }
    return lo;
}

std::vector<long double>
uniform_breakpoints(long double lo, long double hi, long double step)
{
    std::vector<long double> points;
    for (long double p = lo + step; p < hi; p += step)
    {
        points.push_back(p);
    }
    return points;
}

} // namespace

long double
clamped_erfc(long double arg)
{
    if (arg > 38)
    {
        return 0;
    }
    if (arg < -38)
    {
        return 2;
    }
    return std::erfc(arg);
}

CoverageAnalyzer::CoverageAnalyzer(const Scenario& scenario, AnalyticsOptions options)
    : scenario_(scenario),
      options_(options),
      budget_(make_link_budget(scenario)),
      intensity_(scenario)
{
    const auto lambda_at = [this](long double y) { return intensity_.lambda_ld(std::exp(y)); };

    // Below y_lo the serving-link mass 1 - e^-Lambda is under kTailMass.
    y_lo_ = bisect_last_true(-200.0L, 200.0L, [&](long double y) { return lambda_at(y) <= kTailMass; }, 100);

    const long double limit = intensity_.lambda_limit();
    const auto upper_mass = [&](long double y) -> long double {
        const long double l = lambda_at(y);
        if (std::isinf(limit))
        {
            return std::exp(-l);
        }
        return std::exp(-l) * -std::expm1(-(limit - l));
    };
    y_hi_ = bisect_last_true(y_lo_, 200.0L, [&](long double y) { return upper_mass(y) > kTailMass; }, 100);
    y_hi_ = std::nextafter(y_hi_, 1000.0L);

    tail_mass_ = -std::expm1(-lambda_at(y_lo_)) + std::max(0.0L, upper_mass(y_hi_));
}

CoverageTerm
CoverageAnalyzer::coverage_term(LinkState s, double t) const
{
    if (s == LinkState::out)
    {
        throw DomainError("coverage_term: OUT links never serve");
    }
    if (!(t > 0))
    {
        throw DomainError("coverage_term: threshold must be > 0");
    }

    const auto& shadow = s == LinkState::los ? budget_.los : budget_.nlos;
    const long double mu = shadow.mu;
    const long double scale = std::numbers::sqrt2_v<long double> * shadow.sigma;
    const long double offset = std::log(static_cast<long double>(t)) - std::log(static_cast<long double>(budget_.reference_snr)) - mu;

    // ln(T x / gamma0) - mu = y + offset with y = ln x; dx = x dy.
    const auto integrand = [&](long double y) -> long double {
        const long double x = std::exp(y);
        const long double density = intensity_.lambda_deriv_ld(x, s) * x * std::exp(-intensity_.lambda_ld(x));
        return 0.5L * clamped_erfc((y + offset) / scale) * density;
    };

    auto points = uniform_breakpoints(y_lo_, y_hi_, 1.0L);
    for (const auto state : {LinkState::los, LinkState::nlos})
    {
        const long double z = intensity_.breakpoint(state);
        if (z > 0 && std::isfinite(z))
        {
            points.push_back(std::log(z));
        }
    }
    points.push_back(-offset);
    points = merge_breakpoints(std::move(points), y_lo_, y_hi_);

    const auto q = integrate_panels(integrand, points, options_.coverage_rel_tol);
    return {static_cast<double>(q.value), static_cast<double>(q.error + tail_mass_)};
}

CoverageResult
CoverageAnalyzer::coverage_probability(double t) const
{
    const auto los = coverage_term(LinkState::los, t);
    const auto nlos = coverage_term(LinkState::nlos, t);
    CoverageResult out;
    out.los_term = los.value;
    out.nlos_term = nlos.value;
    out.total = los.value + nlos.value;
    out.quadrature_error_estimate = los.error + nlos.error;
    return out;
}

RateResult
CoverageAnalyzer::average_rate() const
{
    const auto coverage = [this](double t) { return coverage_probability(t).total; };
    return average_rate_of(coverage, scenario_.system.bandwidth_hz, options_.rate_rel_tol);
}

RateResult
average_rate_of(const std::function<double(double)>& coverage, double bandwidth_hz, double rel_tol,
                std::span<const double> threshold_breaks)
{
    const long double v_lo = std::log(kRateLowerT);
    const auto cov_at = [&](long double v) { return coverage(static_cast<double>(std::exp(v))); };

    long double v_hi = kRateMaxLogT;
    const double cov_max = cov_at(v_hi);
    if (cov_max < kRateCoverageFloor)
    {
        v_hi = bisect_last_true(v_lo, kRateMaxLogT, [&](long double v) { return cov_at(v) >= kRateCoverageFloor; }, 48);
        v_hi = std::nextafter(v_hi, 1000.0L);
    }

    // integral of P(t) / (1 + t) dt = integral of P(e^v) / (1 + e^-v) dv
    const auto integrand = [&](long double v) -> long double {
        return static_cast<long double>(cov_at(v)) / (1 + std::exp(-v));
    };

    auto points = uniform_breakpoints(v_lo, v_hi, 8.0L);
    for (const double t : threshold_breaks)
    {
        if (t > 0)
        {
            points.push_back(std::log(static_cast<long double>(t)));
        }
    }
    points = merge_breakpoints(std::move(points), v_lo, v_hi);

    const auto q = integrate_panels(integrand, points, rel_tol);
    const long double lower_tail = cov_at(v_lo) * std::log1p(std::exp(v_lo));
    const long double upper_tail = 10.0L * cov_at(v_hi);
    const long double scale = bandwidth_hz / std::numbers::ln2_v<long double>;
    return {static_cast<double>(scale * (q.value + lower_tail)),
            static_cast<double>(scale * (q.error + lower_tail + upper_tail))};
}

} // namespace mmcov
