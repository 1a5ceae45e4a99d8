#include "mmcov/validation.hpp"

#include "mmcov/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <random>

namespace mmcov
{

namespace
{

constexpr LinkState kStates[] = {LinkState::los, LinkState::nlos};

std::string
sci(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

double
rel_dev(long double a, long double b)
{
    const long double d = std::abs(a - b);
    if (d == 0)
    {
        return 0.0;
    }
    return static_cast<double>(d / std::max(std::abs(b), std::numeric_limits<long double>::min()));
}

CheckResult
bounded(std::string name, double worst, double threshold, std::string detail = {})
{
    CheckResult c;
    c.name = std::move(name);
    c.worst = worst;
    c.threshold = threshold;
    c.passed = worst <= threshold;
    c.detail = std::move(detail);
    return c;
}

CheckResult
not_applicable(std::string name, std::string why)
{
    CheckResult c;
    c.name = std::move(name);
    c.passed = true;
    c.applicable = false;
    c.detail = std::move(why);
    return c;
}

CheckResult
failed(std::string name, std::string why)
{
    CheckResult c;
    c.name = std::move(name);
    c.passed = false;
    c.worst = std::numeric_limits<double>::infinity();
    c.detail = std::move(why);
    return c;
}

std::vector<double>
log_grid(double lo, double hi, std::size_t n)
{
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        const double f = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
        v[i] = std::exp(std::log(lo) + f * (std::log(hi) - std::log(lo)));
    }
    return v;
}

template <typename Fn>
CheckResult
guard(const char* name, Fn&& fn)
{
    try
    {
        return fn();
    }
    catch (const std::exception& e)
    {
        return failed(name, e.what());
    }
}

} // namespace

bool
ValidationReport::passed() const
{
    for (const auto& c : checks)
    {
        if (!c.passed)
        {
            return false;
        }
    }
    return !checks.empty();
}

std::vector<double>
derivative_check_grid(const IntensityMeasure& im, LinkState s, double lo, double hi, std::size_t count)
{
    const auto elasticity = [&](long double x) {
        const long double l = im.lambda_component_ld(x, s);
        return l > 0 ? x * im.lambda_deriv_ld(x, s) / l : 0.0L;
    };
    if (im.lambda_component_ld(hi, s) > 0 && elasticity(hi) < 1e-6L)
    {
        long double a = std::log(static_cast<long double>(lo));
        long double b = std::log(static_cast<long double>(hi));
        for (int i = 0; i < 200; ++i)
        {
            const long double mid = (a + b) / 2;
            (elasticity(std::exp(mid)) >= 1e-6L ? a : b) = mid;
        }
        hi = static_cast<double>(std::exp(a));
    }
    const double z = im.breakpoint(s);
    std::vector<double> out;
    for (const double x : log_grid(lo, hi, count))
    {
        if (!(std::isfinite(z) && std::abs(x - z) <= 1e-2 * z))
        {
            out.push_back(x);
        }
    }
    return out;
}

long double
finite_difference(const IntensityMeasure& im, long double x, LinkState s)
{
    // Step shrinks with the log-slope of Lambda' so that e^(-c x^(1/beta))
    // tails stay resolved; one Richardson step removes the h^2 term.
    const long double d0 = im.lambda_deriv_ld(x, s);
    const long double d1 = im.lambda_deriv_ld(x * (1 + 1e-6L), s);
    const long double slope = d0 > 0 && d1 > 0 ? std::abs(std::log(d1 / d0)) / 1e-6L : 0;
    const long double h = 1e-3L / (1 + slope) * x;
    const auto central = [&](long double dx) {
        return (im.lambda_component_ld(x + dx, s) - im.lambda_component_ld(x - dx, s)) / (2 * dx);
    };
    return (4 * central(h / 2) - central(h)) / 3;
}

NormalizationCheck
serving_link_normalization(const IntensityMeasure& im)
{
    const auto integrand = [&](long double y) -> long double {
        const long double x = std::exp(y);
        const long double d = im.lambda_deriv_ld(x, LinkState::los) + im.lambda_deriv_ld(x, LinkState::nlos);
        return d == 0 ? 0 : d * x * std::exp(-im.lambda_ld(x));
    };
    const long double lo = -60;
    const long double hi = 150;
    std::vector<long double> points;
    for (long double y = lo + 1; y < hi; y += 1)
    {
        points.push_back(y);
    }
    for (const auto s : kStates)
    {
        const double z = im.breakpoint(s);
        if (z > 0 && std::isfinite(z))
        {
            points.push_back(std::log(static_cast<long double>(z)));
        }
    }
    points = merge_breakpoints(std::move(points), lo, hi);
    const auto q = integrate_panels(integrand, points, 1e-12L);

    NormalizationCheck out;
    out.integral = static_cast<double>(q.value);
    out.quadrature_error = static_cast<double>(q.error);
    const long double limit = im.lambda_limit();
    out.expected = std::isinf(limit) ? 1.0 : static_cast<double>(-std::expm1(-limit));
    return out;
}

ValidationReport
validate_scenario(const Scenario& scenario)
{
    ValidationReport report;
    auto& checks = report.checks;

    try
    {
        const auto warnings = check_scenario(scenario);
        CheckResult c = bounded("scenario_invariants", 0.0, 0.0);
        for (const auto& w : warnings)
        {
            c.detail += (c.detail.empty() ? "warning: " : "; ") + w;
        }
        checks.push_back(c);
    }
    catch (const std::exception& e)
    {
        checks.push_back(failed("scenario_invariants", e.what()));
        return report;
    }

    if (scenario.alpha_los_db || scenario.alpha_nlos_db)
    {
        checks.push_back(bounded("pathloss_alpha_consistency", pathloss_alpha_mismatch_db(scenario), 1e-9, "dB"));
    }
    else
    {
        checks.push_back(not_applicable("pathloss_alpha_consistency", "no alpha recorded"));
    }

    std::optional<IntensityMeasure> im;
    try
    {
        im.emplace(scenario);
    }
    catch (const std::exception& e)
    {
        checks.push_back(failed("intensity_measure", e.what()));
        return report;
    }

    checks.push_back(guard("intensity_constants", [&] {
        if (!im->outage_enabled())
        {
            return not_applicable("intensity_constants", "outage state disabled");
        }
        const auto& c = im->constants();
        const long double ln_gamma = std::log(static_cast<long double>(scenario.blockage.gamma_out));
        const long double betas[2] = {scenario.pathloss.beta_los, scenario.pathloss.beta_nlos};
        double worst = 0;
        for (int i = 0; i < 2; ++i)
        {
            const long double root = std::pow(c.z[i], 1 / betas[i]);
            worst = std::max({worst, rel_dev(c.q[i] * root, c.r_const), rel_dev(c.v[i] * root, c.w_const),
                              rel_dev(c.t[i] * root, ln_gamma)});
        }
        return bounded("intensity_constants", worst, 1e-12);
    }));

    checks.push_back(guard("oracle_equivalence", [&] {
        double worst = 0;
        std::string where;
        for (const auto s : kStates)
        {
            for (const double x : log_grid(1e2, 1e16, 12))
            {
                const double d = rel_dev(im->lambda_component(x, s), oracle_intensity_quadrature(scenario, x, s));
                if (d > worst)
                {
                    worst = d;
                    where = std::string(to_string(s)) + " x=" + sci(x);
                }
            }
        }
        auto c = bounded("oracle_equivalence", worst, 1e-8, where);
        if (!im->outage_enabled())
        {
            c.detail += c.detail.empty() ? "no-outage route" : " (no-outage route)";
        }
        return c;
    }));

    checks.push_back(guard("breakpoint_continuity", [&] {
        if (!im->outage_enabled())
        {
            return not_applicable("breakpoint_continuity", "outage state disabled");
        }
        double worst = 0;
        for (const auto s : kStates)
        {
            const double z = im->breakpoint(s);
            const double below = std::nextafter(z, 0.0);
            for (const auto& [a, b] : {std::pair{im->upsilon0(below, s), im->upsilon0(z, s)},
                                       std::pair{im->upsilon1(below, s), im->upsilon1(z, s)}})
            {
                worst = std::max(worst, std::abs(a - b) / std::max(1.0, std::abs(b)));
            }
        }
        return bounded("breakpoint_continuity", worst, 1e-10);
    }));

    checks.push_back(guard("derivative", [&] {
        double worst = 0;
        std::string where;
        for (const auto s : kStates)
        {
            for (const double x : derivative_check_grid(*im, s, 1e2, 1e16, 12))
            {
                const double d = rel_dev(im->lambda_deriv_ld(x, s), finite_difference(*im, x, s));
                if (d > worst)
                {
                    worst = d;
                    where = std::string(to_string(s)) + " x=" + sci(x);
                }
            }
        }
        return bounded("derivative", worst, 1e-5, where);
    }));

    checks.push_back(guard("probability_sum", [&] {
        std::mt19937_64 rng(20160521);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        double worst = 0;
        for (int i = 0; i < 2000; ++i)
        {
            const double r = i % 2 ? 2000.0 * unit(rng) : std::exp(-10.0 + 20.0 * unit(rng));
            const auto p = link_state_probs(r, scenario);
            worst = std::max(worst, std::abs((p.p_los + p.p_nlos + p.p_out) - 1.0));
        }
        return bounded("probability_sum", worst, 0.0);
    }));

    checks.push_back(guard("normalization", [&] {
        const auto n = serving_link_normalization(*im);
        return bounded("normalization", std::abs(n.integral - n.expected), 1e-6,
                       "integral=" + sci(n.integral) + " expected=" + sci(n.expected));
    }));

    return report;
}

} // namespace mmcov
