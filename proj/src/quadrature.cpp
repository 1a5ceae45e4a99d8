#include "mmcov/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mmcov
{

namespace
{
constexpr unsigned kMaxDepth = 15;
using Rule = boost::math::quadrature::gauss_kronrod<long double, 31>;

std::string
panel_message(const char* what, long double a, long double b)
{
    std::ostringstream msg;
    msg << what << " on [" << static_cast<double>(a) << ", " << static_cast<double>(b) << "]";
    return msg.str();
}
} // namespace

QuadratureResult
integrate_panels(const Integrand& f, std::span<const long double> breakpoints, long double rel_tol)
{
    // First pass: one Kronrod rule per panel to size the L1 norm, so that the
    // tolerance can be shared out in absolute terms. Panels carrying a tiny
    // fraction of the mass then stop early instead of chasing rounding noise.
    std::vector<long double> coarse_l1(breakpoints.size(), 0);
    long double total_l1 = 0;
    std::size_t panels = 0;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i)
    {
        const long double a = breakpoints[i];
        const long double b = breakpoints[i + 1];
        if (!(b > a))
        {
            continue;
        }
        long double l1 = 0;
        Rule::integrate(f, a, b, 0, 0, nullptr, &l1);
        coarse_l1[i] = l1;
        total_l1 += l1;
        ++panels;
    }

    QuadratureResult total;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i)
    {
        const long double a = breakpoints[i];
        const long double b = breakpoints[i + 1];
        if (!(b > a))
        {
            continue;
        }
        long double tol = rel_tol;
        if (coarse_l1[i] > 0)
        {
            tol = std::min(0.1L, rel_tol * std::max(1.0L, total_l1 / (static_cast<long double>(panels) * coarse_l1[i])));
        }
        long double error = 0;
        long double l1 = 0;
        const long double value = Rule::integrate(f, a, b, kMaxDepth, tol, &error, &l1);
        if (!std::isfinite(value) || !std::isfinite(error))
        {
            throw QuadratureError(panel_message("quadrature produced a non-finite value", a, b), total.value,
                                  total.error);
        }
        total.value += value;
        total.error += error;
        total.l1 += l1;
    }
    // The adaptive rule stops at kMaxDepth silently; surface that here.
    if (total.error > 4 * rel_tol * total.l1 && total.error > 0)
    {
        std::ostringstream msg;
        msg << "quadrature did not converge: error " << static_cast<double>(total.error) << " exceeds tolerance "
            << static_cast<double>(rel_tol * total.l1);
        throw QuadratureError(msg.str(), total.value, total.error);
    }
    return total;
}

std::vector<long double>
geometric_breakpoints(long double a, long double b, long double h)
{
    std::vector<long double> points{a};
    if (!(b > a))
    {
        return points;
    }
    if (!(h > 0) || !std::isfinite(h))
    {
        h = b - a;
    }
    long double step = h;
    while (a + step < b)
    {
        points.push_back(a + step);
        step *= 2;
    }
    points.push_back(b);
    return points;
}

std::vector<long double>
merge_breakpoints(std::vector<long double> points, long double lo, long double hi)
{
    points.push_back(lo);
    points.push_back(hi);
    std::erase_if(points, [lo, hi](long double p) { return !(p >= lo && p <= hi); });
    std::sort(points.begin(), points.end());
    const long double min_gap = (hi - lo) * 1e-15L;
    std::vector<long double> out;
    for (const long double p : points)
    {
        if (out.empty() || p - out.back() > min_gap)
        {
            out.push_back(p);
        }
    }
    if (out.back() != hi)
    {
        out.back() = hi;
    }
    return out;
}

} // namespace mmcov
