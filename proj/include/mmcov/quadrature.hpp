#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mmcov
{

/// Adaptive quadrature failed to meet its tolerance. Carries what it did get.
class QuadratureError : public std::runtime_error
{
  public:
    QuadratureError(const std::string& what, long double estimate, long double error)
        : std::runtime_error(what), estimate_(estimate), error_(error)
    {
    }

    long double estimate() const { return estimate_; }
    long double error() const { return error_; }

  private:
    long double estimate_;
    long double error_;
};

struct QuadratureResult
{
    long double value{0};
    long double error{0};
    /// Integral of |f|, used to express tolerances relative to the integrand.
    long double l1{0};
};

using Integrand = std::function<long double(long double)>;

/// Adaptive Gauss-Kronrod (15-point Gauss / 31-point Kronrod) over the
/// panels delimited by the sorted breakpoints. The tolerance is shared out
/// by each panel's share of the total L1 norm; throws when the summed error
/// estimate ends above 4 rel_tol times the total L1 norm.
QuadratureResult integrate_panels(const Integrand& f, std::span<const long double> breakpoints, long double rel_tol);

/// Breakpoints a, a + h, a + 2h, a + 4h, ... clipped to b. Resolves features
/// of width h near a on long intervals.
std::vector<long double> geometric_breakpoints(long double a, long double b, long double h);

/// Merges breakpoint sets, drops points outside [lo, hi] and near-duplicates.
std::vector<long double> merge_breakpoints(std::vector<long double> points, long double lo, long double hi);

} // namespace mmcov
