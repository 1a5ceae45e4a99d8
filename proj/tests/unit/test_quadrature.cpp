#include "mmcov/quadrature.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

using namespace mmcov;

namespace
{

double
rel_err(long double got, long double want)
{
    return static_cast<double>(std::fabs(got - want) / std::fabs(want));
}

} // namespace

TEST_CASE("known integrals")
{
    SUBCASE("polynomial is exact")
    {
        const std::vector<long double> bp{0.0L, 2.0L};
        const auto r = integrate_panels([](long double x) { return x * x * x - x; }, bp, 1e-14L);
        CHECK(rel_err(r.value, 2.0L) < 1e-16);
    }

    SUBCASE("gaussian")
    {
        const auto bp = merge_breakpoints({-5.0L, 0.0L, 5.0L}, -40.0L, 40.0L);
        const auto r = integrate_panels([](long double x) { return std::exp(-x * x / 2); }, bp, 1e-13L);
        CHECK(rel_err(r.value, std::sqrt(2 * std::numbers::pi_v<long double>)) < 1e-14);
        CHECK(r.error < 1e-12L);
    }

    SUBCASE("kink at a breakpoint")
    {
        const std::vector<long double> bp{-1.0L, 0.3L, 2.0L};
        const auto r = integrate_panels([](long double x) { return std::fabs(x - 0.3L); }, bp, 1e-14L);
        CHECK(rel_err(r.value, (1.3L * 1.3L + 1.7L * 1.7L) / 2) < 1e-16);
    }

    SUBCASE("sharp peak on a long interval")
    {
        const auto bp = geometric_breakpoints(0.0L, 1000.0L, 1e-3L);
        const auto r = integrate_panels([](long double x) { return std::exp(-1000 * x); }, bp, 1e-12L);
        CHECK(rel_err(r.value, 1e-3L) < 1e-12);
    }

    SUBCASE("l1 norm of a sign-changing integrand")
    {
        const std::vector<long double> bp{0.0L, std::numbers::pi_v<long double>, 2 * std::numbers::pi_v<long double>};
        const auto r = integrate_panels([](long double x) { return std::sin(x); }, bp, 1e-12L);
        CHECK(std::fabs(r.value) < 1e-15L);
        CHECK(rel_err(r.l1, 4.0L) < 1e-14);
    }

    SUBCASE("non-integrable singularity is reported")
    {
        const std::vector<long double> bp{0.0L, 1.0L};
        CHECK_THROWS_AS(integrate_panels([](long double x) { return 1 / x; }, bp, 1e-10L), QuadratureError);
    }
}

TEST_CASE("breakpoint helpers")
{
    const auto g = geometric_breakpoints(1.0L, 10.0L, 0.5L);
    const std::vector<long double> want{1.0L, 1.5L, 2.0L, 3.0L, 5.0L, 9.0L, 10.0L};
    CHECK(g == want);
    CHECK(geometric_breakpoints(3.0L, 3.0L, 1.0L).size() == 1);

    const auto m = merge_breakpoints({5.0L, -3.0L, 2.0L, 2.0L + 1e-20L, 11.0L, 7.0L}, 0.0L, 10.0L);
    const std::vector<long double> merged{0.0L, 2.0L, 5.0L, 7.0L, 10.0L};
    CHECK(m == merged);
}
