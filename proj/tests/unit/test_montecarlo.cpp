#include "mmcov/analytics.hpp"
#include "mmcov/montecarlo.hpp"

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <numbers>
#include <vector>

using namespace mmcov;

TEST_CASE("truncation radius")
{
    const auto s = load_preset("mmwave-28");
    CHECK(truncation_radius(s, 1e-6) == doctest::Approx(30.0 * (5.2 + 6.0 * std::log(10.0))).epsilon(1e-13));
    CHECK(truncation_radius(s, 1e-6) == doctest::Approx(570.465).epsilon(1e-6));
    CHECK(truncation_radius(s, 0.5) == doctest::Approx(156.0 + 30.0 * std::log(2.0)).epsilon(1e-13));
    CHECK_THROWS_AS(truncation_radius(s, 1.0), DomainError);
    CHECK(truncation_radius(s, 5e-7) - truncation_radius(s, 1e-6) ==
          doctest::Approx(30.0 * std::log(2.0)).epsilon(1e-10));
    CHECK_THROWS_AS(truncation_radius(s, 0.0), DomainError);
    CHECK_THROWS_AS(truncation_radius(s, 2.0), DomainError);

    SUBCASE("without outage the mean interferer power sets the radius")
    {
        auto u = load_preset("uwave-2.5");
        const double eps = 1e-6;
        const double r = truncation_radius(u, eps);
        CHECK(r > 20.0 * u.system.cell_radius());
        const auto lb = make_link_budget(u);
        const double mean_h = std::exp(lb.nlos.mu + 0.5 * lb.nlos.sigma * lb.nlos.sigma);
        const double power = lb.tx_power_mw * mean_h / path_loss(r, LinkState::nlos, u.pathloss);
        CHECK(power == doctest::Approx(eps * lb.noise_power_mw).epsilon(1e-9));

        // Never tighter than 20 cell radii.
        CHECK(truncation_radius(u, 0.5) == doctest::Approx(20.0 * u.system.cell_radius()));
    }
}

TEST_CASE("realization streams")
{
    auto a = realization_stream(7, 3);
    auto b = realization_stream(7, 3);
    auto c = realization_stream(7, 4);
    auto d = realization_stream(8, 3);
    const auto x = a();
    CHECK(x == b());
    CHECK(x != c());
    CHECK(x != d());
}

TEST_CASE("sampled network statistics")
{
    const auto s = load_preset("mmwave-28");
    const NetworkSimulator sim(s);
    const double radius = 400.0;
    const int n = 4000;

    double count = 0.0;
    double los_far = 0.0;
    double in_band = 0.0;
    for (int i = 0; i < n; ++i)
    {
        auto rng = realization_stream(99, i);
        const auto real = sim.sample_realization(rng, radius);
        count += real.stations.size();
        for (const auto& bs : real.stations)
        {
            CHECK(bs.distance >= s.min_distance_m);
            CHECK(bs.distance <= radius);
            if (bs.distance > 200.0 && bs.distance < 220.0)
            {
                in_band += 1;
                los_far += bs.state == LinkState::los ? 1 : 0;
            }
        }
    }

    const double mean = s.system.density * std::numbers::pi * radius * radius;
    CHECK(std::abs(count / n - mean) < 5.0 * std::sqrt(mean / n));

    // Within a thin annulus the LOS share is close to p_los at its midpoint.
    const double p = link_state_probs(210.0, s).p_los;
    CHECK(std::abs(los_far / in_band - p) < 5.0 * std::sqrt(p * (1 - p) / in_band) + 0.01);
}

TEST_CASE("SINR of a hand-built realization")
{
    const auto s = load_preset("mmwave-73");
    const NetworkSimulator sim(s);
    const auto& lb = sim.budget();

    NetworkRealization real;
    real.stations.push_back({40.0, LinkState::los, path_loss(40.0, LinkState::los, s.pathloss), 2.0, lb.intended_gain});
    real.stations.push_back({90.0, LinkState::nlos, path_loss(90.0, LinkState::nlos, s.pathloss), 0.5, 100.0});
    real.stations.push_back({300.0, LinkState::out, INFINITY, 1.0, 1.0});
    real.serving = 0;

    const double signal = lb.tx_power_mw * lb.intended_gain * 2.0 / real.stations[0].path_loss;
    const double interf = lb.tx_power_mw * 100.0 * 0.5 / real.stations[1].path_loss;
    CHECK(*sim.sinr(real, InterferenceMode::snr_only) == doctest::Approx(signal / lb.noise_power_mw).epsilon(1e-15));
    CHECK(*sim.sinr(real, InterferenceMode::full_sinr) ==
          doctest::Approx(signal / (lb.noise_power_mw + interf)).epsilon(1e-15));

    const auto o = sim.outcome(real);
    CHECK_FALSE(o.outage);
    CHECK(o.serving_path_loss == real.stations[0].path_loss);

    NetworkRealization empty;
    CHECK_FALSE(sim.sinr(empty, InterferenceMode::snr_only).has_value());
    CHECK(sim.outcome(empty).outage);
}

TEST_CASE("outcome invariants")
{
    const auto s = load_preset("mmwave-28");
    const auto out = simulate_outcomes(s, 20000, 5);
    std::size_t outages = 0;
    for (const auto& o : out)
    {
        if (o.outage)
        {
            ++outages;
            CHECK(o.snr == 0.0);
            continue;
        }
        CHECK(o.sinr <= o.snr);
        CHECK(o.sinr > 0.0);
    }
    // P(no serving station) = e^-Lambda_inf.
    const double p = std::exp(-CoverageAnalyzer(s).intensity().lambda_limit());
    CHECK(std::abs(outages / 20000.0 - p) < 5.0 * std::sqrt(p * (1 - p) / 20000.0));
}

TEST_CASE("results do not depend on the thread count")
{
    const auto s = load_preset("mmwave-73");
    SimulationOptions one;
    one.threads = 1;
    SimulationOptions many;
    many.threads = 7;
    const auto a = simulate_outcomes(s, 3000, 1234, one);
    const auto b = simulate_outcomes(s, 3000, 1234, many);
    REQUIRE(a.size() == b.size());
    bool identical = true;
    for (std::size_t i = 0; i < a.size(); ++i)
    {
        identical = identical && std::memcmp(&a[i].sinr, &b[i].sinr, sizeof(double)) == 0 &&
                    std::memcmp(&a[i].snr, &b[i].snr, sizeof(double)) == 0 && a[i].outage == b[i].outage;
    }
    CHECK(identical);
    CHECK(rate_from(a, 1e9, InterferenceMode::full_sinr).mean == rate_from(b, 1e9, InterferenceMode::full_sinr).mean);

    // A prefix of a longer run is the shorter run.
    const auto c = simulate_outcomes(s, 1000, 1234, many);
    CHECK(std::memcmp(&c[999].sinr, &a[999].sinr, sizeof(double)) == 0);
}

TEST_CASE("every link in outage")
{
    auto s = load_preset("mmwave-28");
    s.blockage.gamma_out = 1.0;
    s.blockage.delta_out = 60.0;
    SimulationOptions opt;
    opt.truncation_radius = 300.0;
    const auto out = simulate_outcomes(s, 500, 3, opt);
    CHECK(coverage_from(out, 1e-9, InterferenceMode::full_sinr).mean == 0.0);
    CHECK(rate_from(out, 2e9, InterferenceMode::full_sinr).mean == 0.0);
}

TEST_CASE("estimators")
{
    std::vector<LinkOutcome> out(4);
    out[0] = {9.0, 3.0, 1.0, false};
    out[1] = {1.0, 1.0, 1.0, false};
    out[2] = {0.0, 0.0, INFINITY, true};
    out[3] = {15.0, 0.5, 1.0, false};

    const auto c = coverage_from(out, 1.0, InterferenceMode::full_sinr);
    CHECK(c.mean == 0.5);
    CHECK(c.half_width_95 == doctest::Approx(1.959963984540054 * 0.25));
    CHECK(coverage_from(out, 1.0, InterferenceMode::snr_only).mean == 0.75);

    const auto r = rate_from(out, 10.0, InterferenceMode::snr_only);
    CHECK(r.mean == doctest::Approx(10.0 * (std::log2(10.0) + 1.0 + 4.0) / 4.0).epsilon(1e-15));
    CHECK(r.n_realizations == 4);

    CHECK_THROWS_AS(estimate_coverage(load_preset("mmwave-28"), 1.0, 0, 1), DomainError);
}

TEST_CASE("SNR-only coverage is an unbiased estimate of the analytic curve")
{
    for (const auto* name : {"mmwave-28", "mmwave-73", "uwave-2.5"})
    {
        CAPTURE(name);
        auto s = load_preset(name);
        SimulationOptions opt;
        if (!s.outage_enabled)
        {
            // SNR-only outcomes never look past the serving station.
            opt.truncation_radius = 12.0 * s.system.cell_radius();
        }
        const std::size_t n = 200000;
        const auto out = simulate_outcomes(s, n, 2024, opt);
        const CoverageAnalyzer an(s);
        for (double tdb = -20.0; tdb <= 40.0; tdb += 10.0)
        {
            CAPTURE(tdb);
            const double p = an.coverage_probability(db_to_linear(tdb)).total;
            const double mc = coverage_from(out, db_to_linear(tdb), InterferenceMode::snr_only).mean;
            const double sd = std::sqrt(std::max(p * (1 - p), 1e-12) / n);
            CHECK(std::abs(mc - p) < 4.5 * sd + 1e-6);
        }
    }
}

TEST_CASE("with interference counted, mmWave covers more than microwave at a 50 m cell radius")
{
    auto mm = load_preset("mmwave-28");
    mm.system.set_cell_radius(50.0);
    auto uw = load_preset("uwave-2.5");
    uw.system.set_cell_radius(50.0);
    SimulationOptions opt;
    opt.truncation_radius = 2000.0;
    const auto a = simulate_outcomes(mm, 4000, 3, opt);
    const auto b = simulate_outcomes(uw, 1000, 3, opt);
    int mm_ahead = 0;
    for (double tdb = 0.0; tdb <= 40.0; tdb += 5.0)
    {
        const double t = db_to_linear(tdb);
        const auto pm = coverage_from(a, t, InterferenceMode::full_sinr);
        const auto pu = coverage_from(b, t, InterferenceMode::full_sinr);
        mm_ahead += pm.mean - pm.half_width_95 > pu.mean + pu.half_width_95 ? 1 : 0;
    }
    CHECK(mm_ahead == 9);
}

TEST_CASE("doubling the window moves coverage by less than the confidence interval")
{
    auto s = load_preset("mmwave-28");
    s.system.set_cell_radius(50.0);
    const std::size_t n = 20000;
    SimulationOptions wide;
    wide.truncation_radius = 2.0 * truncation_radius(s, 1e-6);
    const auto a = simulate_outcomes(s, n, 8);
    const auto b = simulate_outcomes(s, n, 8, wide);
    for (double tdb = -10.0; tdb <= 40.0; tdb += 10.0)
    {
        const double t = db_to_linear(tdb);
        const auto pa = coverage_from(a, t, InterferenceMode::full_sinr);
        const auto pb = coverage_from(b, t, InterferenceMode::full_sinr);
        CHECK(std::abs(pa.mean - pb.mean) < std::hypot(pa.half_width_95, pb.half_width_95) + 1.0 / n);
    }
}
