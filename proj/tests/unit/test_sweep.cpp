#include "mmcov/analytics.hpp"
#include "mmcov/sweep.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

using namespace mmcov;

namespace
{

std::vector<std::string>
lines_of(const std::string& text)
{
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);)
    {
        out.push_back(line);
    }
    return out;
}

} // namespace

TEST_CASE("grid values")
{
    SweepGrid lin{-20.0, 40.0, 13, false};
    const auto v = lin.values();
    REQUIRE(v.size() == 13);
    CHECK(v.front() == -20.0);
    CHECK(v[4] == doctest::Approx(0.0));
    CHECK(v.back() == 40.0);

    SweepGrid lg{10.0, 1000.0, 3, true};
    const auto w = lg.values();
    REQUIRE(w.size() == 3);
    CHECK(w[1] == doctest::Approx(100.0).epsilon(1e-14));
    CHECK(w.back() == 1000.0);
}

TEST_CASE("mode parsing")
{
    const auto m = parse_modes("analytic,mc_full_sinr");
    CHECK(m.analytic);
    CHECK_FALSE(m.mc_snr_only);
    CHECK(m.mc_full_sinr);
    CHECK(parse_modes("mc_snr_only").any_mc());
    CHECK_FALSE(parse_modes("mc_snr_only").analytic);
    CHECK_THROWS_AS(parse_modes("analytic,mc_fast"), ParameterError);
    CHECK_THROWS_AS(parse_modes(""), ParameterError);
}

TEST_CASE("spec checks")
{
    SweepSpec spec;
    CHECK_NOTHROW(check_sweep_spec(spec));

    auto bad = spec;
    bad.grid.count = 1;
    CHECK_THROWS_AS(check_sweep_spec(bad), ParameterError);

    bad = spec;
    bad.grid.min = 50.0;
    bad.grid.max = 10.0;
    CHECK_THROWS_AS(check_sweep_spec(bad), ParameterError);

    bad = spec;
    bad.grid.log_spacing = true;
    CHECK_THROWS_AS(check_sweep_spec(bad), ParameterError);

    bad = spec;
    bad.variable = SweepVariable::cell_radius_m;
    bad.grid = SweepGrid{0.0, 100.0, 3, false};
    CHECK_THROWS_AS(check_sweep_spec(bad), ParameterError);

    bad = spec;
    bad.modes = SweepModes{false, false, false};
    CHECK_THROWS_AS(check_sweep_spec(bad), ParameterError);

    bad = spec;
    bad.truncation_epsilon = 0.0;
    CHECK_THROWS_AS(check_sweep_spec(bad), ParameterError);

    bad = spec;
    bad.n_realizations = 0;
    CHECK_NOTHROW(check_sweep_spec(bad));
    bad.modes.mc_full_sinr = true;
    CHECK_THROWS_AS(check_sweep_spec(bad), ParameterError);

    CHECK_THROWS_AS(run_rate_sweep(spec), ParameterError);
}

TEST_CASE("scenario resolution")
{
    SweepSpec spec;
    spec.preset = "mmwave-73";
    spec.outage_variant = OutageVariant::as_printed;
    spec.outage_enabled = false;
    spec.cell_radius_m = 75.0;
    const auto s = resolve_scenario(spec);
    CHECK_FALSE(s.outage_enabled);
    CHECK(s.blockage.delta_out == 5.2);
    CHECK(s.system.cell_radius() == doctest::Approx(75.0).epsilon(1e-14));

    spec.scenario_file = MMCOV_TEST_DATA_DIR "/mmwave28.scenario";
    spec.outage_enabled.reset();
    CHECK(resolve_scenario(spec).name == "mmwave-28-file");
}

TEST_CASE("coverage sweep output")
{
    SweepSpec spec;
    spec.grid = SweepGrid{-10.0, 30.0, 5, false};
    spec.modes = parse_modes("analytic,mc_snr_only,mc_full_sinr");
    spec.n_realizations = 3000;
    spec.base_seed = 77;

    const auto r = run_coverage_sweep(spec);
    const std::vector<std::string> cols{"threshold_db",         "analytic_coverage",     "analytic_err",
                                        "mc_snr_only_coverage", "mc_snr_only_err",       "mc_full_sinr_coverage",
                                        "mc_full_sinr_err"};
    CHECK(r.columns == cols);
    REQUIRE(r.rows.size() == 5);

    const CoverageAnalyzer an(load_preset("mmwave-28"));
    for (std::size_t i = 0; i < r.rows.size(); ++i)
    {
        CHECK(r.status[i] == "ok");
        CHECK(r.rows[i][1] == an.coverage_probability(db_to_linear(r.rows[i][0])).total);
        CHECK(r.rows[i][5] <= r.rows[i][3]);
        if (i > 0)
        {
            CHECK(r.rows[i][1] < r.rows[i - 1][1]);
        }
    }

    const auto csv = to_csv(r);
    const auto lines = lines_of(csv);
    REQUIRE(lines.size() == r.header.size() + 1 + 5);
    for (std::size_t i = 0; i < r.header.size(); ++i)
    {
        CHECK(lines[i].rfind("# ", 0) == 0);
    }
    CHECK(lines[r.header.size()] ==
          "threshold_db,analytic_coverage,analytic_err,mc_snr_only_coverage,mc_snr_only_err,"
          "mc_full_sinr_coverage,mc_full_sinr_err,status");
    CHECK(csv.find("seed=77") != std::string::npos);
    CHECK(csv.find("digest=" + scenario_digest(load_preset("mmwave-28"))) != std::string::npos);

    SUBCASE("reruns are byte-identical whatever the thread count")
    {
        auto again = spec;
        again.threads = 3;
        CHECK(to_csv(run_coverage_sweep(again)) == csv);
    }
}

TEST_CASE("radius sweep")
{
    SweepSpec spec;
    spec.variable = SweepVariable::cell_radius_m;
    spec.grid = SweepGrid{50.0, 200.0, 2, false};
    spec.threshold_db = 10.0;
    const auto r = run_coverage_sweep(spec);
    REQUIRE(r.rows.size() == 2);
    CHECK(r.columns.front() == "cell_radius_m");

    auto s = load_preset("mmwave-28");
    s.system.set_cell_radius(200.0);
    CHECK(r.rows[1][1] == CoverageAnalyzer(s).coverage_probability(10.0).total);
}

TEST_CASE("rate sweep with a comparison preset")
{
    SweepSpec spec;
    spec.variable = SweepVariable::cell_radius_m;
    spec.grid = SweepGrid{50.0, 100.0, 2, false};
    spec.modes = parse_modes("mc_full_sinr");
    spec.n_realizations = 2000;
    spec.compare_preset = "mmwave-73";
    const auto r = run_rate_sweep(spec);
    const std::vector<std::string> cols{"cell_radius_m",          "mc_full_sinr_rate",    "mc_full_sinr_err",
                                        "mc_full_sinr_rate_over_bw", "compare_analytic_rate", "compare_analytic_err"};
    CHECK(r.columns == cols);
    REQUIRE(r.rows.size() == 2);
    for (std::size_t i = 0; i < 2; ++i)
    {
        CHECK(r.status[i] == "ok");
        CHECK(r.rows[i][3] == doctest::Approx(r.rows[i][1] / 2e9).epsilon(1e-14));
        CHECK(r.rows[i][4] > 0.0);
    }
}

TEST_CASE("failing rows are reported, not fatal")
{
    SweepSpec spec;
    spec.preset = "mmwave-28";
    spec.grid = SweepGrid{0.0, 10.0, 2, false};
    spec.scenario_file = MMCOV_TEST_DATA_DIR "/negative_beta.scenario";
    CHECK_THROWS_AS(run_coverage_sweep(spec), ParameterError);

    // gamma_out < 1 passes the parameter checks but the analytic engine
    // refuses it; Monte Carlo still runs.
    SweepSpec weak;
    weak.grid = SweepGrid{0.0, 10.0, 2, false};
    weak.modes = parse_modes("analytic,mc_snr_only");
    weak.n_realizations = 500;
    weak.scenario_file = MMCOV_TEST_DATA_DIR "/weak_outage.scenario";
    const auto r = run_coverage_sweep(weak);
    REQUIRE(r.rows.size() == 2);
    for (std::size_t i = 0; i < 2; ++i)
    {
        CHECK(r.status[i] != "ok");
        CHECK(r.status[i].find("analytic") != std::string::npos);
        CHECK(std::isnan(r.rows[i][1]));
        CHECK(r.rows[i][3] >= 0.0);
    }
}
