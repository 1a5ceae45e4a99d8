#include "mmcov/sweep.hpp"

#include "mmcov/analytics.hpp"
#include "mmcov/montecarlo.hpp"
#include "mmcov/parallel.hpp"

#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <ostream>
#include <sstream>

namespace mmcov
{

namespace
{

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string
fmt(double v)
{
    if (std::isnan(v))
    {
        return "nan";
    }
    if (std::isinf(v))
    {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

const char*
variant_name(OutageVariant v)
{
    return v == OutageVariant::corrected ? "corrected" : "as_printed";
}

std::string
modes_string(const SweepModes& m)
{
    std::string s;
    const auto add = [&](bool on, const char* name) {
        if (on)
        {
            s += s.empty() ? "" : ",";
            s += name;
        }
    };
    add(m.analytic, "analytic");
    add(m.mc_snr_only, "mc_snr_only");
    add(m.mc_full_sinr, "mc_full_sinr");
    return s;
}

// Rows are preallocated; failures overwrite the status and leave NaNs.
struct RowTable
{
    std::vector<std::vector<double>> rows;
    std::vector<std::string> status;

    RowTable(const std::vector<double>& grid, std::size_t columns)
        : rows(grid.size(), std::vector<double>(columns, kNaN)), status(grid.size(), "ok")
    {
        for (std::size_t i = 0; i < grid.size(); ++i)
        {
            rows[i][0] = grid[i];
        }
    }

    void fail(std::size_t row, const char* mode, const std::exception& e)
    {
        std::string msg = std::string(mode) + ": " + e.what();
        status[row] = status[row] == "ok" ? msg : status[row] + "; " + msg;
    }
};

template <typename Fn>
void
guarded(RowTable& table, std::size_t row, const char* mode, Fn&& fn)
{
    try
    {
        fn();
    }
    catch (const std::exception& e)
    {
        table.fail(row, mode, e);
    }
}

std::vector<std::string>
provenance(const char* command, const SweepSpec& spec, const Scenario& scenario)
{
    std::vector<std::string> h;
    h.push_back(std::string("mmcov ") + kToolVersion + " " + command);
    h.push_back("scenario: " + scenario.name + " digest=" + scenario_digest(scenario) + " source=" +
                (spec.scenario_file.empty() ? "preset:" + spec.preset : "file:" + spec.scenario_file));
    h.push_back(std::string("outage_enabled=") + (scenario.outage_enabled ? "true" : "false") +
                " outage_variant=" + variant_name(spec.outage_variant));
    h.push_back(std::string("sweep: variable=") +
                (spec.variable == SweepVariable::threshold_db ? "threshold_db" : "cell_radius_m") +
                " min=" + fmt(spec.grid.min) + " max=" + fmt(spec.grid.max) +
                " points=" + std::to_string(spec.grid.count) + " spacing=" + (spec.grid.log_spacing ? "log" : "linear"));
    if (spec.variable == SweepVariable::threshold_db)
    {
        h.push_back("fixed: cell_radius_m=" + fmt(scenario.system.cell_radius()));
    }
    else
    {
        h.push_back("fixed: threshold_db=" + fmt(spec.threshold_db));
    }
    h.push_back("modes: " + modes_string(spec.modes));
    if (spec.modes.any_mc())
    {
        h.push_back("monte_carlo: n=" + std::to_string(spec.n_realizations) + " seed=" +
                    std::to_string(spec.base_seed) + " truncation_epsilon=" + fmt(spec.truncation_epsilon));
    }
    const AnalyticsOptions tol;
    h.push_back("tolerances: coverage_rel_tol=" + fmt(tol.coverage_rel_tol) + " rate_rel_tol=" + fmt(tol.rate_rel_tol));
    return h;
}

Scenario
with_radius(Scenario s, double radius)
{
    s.system.set_cell_radius(radius);
    return s;
}

std::string
csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
    {
        return s;
    }
    std::string out = "\"";
    for (const char c : s)
    {
        out += c == '"' ? "\"\"" : std::string(1, c == '\n' ? ' ' : c);
    }
    return out + "\"";
}

} // namespace

std::vector<double>
SweepGrid::values() const
{
    std::vector<double> v(count);
    for (std::size_t i = 0; i < count; ++i)
    {
        const double f = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
        v[i] = log_spacing ? std::exp(std::log(min) + f * (std::log(max) - std::log(min))) : min + f * (max - min);
    }
    if (count >= 2)
    {
        v.back() = max;
    }
    return v;
}

SweepModes
parse_modes(const std::string& text)
{
    SweepModes m{false, false, false};
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
    {
        if (item == "analytic")
        {
            m.analytic = true;
        }
        else if (item == "mc_snr_only")
        {
            m.mc_snr_only = true;
        }
        else if (item == "mc_full_sinr")
        {
            m.mc_full_sinr = true;
        }
        else
        {
            throw ParameterError("unknown mode '" + item + "' (expected analytic, mc_snr_only, mc_full_sinr)");
        }
    }
    if (!m.any())
    {
        throw ParameterError("no modes given");
    }
    return m;
}

void
check_sweep_spec(const SweepSpec& spec)
{
    if (spec.grid.count < 2)
    {
        throw ParameterError("grid needs at least 2 points");
    }
    if (!std::isfinite(spec.grid.min) || !std::isfinite(spec.grid.max) || !(spec.grid.min < spec.grid.max))
    {
        throw ParameterError("grid needs finite min < max");
    }
    if (spec.grid.log_spacing && !(spec.grid.min > 0))
    {
        throw ParameterError("log spacing needs min > 0");
    }
    if (spec.variable == SweepVariable::cell_radius_m && !(spec.grid.min > 0))
    {
        throw ParameterError("cell radius grid must be positive");
    }
    if (!spec.modes.any())
    {
        throw ParameterError("at least one mode must be enabled");
    }
    if (spec.modes.any_mc() && spec.n_realizations == 0)
    {
        throw ParameterError("n must be >= 1");
    }
    if (!(spec.truncation_epsilon > 0 && spec.truncation_epsilon < 1))
    {
        throw ParameterError("epsilon must lie in (0, 1)");
    }
    if (spec.cell_radius_m && !(*spec.cell_radius_m > 0))
    {
        throw ParameterError("cell radius must be > 0");
    }
}

Scenario
resolve_scenario(const SweepSpec& spec)
{
    Scenario s = spec.scenario_file.empty() ? load_preset(spec.preset, spec.outage_variant)
                                            : load_scenario_file(spec.scenario_file);
    if (spec.outage_enabled)
    {
        s.outage_enabled = *spec.outage_enabled;
    }
    if (spec.cell_radius_m)
    {
        s.system.set_cell_radius(*spec.cell_radius_m);
    }
    check_scenario(s);
    return s;
}

SweepResult
run_coverage_sweep(const SweepSpec& spec)
{
    check_sweep_spec(spec);
    const Scenario base = resolve_scenario(spec);
    const auto grid = spec.grid.values();
    const bool by_threshold = spec.variable == SweepVariable::threshold_db;

    SweepResult result;
    result.header = provenance("coverage-sweep", spec, base);
    result.columns.push_back(by_threshold ? "threshold_db" : "cell_radius_m");
    std::size_t col_analytic = 0, col_snr = 0, col_sinr = 0;
    const auto add_mode = [&](bool on, const char* name, std::size_t& col) {
        if (on)
        {
            col = result.columns.size();
            result.columns.push_back(std::string(name) + "_coverage");
            result.columns.push_back(std::string(name) + "_err");
        }
    };
    add_mode(spec.modes.analytic, "analytic", col_analytic);
    add_mode(spec.modes.mc_snr_only, "mc_snr_only", col_snr);
    add_mode(spec.modes.mc_full_sinr, "mc_full_sinr", col_sinr);

    RowTable table(grid, result.columns.size());
    const auto threshold_of = [&](std::size_t i) { return db_to_linear(by_threshold ? grid[i] : spec.threshold_db); };
    const auto scenario_of = [&](std::size_t i) { return by_threshold ? base : with_radius(base, grid[i]); };

    if (spec.modes.analytic)
    {
        std::optional<CoverageAnalyzer> shared;
        std::exception_ptr shared_error;
        if (by_threshold)
        {
            try
            {
                shared.emplace(base);
            }
            catch (const std::exception&)
            {
                shared_error = std::current_exception();
            }
        }
        parallel_for(grid.size(), spec.threads, [&](std::size_t i) {
            guarded(table, i, "analytic", [&] {
                if (shared_error)
                {
                    std::rethrow_exception(shared_error);
                }
                const auto r = shared ? shared->coverage_probability(threshold_of(i))
                                      : CoverageAnalyzer(scenario_of(i)).coverage_probability(threshold_of(i));
                table.rows[i][col_analytic] = r.total;
                table.rows[i][col_analytic + 1] = r.quadrature_error_estimate;
            });
        });
    }

    if (spec.modes.any_mc())
    {
        SimulationOptions opts;
        opts.truncation_epsilon = spec.truncation_epsilon;
        opts.threads = spec.threads;
        const auto fill = [&](std::size_t i, const std::vector<LinkOutcome>& outcomes) {
            if (spec.modes.mc_snr_only)
            {
                const auto e = coverage_from(outcomes, threshold_of(i), InterferenceMode::snr_only);
                table.rows[i][col_snr] = e.mean;
                table.rows[i][col_snr + 1] = e.half_width_95;
            }
            if (spec.modes.mc_full_sinr)
            {
                const auto e = coverage_from(outcomes, threshold_of(i), InterferenceMode::full_sinr);
                table.rows[i][col_sinr] = e.mean;
                table.rows[i][col_sinr + 1] = e.half_width_95;
            }
        };
        if (by_threshold)
        {
            try
            {
                const auto outcomes = simulate_outcomes(base, spec.n_realizations, spec.base_seed, opts);
                for (std::size_t i = 0; i < grid.size(); ++i)
                {
                    fill(i, outcomes);
                }
            }
            catch (const std::exception& e)
            {
                for (std::size_t i = 0; i < grid.size(); ++i)
                {
                    table.fail(i, "monte_carlo", e);
                }
            }
        }
        else
        {
            for (std::size_t i = 0; i < grid.size(); ++i)
            {
                guarded(table, i, "monte_carlo", [&] {
                    fill(i, simulate_outcomes(scenario_of(i), spec.n_realizations, spec.base_seed, opts));
                });
            }
        }
    }

    result.rows = std::move(table.rows);
    result.status = std::move(table.status);
    return result;
}

SweepResult
run_rate_sweep(const SweepSpec& spec)
{
    check_sweep_spec(spec);
    if (spec.variable != SweepVariable::cell_radius_m)
    {
        throw ParameterError("rate sweeps run over the cell radius");
    }
    const Scenario base = resolve_scenario(spec);
    std::optional<Scenario> compare;
    if (!spec.compare_preset.empty())
    {
        compare = load_preset(spec.compare_preset, spec.outage_variant);
    }
    const auto grid = spec.grid.values();
    const double bw = base.system.bandwidth_hz;

    SweepResult result;
    result.header = provenance("rate-sweep", spec, base);
    if (compare)
    {
        result.header.push_back("compare: " + compare->name + " digest=" + scenario_digest(*compare));
    }
    result.columns.push_back("cell_radius_m");
    std::size_t col_analytic = 0, col_snr = 0, col_sinr = 0, col_cmp = 0;
    const auto add_mode = [&](bool on, const char* name, std::size_t& col) {
        if (on)
        {
            col = result.columns.size();
            result.columns.push_back(std::string(name) + "_rate");
            result.columns.push_back(std::string(name) + "_err");
            result.columns.push_back(std::string(name) + "_rate_over_bw");
        }
    };
    add_mode(spec.modes.analytic, "analytic", col_analytic);
    add_mode(spec.modes.mc_snr_only, "mc_snr_only", col_snr);
    add_mode(spec.modes.mc_full_sinr, "mc_full_sinr", col_sinr);
    if (compare)
    {
        col_cmp = result.columns.size();
        result.columns.push_back("compare_analytic_rate");
        result.columns.push_back("compare_analytic_err");
        if (spec.modes.analytic)
        {
            result.columns.push_back("analytic_ratio");
            result.columns.push_back("analytic_ratio_err");
        }
    }

    RowTable table(grid, result.columns.size());

    const bool analytic_work = spec.modes.analytic || compare.has_value();
    if (analytic_work)
    {
        parallel_for(grid.size(), spec.threads, [&](std::size_t i) {
            if (spec.modes.analytic)
            {
                guarded(table, i, "analytic", [&] {
                    const auto r = CoverageAnalyzer(with_radius(base, grid[i])).average_rate();
                    table.rows[i][col_analytic] = r.rate_bps;
                    table.rows[i][col_analytic + 1] = r.error;
                    table.rows[i][col_analytic + 2] = r.rate_bps / bw;
                });
            }
            if (compare)
            {
                guarded(table, i, "compare", [&] {
                    const auto r = CoverageAnalyzer(with_radius(*compare, grid[i])).average_rate();
                    auto& row = table.rows[i];
                    row[col_cmp] = r.rate_bps;
                    row[col_cmp + 1] = r.error;
                    if (spec.modes.analytic && !std::isnan(row[col_analytic]))
                    {
                        const double ratio = row[col_analytic] / r.rate_bps;
                        row[col_cmp + 2] = ratio;
                        row[col_cmp + 3] = ratio * (row[col_analytic + 1] / row[col_analytic] + r.error / r.rate_bps);
                    }
                });
            }
        });
    }

    if (spec.modes.any_mc())
    {
        SimulationOptions opts;
        opts.truncation_epsilon = spec.truncation_epsilon;
        opts.threads = spec.threads;
        for (std::size_t i = 0; i < grid.size(); ++i)
        {
            guarded(table, i, "monte_carlo", [&] {
                const auto outcomes = simulate_outcomes(with_radius(base, grid[i]), spec.n_realizations,
                                                        spec.base_seed, opts);
                const auto put = [&](std::size_t col, InterferenceMode mode) {
                    const auto e = rate_from(outcomes, bw, mode);
                    table.rows[i][col] = e.mean;
                    table.rows[i][col + 1] = e.half_width_95;
                    table.rows[i][col + 2] = e.mean / bw;
                };
                if (spec.modes.mc_snr_only)
                {
                    put(col_snr, InterferenceMode::snr_only);
                }
                if (spec.modes.mc_full_sinr)
                {
                    put(col_sinr, InterferenceMode::full_sinr);
                }
            });
        }
    }

    result.rows = std::move(table.rows);
    result.status = std::move(table.status);
    return result;
}

void
write_csv(std::ostream& out, const SweepResult& result)
{
    for (const auto& line : result.header)
    {
        out << "# " << line << '\n';
    }
    for (const auto& c : result.columns)
    {
        out << c << ',';
    }
    out << "status\n";
    for (std::size_t i = 0; i < result.rows.size(); ++i)
    {
        for (const double v : result.rows[i])
        {
            out << fmt(v) << ',';
        }
        out << csv_field(result.status[i]) << '\n';
    }
}

std::string
to_csv(const SweepResult& result)
{
    std::ostringstream out;
    write_csv(out, result);
    return out.str();
}

} // namespace mmcov
