// mmcov: coverage/rate sweeps and model self-checks from the command line.

#include "mmcov/sweep.hpp"
#include "mmcov/validation.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>

namespace
{

constexpr int kExitInvariant = 1;
constexpr int kExitUsage = 2;

struct SourceFlags
{
    std::string preset{"mmwave-28"};
    std::string scenario_file;
    mmcov::OutageVariant variant{mmcov::OutageVariant::corrected};
    bool outage_on{false};
    bool outage_off{false};
};

struct SweepFlags
{
    std::string sweep{"threshold"};
    std::optional<double> min, max;
    std::optional<std::size_t> points;
    bool log{false};
    std::string modes{"analytic"};
    std::size_t n{100000};
    std::uint64_t seed{1};
    std::string out;
    std::optional<double> cell_radius;
    double threshold_db{0.0};
    double epsilon{1e-6};
    unsigned threads{0};
    std::string compare_preset;
};

void
add_source_flags(CLI::App* cmd, SourceFlags& f)
{
    auto* preset = cmd->add_option("--preset", f.preset, "Built-in parameter set")
                       ->check(CLI::IsMember(mmcov::preset_names()))
                       ->capture_default_str();
    cmd->add_option("--scenario-file", f.scenario_file, "key = value scenario file")
        ->check(CLI::ExistingFile)
        ->excludes(preset);
    const std::map<std::string, mmcov::OutageVariant> variants{{"corrected", mmcov::OutageVariant::corrected},
                                                               {"as-printed", mmcov::OutageVariant::as_printed}};
    cmd->add_option("--outage-variant", f.variant, "Outage parameter pair of the mmWave presets")
        ->transform(CLI::CheckedTransformer(variants, CLI::ignore_case))
        ->capture_default_str();
    auto* on = cmd->add_flag("--outage", f.outage_on, "Force the outage state on");
    cmd->add_flag("--no-outage", f.outage_off, "Force the outage state off")->excludes(on);
}

mmcov::SweepSpec
make_spec(const SourceFlags& src, const SweepFlags& f)
{
    mmcov::SweepSpec spec;
    spec.preset = src.preset;
    spec.scenario_file = src.scenario_file;
    spec.outage_variant = src.variant;
    if (src.outage_on || src.outage_off)
    {
        spec.outage_enabled = src.outage_on;
    }
    const bool radius = f.sweep == "radius";
    spec.variable = radius ? mmcov::SweepVariable::cell_radius_m : mmcov::SweepVariable::threshold_db;
    spec.grid.min = f.min.value_or(radius ? 50.0 : -20.0);
    spec.grid.max = f.max.value_or(radius ? 200.0 : 40.0);
    spec.grid.count = f.points.value_or(radius ? 4 : 13);
    spec.grid.log_spacing = f.log;
    spec.modes = mmcov::parse_modes(f.modes);
    spec.n_realizations = f.n;
    spec.base_seed = f.seed;
    spec.cell_radius_m = f.cell_radius;
    spec.threshold_db = f.threshold_db;
    spec.truncation_epsilon = f.epsilon;
    spec.threads = f.threads;
    spec.compare_preset = f.compare_preset;
    mmcov::check_sweep_spec(spec);
    return spec;
}

void
add_sweep_flags(CLI::App* cmd, SweepFlags& f, bool rate)
{
    if (rate)
    {
        f.sweep = "radius";
        cmd->add_option("--sweep", f.sweep, "Sweep variable")->check(CLI::IsMember({"radius"}))->capture_default_str();
        cmd->add_option("--compare-preset", f.compare_preset, "Preset for the analytic rate ratio column")
            ->check(CLI::IsMember(mmcov::preset_names()));
    }
    else
    {
        cmd->add_option("--sweep", f.sweep, "Sweep variable")
            ->check(CLI::IsMember({"threshold", "radius"}))
            ->capture_default_str();
        cmd->add_option("--cell-radius", f.cell_radius, "Cell radius for threshold sweeps, m");
    }
    cmd->add_option("--min", f.min, "Grid start (dB for thresholds, m for radii)");
    cmd->add_option("--max", f.max, "Grid end");
    cmd->add_option("--points", f.points, "Grid size")->check(CLI::Range(std::size_t{2}, std::size_t{100000}));
    cmd->add_flag("--log", f.log, "Logarithmic grid spacing");
    cmd->add_option("--modes", f.modes, "Comma list of analytic, mc_snr_only, mc_full_sinr")->capture_default_str();
    cmd->add_option("--n", f.n, "Monte Carlo realizations")->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--seed", f.seed, "Base seed")->capture_default_str();
    cmd->add_option("--threshold-db", f.threshold_db, "Threshold for radius sweeps, dB")->capture_default_str();
    cmd->add_option("--epsilon", f.epsilon, "Monte Carlo truncation probability")
        ->check(CLI::Range(1e-300, 1.0))
        ->capture_default_str();
    cmd->add_option("--threads", f.threads, "Worker threads, 0 = all cores")->capture_default_str();
    cmd->add_option("--out", f.out, "CSV output path (stdout when omitted)");
}

int
emit(const mmcov::SweepResult& result, const std::string& path)
{
    std::size_t failed = 0;
    for (const auto& s : result.status)
    {
        failed += s != "ok";
    }
    if (failed > 0)
    {
        std::fprintf(stderr, "mmcov: %zu row(s) failed; see the status column\n", failed);
    }
    // The CSV is written either way; failed rows still make the run fail.
    const int status = failed > 0 ? kExitInvariant : 0;
    if (path.empty())
    {
        mmcov::write_csv(std::cout, result);
        return std::cout ? status : kExitInvariant;
    }
    std::ofstream out(path, std::ios::binary);
    mmcov::write_csv(out, result);
    out.close();
    if (!out)
    {
        std::fprintf(stderr, "mmcov: cannot write %s\n", path.c_str());
        return kExitInvariant;
    }
    return status;
}

int
run_validate(const SourceFlags& src)
{
    mmcov::Scenario scenario;
    try
    {
        scenario = src.scenario_file.empty() ? mmcov::load_preset(src.preset, src.variant)
                                             : mmcov::load_scenario_file(src.scenario_file);
    }
    catch (const std::exception& e)
    {
        std::printf("FAIL scenario_invariants: %s\n", e.what());
        return kExitInvariant;
    }
    if (src.outage_on || src.outage_off)
    {
        scenario.outage_enabled = src.outage_on;
    }

    std::printf("scenario %s digest=%s outage=%s\n", scenario.name.c_str(), mmcov::scenario_digest(scenario).c_str(),
                scenario.outage_enabled ? "on" : "off");
    const auto report = mmcov::validate_scenario(scenario);
    for (const auto& c : report.checks)
    {
        if (!c.applicable)
        {
            std::printf("SKIP %-28s %s\n", c.name.c_str(), c.detail.c_str());
            continue;
        }
        std::printf("%s %-28s worst=%.3e bound=%.1e %s\n", c.passed ? "PASS" : "FAIL", c.name.c_str(), c.worst,
                    c.threshold, c.detail.c_str());
    }
    std::printf("%s\n", report.passed() ? "all checks passed" : "validation FAILED");
    return report.passed() ? 0 : kExitInvariant;
}

} // namespace

int
main(int argc, char** argv)
{
    CLI::App app{"Coverage and rate of mmWave cellular networks: analytic curves and Monte Carlo"};
    app.set_version_flag("--version", mmcov::kToolVersion);
    app.require_subcommand(1);

    SourceFlags cov_src, rate_src, val_src;
    SweepFlags cov_flags, rate_flags;

    auto* cov = app.add_subcommand("coverage-sweep", "Coverage probability over a threshold or radius grid");
    add_source_flags(cov, cov_src);
    add_sweep_flags(cov, cov_flags, false);

    auto* rate = app.add_subcommand("rate-sweep", "Average rate over a cell radius grid");
    add_source_flags(rate, rate_src);
    add_sweep_flags(rate, rate_flags, true);

    auto* val = app.add_subcommand("validate", "Run the fast invariant suite on a scenario");
    add_source_flags(val, val_src);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    if (val->parsed())
    {
        return run_validate(val_src);
    }

    const bool is_rate = rate->parsed();
    mmcov::SweepSpec spec;
    try
    {
        spec = is_rate ? make_spec(rate_src, rate_flags) : make_spec(cov_src, cov_flags);
    }
    catch (const std::exception& e)
    {
        std::fprintf(stderr, "mmcov: %s\n", e.what());
        return kExitUsage;
    }

    try
    {
        const auto result = is_rate ? mmcov::run_rate_sweep(spec) : mmcov::run_coverage_sweep(spec);
        return emit(result, is_rate ? rate_flags.out : cov_flags.out);
    }
    catch (const std::exception& e)
    {
        std::fprintf(stderr, "mmcov: %s\n", e.what());
        return kExitInvariant;
    }
}
