#include "mmcov/params.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace mmcov
{

namespace
{

constexpr double kPi = std::numbers::pi;

double
deg_to_rad(double deg)
{
    return deg * kPi / 180.0;
}

void
require(bool condition, const std::string& message)
{
    if (!condition)
    {
        throw ParameterError(message);
    }
}

std::string_view
trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
    {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::string
format_double(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

double
BlockageParams::crossover_radius() const
{
    return std::log(gamma_out) / delta_out;
}

double
SystemParams::cell_radius() const
{
    return cell_radius_from_density(density);
}

void
SystemParams::set_cell_radius(double radius_m)
{
    density = density_from_cell_radius(radius_m);
}

double
db_to_linear(double db)
{
    return std::pow(10.0, db / 10.0);
}

double
linear_to_db(double linear)
{
    return 10.0 * std::log10(linear);
}

double
dbm_to_mw(double dbm)
{
    return db_to_linear(dbm);
}

double
kappa_from_alpha(double alpha_db, double beta)
{
    require(beta > 0.0, "path-loss exponent beta must be positive");
    return std::pow(10.0, alpha_db / (10.0 * beta));
}

double
alpha_from_kappa(double kappa, double beta)
{
    require(kappa > 0.0, "path-loss base kappa must be positive");
    return 10.0 * beta * std::log10(kappa);
}

double
noise_power_dbm(double bandwidth_hz, double noise_figure_db)
{
    require(bandwidth_hz > 0.0, "bandwidth must be positive");
    return -174.0 + 10.0 * std::log10(bandwidth_hz) + noise_figure_db;
}

double
density_from_cell_radius(double radius_m)
{
    require(radius_m > 0.0, "cell radius must be positive");
    return 1.0 / (kPi * radius_m * radius_m);
}

double
cell_radius_from_density(double density)
{
    require(density > 0.0, "density must be positive");
    return std::sqrt(1.0 / (kPi * density));
}

std::vector<std::string>
preset_names()
{
    return {std::string(kPresetMmWave28), std::string(kPresetMmWave73), std::string(kPresetUWave25)};
}

Scenario
load_preset(std::string_view name, OutageVariant variant)
{
    Scenario s;
    s.name = std::string(name);

    const bool mmwave = name == kPresetMmWave28 || name == kPresetMmWave73;
    if (!mmwave && name != kPresetUWave25)
    {
        throw ParameterError("unknown preset '" + std::string(name) + "'");
    }

    s.system.tx_power_dbm = 30.0;
    s.system.noise_figure_db = 10.0;
    s.system.set_cell_radius(100.0);
    s.bs_antenna = AntennaPattern{20.0, -10.0, deg_to_rad(30.0)};

    if (mmwave)
    {
        const bool f28 = name == kPresetMmWave28;
        const double alpha_los = f28 ? 61.4 : 69.8;
        const double alpha_nlos = f28 ? 72.0 : 82.7;
        s.pathloss.beta_los = 2.0;
        s.pathloss.beta_nlos = f28 ? 2.92 : 2.69;
        s.pathloss.kappa_los = kappa_from_alpha(alpha_los, s.pathloss.beta_los);
        s.pathloss.kappa_nlos = kappa_from_alpha(alpha_nlos, s.pathloss.beta_nlos);
        s.alpha_los_db = alpha_los;
        s.alpha_nlos_db = alpha_nlos;

        s.shadowing = ShadowingParams{0.0, 5.8, 0.0, 8.7};

        s.blockage.delta_los = 1.0 / 67.1;
        s.blockage.gamma_los = 1.0;
        if (variant == OutageVariant::corrected)
        {
            s.blockage.delta_out = 1.0 / 30.0;
            s.blockage.gamma_out = std::exp(5.2);
        }
        else
        {
            s.blockage.delta_out = 5.2;
            s.blockage.gamma_out = std::exp(1.0 / 30.0);
        }
        s.outage_enabled = true;

        s.mt_antenna = AntennaPattern{20.0, -10.0, deg_to_rad(30.0)};
        s.system.bandwidth_hz = 2e9;
    }
    else
    {
        // Single-state NLOS channel: l(r)dB = 22.7 + 36.7 log10(r) + 26 log10(2.5).
        const double alpha = 22.7 + 26.0 * std::log10(2.5);
        const double beta = 3.67;
        s.pathloss = PathLossParams{kappa_from_alpha(alpha, beta), beta,
                                    kappa_from_alpha(alpha, beta), beta};
        s.alpha_los_db = alpha;
        s.alpha_nlos_db = alpha;

        s.shadowing = ShadowingParams{0.0, 4.0, 0.0, 4.0};

        s.blockage = BlockageParams{0.0, 0.0, 0.0, 1.0};
        s.outage_enabled = false;

        s.mt_antenna = AntennaPattern{0.0, 0.0, 2.0 * kPi};
        s.system.bandwidth_hz = 40e6;
    }

    check_scenario(s);
    return s;
}

std::vector<std::string>
check_scenario(const Scenario& s)
{
    std::vector<std::string> warnings;

    const auto& b = s.blockage;
    require(b.delta_los >= 0.0, "delta_los must be >= 0");
    require(b.gamma_los >= 0.0 && b.gamma_los <= 1.0, "gamma_los must lie in [0, 1]");
    require(b.delta_out >= 0.0, "delta_out must be >= 0");
    require(b.gamma_out > 0.0, "gamma_out must be > 0");
    if (s.outage_enabled && b.gamma_out < 1.0)
    {
        warnings.emplace_back("gamma_out < 1: links are in outage with positive probability at r = 0");
    }

    const auto& pl = s.pathloss;
    require(pl.kappa_los > 0.0 && std::isfinite(pl.kappa_los), "kappa_los must be positive and finite");
    require(pl.kappa_nlos > 0.0 && std::isfinite(pl.kappa_nlos), "kappa_nlos must be positive and finite");
    require(pl.beta_los > 0.0 && std::isfinite(pl.beta_los), "beta_los must be positive and finite");
    require(pl.beta_nlos > 0.0 && std::isfinite(pl.beta_nlos), "beta_nlos must be positive and finite");

    const auto& sh = s.shadowing;
    require(sh.sigma_los_db > 0.0, "sigma_los_db must be > 0");
    require(sh.sigma_nlos_db > 0.0, "sigma_nlos_db must be > 0");
    require(std::isfinite(sh.mu_los_db) && std::isfinite(sh.mu_nlos_db), "shadowing means must be finite");

    for (const auto* a : {&s.bs_antenna, &s.mt_antenna})
    {
        require(a->omega > 0.0 && a->omega <= 2.0 * kPi, "antenna beamwidth must lie in (0, 2 pi]");
        require(a->g_max_db >= a->g_min_db, "antenna g_max_db must be >= g_min_db");
    }

    require(s.system.density > 0.0 && std::isfinite(s.system.density), "density must be positive");
    require(s.system.bandwidth_hz > 0.0, "bandwidth must be positive");
    require(std::isfinite(s.system.tx_power_dbm) && std::isfinite(s.system.noise_figure_db),
            "power and noise figure must be finite");
    require(s.min_distance_m >= 0.0, "min_distance_m must be >= 0");

    return warnings;
}

double
pathloss_alpha_mismatch_db(const Scenario& s)
{
    double worst = 0.0;
    if (s.alpha_los_db)
    {
        worst = std::max(worst, std::abs(*s.alpha_los_db -
                                          alpha_from_kappa(s.pathloss.kappa_los, s.pathloss.beta_los)));
    }
    if (s.alpha_nlos_db)
    {
        worst = std::max(worst, std::abs(*s.alpha_nlos_db -
                                          alpha_from_kappa(s.pathloss.kappa_nlos, s.pathloss.beta_nlos)));
    }
    return worst;
}

// Scenario file format -------------------------------------------------------

namespace
{

using Setter = std::function<void(Scenario&, std::string_view)>;

double
parse_number(std::string_view key, std::string_view value)
{
    double out = 0.0;
    const auto* end = value.data() + value.size();
    auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc() || ptr != end)
    {
        throw ParameterError("invalid number for '" + std::string(key) + "': '" + std::string(value) + "'");
    }
    return out;
}

bool
parse_bool(std::string_view key, std::string_view value)
{
    if (value == "true" || value == "1")
    {
        return true;
    }
    if (value == "false" || value == "0")
    {
        return false;
    }
    throw ParameterError("invalid boolean for '" + std::string(key) + "': '" + std::string(value) + "'");
}

template <typename Field>
Setter
number(Field field)
{
    return [field](Scenario& s, std::string_view v) { field(s) = parse_number("", v); };
}

const std::map<std::string, Setter, std::less<>>&
setters()
{
    static const std::map<std::string, Setter, std::less<>> table = {
        {"name", [](Scenario& s, std::string_view v) { s.name = std::string(v); }},
        {"outage_enabled", [](Scenario& s, std::string_view v) { s.outage_enabled = parse_bool("outage_enabled", v); }},
        {"delta_los_per_m", number([](Scenario& s) -> double& { return s.blockage.delta_los; })},
        {"gamma_los", number([](Scenario& s) -> double& { return s.blockage.gamma_los; })},
        {"delta_out_per_m", number([](Scenario& s) -> double& { return s.blockage.delta_out; })},
        {"gamma_out", number([](Scenario& s) -> double& { return s.blockage.gamma_out; })},
        {"kappa_los", number([](Scenario& s) -> double& { return s.pathloss.kappa_los; })},
        {"beta_los", number([](Scenario& s) -> double& { return s.pathloss.beta_los; })},
        {"kappa_nlos", number([](Scenario& s) -> double& { return s.pathloss.kappa_nlos; })},
        {"beta_nlos", number([](Scenario& s) -> double& { return s.pathloss.beta_nlos; })},
        {"alpha_los_db", [](Scenario& s, std::string_view v) { s.alpha_los_db = parse_number("alpha_los_db", v); }},
        {"alpha_nlos_db", [](Scenario& s, std::string_view v) { s.alpha_nlos_db = parse_number("alpha_nlos_db", v); }},
        {"mu_los_db", number([](Scenario& s) -> double& { return s.shadowing.mu_los_db; })},
        {"sigma_los_db", number([](Scenario& s) -> double& { return s.shadowing.sigma_los_db; })},
        {"mu_nlos_db", number([](Scenario& s) -> double& { return s.shadowing.mu_nlos_db; })},
        {"sigma_nlos_db", number([](Scenario& s) -> double& { return s.shadowing.sigma_nlos_db; })},
        {"bs_gain_max_db", number([](Scenario& s) -> double& { return s.bs_antenna.g_max_db; })},
        {"bs_gain_min_db", number([](Scenario& s) -> double& { return s.bs_antenna.g_min_db; })},
        {"bs_beamwidth_rad", number([](Scenario& s) -> double& { return s.bs_antenna.omega; })},
        {"bs_beamwidth_deg", [](Scenario& s, std::string_view v) { s.bs_antenna.omega = deg_to_rad(parse_number("bs_beamwidth_deg", v)); }},
        {"mt_gain_max_db", number([](Scenario& s) -> double& { return s.mt_antenna.g_max_db; })},
        {"mt_gain_min_db", number([](Scenario& s) -> double& { return s.mt_antenna.g_min_db; })},
        {"mt_beamwidth_rad", number([](Scenario& s) -> double& { return s.mt_antenna.omega; })},
        {"mt_beamwidth_deg", [](Scenario& s, std::string_view v) { s.mt_antenna.omega = deg_to_rad(parse_number("mt_beamwidth_deg", v)); }},
        {"tx_power_dbm", number([](Scenario& s) -> double& { return s.system.tx_power_dbm; })},
        {"bandwidth_hz", number([](Scenario& s) -> double& { return s.system.bandwidth_hz; })},
        {"noise_figure_db", number([](Scenario& s) -> double& { return s.system.noise_figure_db; })},
        {"density_per_m2", number([](Scenario& s) -> double& { return s.system.density; })},
        {"cell_radius_m", [](Scenario& s, std::string_view v) { s.system.set_cell_radius(parse_number("cell_radius_m", v)); }},
        {"min_distance_m", number([](Scenario& s) -> double& { return s.min_distance_m; })},
    };
    return table;
}

// Each group must be set exactly once; the alternatives inside a group are
// different units for the same field.
const std::vector<std::vector<std::string>>&
required_groups()
{
    static const std::vector<std::vector<std::string>> groups = {
        {"outage_enabled"},
        {"delta_los_per_m"}, {"gamma_los"}, {"delta_out_per_m"}, {"gamma_out"},
        {"kappa_los"}, {"beta_los"}, {"kappa_nlos"}, {"beta_nlos"},
        {"mu_los_db"}, {"sigma_los_db"}, {"mu_nlos_db"}, {"sigma_nlos_db"},
        {"bs_gain_max_db"}, {"bs_gain_min_db"}, {"bs_beamwidth_rad", "bs_beamwidth_deg"},
        {"mt_gain_max_db"}, {"mt_gain_min_db"}, {"mt_beamwidth_rad", "mt_beamwidth_deg"},
        {"tx_power_dbm"}, {"bandwidth_hz"}, {"noise_figure_db"},
        {"density_per_m2", "cell_radius_m"},
    };
    return groups;
}

} // namespace

Scenario
parse_scenario(std::string_view text)
{
    Scenario s;
    s.name = "custom";
    std::set<std::string, std::less<>> seen;

    std::size_t line_no = 0;
    while (!text.empty())
    {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;

        if (const auto hash = line.find('#'); hash != std::string_view::npos)
        {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty())
        {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
        {
            throw ParameterError("line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));

        const auto it = setters().find(key);
        if (it == setters().end())
        {
            throw ParameterError("line " + std::to_string(line_no) + ": unknown key '" + std::string(key) + "'");
        }
        if (!seen.emplace(key).second)
        {
            throw ParameterError("line " + std::to_string(line_no) + ": duplicate key '" + std::string(key) + "'");
        }
        try
        {
            it->second(s, value);
        }
        catch (const ParameterError& e)
        {
            throw ParameterError("line " + std::to_string(line_no) + " (" + std::string(key) + "): " + e.what());
        }
    }

    for (const auto& group : required_groups())
    {
        int count = 0;
        for (const auto& key : group)
        {
            count += seen.contains(key) ? 1 : 0;
        }
        if (count == 0)
        {
            throw ParameterError("missing key '" + group.front() + "'");
        }
        if (count > 1)
        {
            throw ParameterError("conflicting keys for '" + group.front() + "'");
        }
    }

    check_scenario(s);
    return s;
}

Scenario
load_scenario_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
    {
        throw ParameterError("cannot open scenario file '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

std::string
serialize_scenario(const Scenario& s)
{
    std::ostringstream out;
    const auto kv = [&out](std::string_view key, const std::string& value) {
        out << key << " = " << value << '\n';
    };
    const auto num = [&kv](std::string_view key, double v) { kv(key, format_double(v)); };

    kv("name", s.name);
    kv("outage_enabled", s.outage_enabled ? "true" : "false");
    num("delta_los_per_m", s.blockage.delta_los);
    num("gamma_los", s.blockage.gamma_los);
    num("delta_out_per_m", s.blockage.delta_out);
    num("gamma_out", s.blockage.gamma_out);
    num("kappa_los", s.pathloss.kappa_los);
    num("beta_los", s.pathloss.beta_los);
    num("kappa_nlos", s.pathloss.kappa_nlos);
    num("beta_nlos", s.pathloss.beta_nlos);
    if (s.alpha_los_db)
    {
        num("alpha_los_db", *s.alpha_los_db);
    }
    if (s.alpha_nlos_db)
    {
        num("alpha_nlos_db", *s.alpha_nlos_db);
    }
    num("mu_los_db", s.shadowing.mu_los_db);
    num("sigma_los_db", s.shadowing.sigma_los_db);
    num("mu_nlos_db", s.shadowing.mu_nlos_db);
    num("sigma_nlos_db", s.shadowing.sigma_nlos_db);
    num("bs_gain_max_db", s.bs_antenna.g_max_db);
    num("bs_gain_min_db", s.bs_antenna.g_min_db);
    num("bs_beamwidth_rad", s.bs_antenna.omega);
    num("mt_gain_max_db", s.mt_antenna.g_max_db);
    num("mt_gain_min_db", s.mt_antenna.g_min_db);
    num("mt_beamwidth_rad", s.mt_antenna.omega);
    num("tx_power_dbm", s.system.tx_power_dbm);
    num("bandwidth_hz", s.system.bandwidth_hz);
    num("noise_figure_db", s.system.noise_figure_db);
    num("density_per_m2", s.system.density);
    num("min_distance_m", s.min_distance_m);
    return out.str();
}

std::string
scenario_digest(const Scenario& s)
{
    std::uint64_t h = 1469598103934665603ULL;
    for (const unsigned char c : serialize_scenario(s))
    {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace mmcov
