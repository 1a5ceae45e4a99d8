#include "mmcov/montecarlo.hpp"

#include "mmcov/parallel.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace mmcov
{

namespace
{

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kBlock = 512;

EmpiricalEstimate
mean_estimate(std::span<const LinkOutcome> outcomes, auto value_of)
{
    // Neumaier summation in index order: independent of how the outcomes
    // were produced.
    double sum = 0.0;
    double comp = 0.0;
    double sum_sq = 0.0;
    for (const auto& o : outcomes)
    {
        const double v = value_of(o);
        const double t = sum + v;
        comp += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
        sum = t;
        sum_sq += v * v;
    }
    EmpiricalEstimate e;
    e.n_realizations = outcomes.size();
    if (outcomes.empty())
    {
        return e;
    }
    const double n = static_cast<double>(outcomes.size());
    e.mean = (sum + comp) / n;
    const double var = outcomes.size() > 1 ? std::max(0.0, (sum_sq - n * e.mean * e.mean) / (n - 1)) : 0.0;
    e.half_width_95 = 1.959963984540054 * std::sqrt(var / n);
    return e;
}

} // namespace

Rng
realization_stream(std::uint64_t base_seed, std::uint64_t index)
{
    std::seed_seq seq{static_cast<std::uint32_t>(base_seed), static_cast<std::uint32_t>(base_seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    return Rng(seq);
}

double
truncation_radius(const Scenario& scenario, double epsilon)
{
    if (!(epsilon > 0.0 && epsilon < 1.0))
    {
        throw DomainError("truncation_radius: epsilon must lie in (0, 1)");
    }
    const auto& b = scenario.blockage;
    if (scenario.outage_enabled)
    {
        if (!(b.delta_out > 0.0))
        {
            throw ParameterError("outage model requires delta_out > 0");
        }
        return std::max(0.0, (std::log(b.gamma_out) - std::log(epsilon)) / b.delta_out);
    }

    const auto budget = make_link_budget(scenario);
    const double mean_los = std::exp(budget.los.mu + 0.5 * budget.los.sigma * budget.los.sigma);
    const double mean_nlos = std::exp(budget.nlos.mu + 0.5 * budget.nlos.sigma * budget.nlos.sigma);
    const double target = epsilon * budget.noise_power_mw;
    const auto mean_power = [&](double r) {
        const auto p = link_state_probs(r, scenario);
        return budget.tx_power_mw * (p.p_los * mean_los / path_loss(r, LinkState::los, scenario.pathloss) +
                                     p.p_nlos * mean_nlos / path_loss(r, LinkState::nlos, scenario.pathloss));
    };

    double hi = 1.0;
    while (mean_power(hi) > target && hi < 1e9)
    {
        hi *= 2.0;
    }
    double lo = hi / 2.0;
    for (int i = 0; i < 60; ++i)
    {
        const double mid = 0.5 * (lo + hi);
        (mean_power(mid) > target ? lo : hi) = mid;
    }
    return std::max(20.0 * scenario.system.cell_radius(), hi);
}

NetworkSimulator::NetworkSimulator(const Scenario& scenario)
    : scenario_(scenario), budget_(make_link_budget(scenario))
{
    check_scenario(scenario_);
}

NetworkRealization
NetworkSimulator::sample_realization(Rng& rng, double radius) const
{
    if (!(radius > 0.0))
    {
        throw DomainError("sample_realization: truncation radius must be > 0");
    }
    NetworkRealization real;
    real.truncation_radius = radius;

    const double r_min = scenario_.min_distance_m;
    const double mean = scenario_.system.density * std::numbers::pi * radius * radius;
    if (mean <= 0.0 || radius <= r_min)
    {
        return real;
    }
    const auto count = std::poisson_distribution<std::size_t>(mean)(rng);
    real.stations.reserve(count);

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double best = kInf;
    for (std::size_t k = 0; k < count; ++k)
    {
        BaseStationSample bs;
        do
        {
            bs.distance = radius * std::sqrt(unit(rng));
        } while (bs.distance < r_min);

        const auto p = link_state_probs(bs.distance, scenario_);
        const double u = unit(rng);
        bs.state = u < p.p_los ? LinkState::los : (u < p.p_los + p.p_nlos ? LinkState::nlos : LinkState::out);
        bs.path_loss = path_loss(bs.distance, bs.state, scenario_.pathloss);
        if (bs.state != LinkState::out)
        {
            const auto& sh = bs.state == LinkState::los ? budget_.los : budget_.nlos;
            bs.shadowing = sample_shadowing(rng, sh.mu, sh.sigma);
            bs.gain = budget_.interferer_gain.sample(rng);
            if (bs.path_loss < best)
            {
                best = bs.path_loss;
                real.serving = real.stations.size();
            }
        }
        real.stations.push_back(bs);
    }
    if (real.serving)
    {
        real.stations[*real.serving].gain = budget_.intended_gain;
    }
    return real;
}

std::optional<double>
NetworkSimulator::sinr(const NetworkRealization& real, InterferenceMode mode) const
{
    if (!real.serving)
    {
        return std::nullopt;
    }
    const auto& serving = real.stations[*real.serving];
    const double signal = budget_.tx_power_mw * serving.gain * serving.shadowing / serving.path_loss;
    double interference = 0.0;
    if (mode == InterferenceMode::full_sinr)
    {
        for (std::size_t i = 0; i < real.stations.size(); ++i)
        {
            const auto& bs = real.stations[i];
            if (i == *real.serving || bs.state == LinkState::out)
            {
                continue;
            }
            interference += budget_.tx_power_mw * bs.gain * bs.shadowing / bs.path_loss;
        }
    }
    return signal / (budget_.noise_power_mw + interference);
}

LinkOutcome
NetworkSimulator::outcome(const NetworkRealization& real) const
{
    LinkOutcome o;
    if (!real.serving)
    {
        o.serving_path_loss = kInf;
        return o;
    }
    o.outage = false;
    o.serving_path_loss = real.stations[*real.serving].path_loss;
    o.snr = *sinr(real, InterferenceMode::snr_only);
    o.sinr = *sinr(real, InterferenceMode::full_sinr);
    return o;
}

std::vector<LinkOutcome>
simulate_outcomes(const Scenario& scenario, std::size_t n, std::uint64_t base_seed, const SimulationOptions& options)
{
    const NetworkSimulator sim(scenario);
    const double radius = options.truncation_radius ? *options.truncation_radius
                                                    : truncation_radius(scenario, options.truncation_epsilon);
    std::vector<LinkOutcome> outcomes(n);
    const std::size_t blocks = (n + kBlock - 1) / kBlock;
    parallel_for(blocks, options.threads, [&](std::size_t block) {
        const std::size_t end = std::min(n, (block + 1) * kBlock);
        for (std::size_t i = block * kBlock; i < end; ++i)
        {
            auto rng = realization_stream(base_seed, i);
            outcomes[i] = sim.outcome(sim.sample_realization(rng, radius));
        }
    });
    return outcomes;
}

EmpiricalEstimate
coverage_from(std::span<const LinkOutcome> outcomes, double t, InterferenceMode mode)
{
    std::size_t covered = 0;
    for (const auto& o : outcomes)
    {
        const double v = mode == InterferenceMode::snr_only ? o.snr : o.sinr;
        covered += (!o.outage && v >= t) ? 1 : 0;
    }
    EmpiricalEstimate e;
    e.n_realizations = outcomes.size();
    if (outcomes.empty())
    {
        return e;
    }
    const double n = static_cast<double>(outcomes.size());
    e.mean = static_cast<double>(covered) / n;
    e.half_width_95 = 1.959963984540054 * std::sqrt(e.mean * (1.0 - e.mean) / n);
    return e;
}

EmpiricalEstimate
rate_from(std::span<const LinkOutcome> outcomes, double bandwidth_hz, InterferenceMode mode)
{
    return mean_estimate(outcomes, [&](const LinkOutcome& o) {
        if (o.outage)
        {
            return 0.0;
        }
        const double v = mode == InterferenceMode::snr_only ? o.snr : o.sinr;
        return bandwidth_hz * std::log2(1.0 + v);
    });
}

EmpiricalEstimate
estimate_coverage(const Scenario& scenario, double t, std::size_t n, std::uint64_t base_seed, InterferenceMode mode,
                  const SimulationOptions& options)
{
    if (n == 0)
    {
        throw DomainError("estimate_coverage: n must be >= 1");
    }
    const auto outcomes = simulate_outcomes(scenario, n, base_seed, options);
    return coverage_from(outcomes, t, mode);
}

EmpiricalEstimate
estimate_rate(const Scenario& scenario, std::size_t n, std::uint64_t base_seed, InterferenceMode mode,
              const SimulationOptions& options)
{
    if (n == 0)
    {
        throw DomainError("estimate_rate: n must be >= 1");
    }
    const auto outcomes = simulate_outcomes(scenario, n, base_seed, options);
    return rate_from(outcomes, scenario.system.bandwidth_hz, mode);
}

} // namespace mmcov
