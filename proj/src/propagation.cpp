#include "mmcov/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>
#include <numbers>

namespace mmcov
{

const char*
to_string(LinkState state)
{
    switch (state)
    {
    case LinkState::los:
        return "LOS";
    case LinkState::nlos:
        return "NLOS";
    case LinkState::out:
        return "OUT";
    }
    return "?";
}

LinkStateProbs
link_state_probs(double r, const BlockageParams& b, bool outage_enabled)
{
    if (!(r >= 0.0))
    {
        throw DomainError("link_state_probs: distance must be >= 0");
    }
    // Each component is formed without subtracting from 1 so that small
    // probabilities keep full relative precision near r = 0 and r_c.
    double keep = 1.0;
    double p_out = 0.0;
    if (outage_enabled)
    {
        const double log_keep = std::log(b.gamma_out) - b.delta_out * r;
        if (log_keep < 0.0)
        {
            keep = std::exp(log_keep);
            p_out = -std::expm1(log_keep);
        }
    }
    double p_los = keep * b.gamma_los * std::exp(-b.delta_los * r);
    double p_nlos = keep * ((1.0 - b.gamma_los) - b.gamma_los * std::expm1(-b.delta_los * r));

    // Rounding can leave the sum an ulp or two away from 1. Try shifting one
    // component by up to 64 ulps, largest component first, until
    // p_los + p_nlos + p_out == 1 holds in that evaluation order.
    double* parts[3] = {&p_los, &p_nlos, &p_out};
    std::sort(std::begin(parts), std::end(parts), [](const double* a, const double* b) { return *a > *b; });
    for (double* part : parts)
    {
        if (p_los + p_nlos + p_out == 1.0 || *part == 0.0)
        {
            break;
        }
        const double original = *part;
        for (int k = 1; k <= 64 && p_los + p_nlos + p_out != 1.0; ++k)
        {
            for (const double dir : {2.0, -1.0})
            {
                double v = original;
                for (int j = 0; j < k; ++j)
                {
                    v = std::nextafter(v, dir);
                }
                *part = v;
                if (p_los + p_nlos + p_out == 1.0)
                {
                    break;
                }
                *part = original;
            }
        }
    }
    return {p_los, p_nlos, p_out};
}

LinkStateProbs
link_state_probs(double r, const Scenario& scenario)
{
    return link_state_probs(r, scenario.blockage, scenario.outage_enabled);
}

double
path_loss(double r, LinkState state, const PathLossParams& pl)
{
    if (!(r > 0.0))
    {
        throw DomainError("path_loss: distance must be > 0");
    }
    switch (state)
    {
    case LinkState::los:
        return std::pow(pl.kappa_los * r, pl.beta_los);
    case LinkState::nlos:
        return std::pow(pl.kappa_nlos * r, pl.beta_nlos);
    case LinkState::out:
        break;
    }
    return std::numeric_limits<double>::infinity();
}

double
GainDistribution::mean() const
{
    double m = 0.0;
    for (const auto& a : atoms)
    {
        m += a.gain * a.probability;
    }
    return m;
}

GainDistribution
interferer_gain_distribution(const AntennaPattern& bs, const AntennaPattern& mt)
{
    const auto lobes = [](const AntennaPattern& p) {
        const double p_max = p.omega / (2.0 * std::numbers::pi);
        return std::array<GainAtom, 2>{GainAtom{db_to_linear(p.g_max_db), p_max},
                                       GainAtom{db_to_linear(p.g_min_db), 1.0 - p_max}};
    };

    GainDistribution dist;
    for (const auto& a : lobes(bs))
    {
        for (const auto& b : lobes(mt))
        {
            const double prob = a.probability * b.probability;
            if (prob <= 0.0)
            {
                continue;
            }
            const double gain = a.gain * b.gain;
            auto same = std::find_if(dist.atoms.begin(), dist.atoms.end(), [gain](const GainAtom& x) {
                return std::abs(x.gain - gain) <= 1e-12 * std::max(x.gain, gain);
            });
            if (same != dist.atoms.end())
            {
                same->probability += prob;
            }
            else
            {
                dist.atoms.push_back({gain, prob});
            }
        }
    }
    std::sort(dist.atoms.begin(), dist.atoms.end(),
              [](const GainAtom& x, const GainAtom& y) { return x.gain > y.gain; });
    return dist;
}

double
intended_link_gain(const AntennaPattern& bs, const AntennaPattern& mt)
{
    return db_to_linear(bs.g_max_db + mt.g_max_db);
}

ShadowingNatural
shadowing_natural_params(const ShadowingParams& sh, LinkState state)
{
    constexpr double scale = std::numbers::ln10 / 10.0;
    switch (state)
    {
    case LinkState::los:
        return {sh.mu_los_db * scale, sh.sigma_los_db * scale};
    case LinkState::nlos:
        return {sh.mu_nlos_db * scale, sh.sigma_nlos_db * scale};
    case LinkState::out:
        break;
    }
    throw DomainError("shadowing is undefined for links in outage");
}

LinkBudget
make_link_budget(const Scenario& s)
{
    LinkBudget b;
    b.tx_power_mw = dbm_to_mw(s.system.tx_power_dbm);
    b.noise_power_mw = dbm_to_mw(noise_power_dbm(s.system.bandwidth_hz, s.system.noise_figure_db));
    b.intended_gain = intended_link_gain(s.bs_antenna, s.mt_antenna);
    b.reference_snr = b.tx_power_mw * b.intended_gain / b.noise_power_mw;
    b.los = shadowing_natural_params(s.shadowing, LinkState::los);
    b.nlos = shadowing_natural_params(s.shadowing, LinkState::nlos);
    b.interferer_gain = interferer_gain_distribution(s.bs_antenna, s.mt_antenna);
    return b;
}

} // namespace mmcov
