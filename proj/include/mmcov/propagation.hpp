#pragma once

#include "mmcov/params.hpp"

#include <array>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

namespace mmcov
{

class DomainError : public std::domain_error
{
  public:
    using std::domain_error::domain_error;
};

enum class LinkState
{
    los,
    nlos,
    out,
};

const char* to_string(LinkState state);

struct LinkStateProbs
{
    double p_los{0.0};
    double p_nlos{0.0};
    double p_out{0.0};
};

/// Three-state blockage probabilities at distance r (meters). With the
/// outage state disabled p_out is identically zero.
LinkStateProbs link_state_probs(double r, const BlockageParams& blockage, bool outage_enabled);
LinkStateProbs link_state_probs(double r, const Scenario& scenario);

/// (kappa_s r)^beta_s; +inf for OUT. r must be strictly positive.
double path_loss(double r, LinkState state, const PathLossParams& pl);

struct GainAtom
{
    double gain{1.0}; // linear
    double probability{1.0};
};

/// Law of the product of two independent sectored-antenna gains.
struct GainDistribution
{
    std::vector<GainAtom> atoms;

    double mean() const;

    template <typename Urbg>
    double sample(Urbg& rng) const
    {
        double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        for (const auto& a : atoms)
        {
            if (u < a.probability)
            {
                return a.gain;
            }
            u -= a.probability;
        }
        return atoms.back().gain;
    }
};

GainDistribution interferer_gain_distribution(const AntennaPattern& bs, const AntennaPattern& mt);

/// G_BS^max G_MT^max in linear scale.
double intended_link_gain(const AntennaPattern& bs, const AntennaPattern& mt);

/// Log-normal shadowing parameters in natural-log units.
struct ShadowingNatural
{
    double mu{0.0};
    double sigma{0.0};
};

ShadowingNatural shadowing_natural_params(const ShadowingParams& sh, LinkState state);

/// One draw of e^X, X ~ N(mu, sigma^2). sigma == 0 yields e^mu exactly.
template <typename Urbg>
double
sample_shadowing(Urbg& rng, double mu, double sigma)
{
    if (sigma == 0.0)
    {
        return std::exp(mu);
    }
    return std::exp(mu + sigma * std::normal_distribution<double>(0.0, 1.0)(rng));
}

/// Every linear quantity the analytic and Monte Carlo engines need, converted
/// from the scenario's dB fields exactly once.
struct LinkBudget
{
    double tx_power_mw{1.0};
    double noise_power_mw{1.0};
    double intended_gain{1.0};
    /// gamma0 = P G0 / sigma_N^2.
    double reference_snr{1.0};
    ShadowingNatural los;
    ShadowingNatural nlos;
    GainDistribution interferer_gain;
};

LinkBudget make_link_budget(const Scenario& scenario);

} // namespace mmcov
