#pragma once

#include <cstdint>

#include "lmar/mixture.hpp"
#include "lmar/sigma.hpp"
#include "lmar/time_series.hpp"

namespace lmar {

/// One-step conditional law of the process at target index i, given the
/// observations through i-1 (the series must cover -m..i-1). Component j runs
/// over the candidate lags p+1..i+m-p; its weight is proportional to
/// exp(-1/2 V'S11^{-1}V) for the lag-difference vector V, its mean is
/// Y_{i-j} + gamma.V, and all components share the innovation variance.
GaussianMixture conditional_mixture(const TimeSeries& series, std::int64_t i,
                                    const MixtureParam& sigma, std::int64_t m);

/// Draws a path from the process: at each step a latent lag is sampled with
/// the conditional-mixture weights and the next value from the selected
/// component. The seed history occupies indices -m..-1 (its length must equal
/// m and be at least 2p+1); the returned series holds seed plus n_steps drawn
/// values. Deterministic for a fixed rng_seed.
TimeSeries simulate(const MixtureParam& sigma, std::int64_t m,
                    const TimeSeries& seed_history, std::int64_t n_steps,
                    std::uint64_t rng_seed);

/// Log-density of the observations at indices 0..n given those at -m..-1:
/// the sum over targets of the log conditional-mixture density, with full
/// normalizing constants.
double exact_cond_loglik(const TimeSeries& series, const MixtureParam& sigma,
                         std::int64_t m);

/// Surrogate objective monitored during fitting: for each target i the
/// log-sum-exp over lags of -1/2 W'S^{-1}W, minus log|J_i| and half the
/// log-determinant. This is the uniform-lag marginal log-likelihood of the
/// independent window-difference model, up to an additive constant that does
/// not depend on the covariance.
double approx_obs_loglik(const TimeSeries& series, const MixtureParam& sigma,
                         std::int64_t m);

}  // namespace lmar
