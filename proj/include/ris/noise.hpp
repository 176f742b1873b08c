#pragma once

// Random streams and pilot reception for Monte Carlo runs.

#include <cstdint>
#include <random>

#include "ris/model.hpp"

namespace ris {

using Rng = std::mt19937_64;

// Independent engine for (master seed, stream id). The id is hashed with splitmix64,
// so stream k never depends on how many draws other streams consumed.
Rng derive_stream(std::uint64_t master_seed, std::uint64_t stream_id);

// Circularly-symmetric complex Gaussian with E|w|^2 = variance.
cplx complex_gaussian(double variance, Rng& rng);

// theta^T D_h g sqrt(P_p) + w, w ~ CN(0, noise_std^2). noise_std = 0 gives the exact value
// without touching the engine.
cplx simulate_pilot_reception(const RisConfiguration& config, const KnownBsRisChannel& h,
                              const CVector& g, double pilot_power, double noise_std, Rng& rng);

}  // namespace ris
