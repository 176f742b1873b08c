#include "ris/noise.hpp"

#include <cmath>

namespace ris {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

Rng derive_stream(std::uint64_t master_seed, std::uint64_t stream_id) {
    const std::uint64_t a = splitmix64(master_seed);
    const std::uint64_t b = splitmix64(a ^ splitmix64(stream_id + 0x632be59bd9b4e019ULL));
    std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
    return Rng(seq);
}

cplx complex_gaussian(double variance, Rng& rng) {
    std::normal_distribution<double> dist(0.0, std::sqrt(variance / 2.0));
    const double re = dist(rng);
    const double im = dist(rng);
    return {re, im};
}

cplx simulate_pilot_reception(const RisConfiguration& config, const KnownBsRisChannel& h,
                              const CVector& g, double pilot_power, double noise_std, Rng& rng) {
    const cplx clean = effective_channel(config, h, g) * std::sqrt(pilot_power);
    if (noise_std == 0.0) return clean;
    return clean + complex_gaussian(noise_std * noise_std, rng);
}

}  // namespace ris
