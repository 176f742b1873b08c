#include "ris/model.hpp"

#include <cmath>
#include <string>

namespace ris {

namespace {

// Slack for angles produced by asin/rounding right at the endfire directions.
constexpr double kAngleSlack = 1e-12;

void require_same_length(Eigen::Index a, Eigen::Index b, const char* what) {
    if (a != b) {
        throw DimensionError(std::string(what) + ": length " + std::to_string(a) + " vs " +
                             std::to_string(b));
    }
}

}  // namespace

double wrap_phase(double phase) {
    double w = std::fmod(phase, kTwoPi);
    if (w < 0.0) w += kTwoPi;
    if (w >= kTwoPi) w = 0.0;  // fmod rounding can land exactly on 2pi
    return w;
}

double safe_arg(cplx z) {
    if (z.real() == 0.0 && z.imag() == 0.0) return 0.0;
    return std::arg(z);
}

ArrayModel::ArrayModel(int num_elements, double spacing_ratio)
    : num_elements_(num_elements), spacing_ratio_(spacing_ratio) {
    if (num_elements < 1) throw DomainError("ArrayModel: num_elements must be >= 1");
    if (!(spacing_ratio > 0.0) || !std::isfinite(spacing_ratio)) {
        throw DomainError("ArrayModel: spacing_ratio must be positive");
    }
}

CVector array_response(const ArrayModel& array, double aoa) {
    if (!(aoa >= -kHalfPi - kAngleSlack && aoa <= kHalfPi + kAngleSlack)) {
        throw DomainError("array_response: AOA " + std::to_string(aoa) +
                          " rad is outside [-pi/2, pi/2]");
    }
    const int n = array.num_elements();
    const double k = -kTwoPi * array.spacing_ratio() * std::sin(aoa);
    CVector a(n);
    for (int i = 0; i < n; ++i) {
        a[i] = std::polar(1.0, k * i);
    }
    return a;
}

LosChannel::LosChannel(double gain, double phase, double aoa)
    : gain_(gain), phase_(wrap_phase(phase)), aoa_(aoa) {
    if (!(gain >= 0.0)) throw DomainError("LosChannel: gain must be nonnegative");
    if (!(aoa >= -kHalfPi - kAngleSlack && aoa <= kHalfPi + kAngleSlack)) {
        throw DomainError("LosChannel: AOA outside [-pi/2, pi/2]");
    }
}

CVector expand_channel(const LosChannel& channel, const ArrayModel& array) {
    return channel.coefficient() * array_response(array, channel.aoa());
}

RisConfiguration::RisConfiguration(CVector entries) : entries_(std::move(entries)) {
    for (Eigen::Index i = 0; i < entries_.size(); ++i) {
        if (std::abs(std::abs(entries_[i]) - 1.0) > kUnitModulusTol) {
            throw DomainError("RisConfiguration: entry " + std::to_string(i) +
                              " is not unit modulus");
        }
    }
}

RisConfiguration RisConfiguration::from_phase_shifts(std::span<const double> theta) {
    CVector v(static_cast<Eigen::Index>(theta.size()));
    for (std::size_t i = 0; i < theta.size(); ++i) {
        v[static_cast<Eigen::Index>(i)] = std::polar(1.0, -theta[i]);
    }
    return RisConfiguration(std::move(v));
}

KnownBsRisChannel::KnownBsRisChannel(CVector coefficients) : coefficients_(std::move(coefficients)) {
    for (Eigen::Index i = 0; i < coefficients_.size(); ++i) {
        if (coefficients_[i] == cplx{0.0, 0.0}) {
            throw SingularChannelError("KnownBsRisChannel: coefficient " + std::to_string(i) +
                                       " is zero");
        }
    }
}

KnownBsRisChannel KnownBsRisChannel::random_unit_phases(int num_elements, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> phase(0.0, kTwoPi);
    CVector h(num_elements);
    for (int i = 0; i < num_elements; ++i) h[i] = std::polar(1.0, phase(rng));
    return KnownBsRisChannel(std::move(h));
}

KnownBsRisChannel KnownBsRisChannel::unit(int num_elements) {
    return KnownBsRisChannel(CVector::Ones(num_elements));
}

cplx effective_channel(const RisConfiguration& ris, const KnownBsRisChannel& h, const CVector& g) {
    require_same_length(ris.size(), h.size(), "effective_channel (theta vs h)");
    require_same_length(h.size(), g.size(), "effective_channel (h vs g)");
    const CVector& theta = ris.entries();
    const CVector& hc = h.coefficients();
    cplx acc{0.0, 0.0};
    for (Eigen::Index n = 0; n < g.size(); ++n) acc += theta[n] * hc[n] * g[n];
    return acc;
}

double achievable_rate(cplx effective, double data_snr_scale) {
    return std::log2(1.0 + std::norm(effective) * data_snr_scale);
}

double capacity(const KnownBsRisChannel& h, const CVector& g, double data_snr_scale) {
    require_same_length(h.size(), g.size(), "capacity");
    double aligned = 0.0;
    for (Eigen::Index n = 0; n < g.size(); ++n) aligned += std::abs(h.coefficients()[n] * g[n]);
    return std::log2(1.0 + aligned * aligned * data_snr_scale);
}

RisConfiguration phase_aligned_configuration(const KnownBsRisChannel& h, const CVector& g) {
    require_same_length(h.size(), g.size(), "phase_aligned_configuration");
    CVector theta(g.size());
    for (Eigen::Index n = 0; n < g.size(); ++n) {
        theta[n] = std::polar(1.0, -(safe_arg(h.coefficients()[n]) + safe_arg(g[n])));
    }
    return RisConfiguration(std::move(theta));
}

}  // namespace ris
