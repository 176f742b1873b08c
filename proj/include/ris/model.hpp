#pragma once

// Narrowband signal model for a UE -> RIS -> BS link with a uniform linear RIS.
//
// Angles are radians everywhere in the library. Element indices are 0-based,
// element 0 is the phase reference of the array.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <span>

#include <Eigen/Dense>

#include "ris/errors.hpp"

namespace ris {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr double kHalfPi = 0.5 * kPi;

// Tolerance for "unit modulus" checks on RIS phase vectors.
inline constexpr double kUnitModulusTol = 1e-12;

// Maps any angle into [0, 2pi).
double wrap_phase(double phase);

// arg() with arg(0) == 0, so zero signals never produce NaN phases.
double safe_arg(cplx z);

// Uniform linear array: N elements, spacing expressed as a fraction of the wavelength.
class ArrayModel {
public:
    ArrayModel(int num_elements, double spacing_ratio);

    int num_elements() const noexcept { return num_elements_; }
    double spacing_ratio() const noexcept { return spacing_ratio_; }

private:
    int num_elements_;
    double spacing_ratio_;
};

// a(phi)[n] = exp(-j 2 pi (Delta/lambda) n sin(phi)); phi must lie in [-pi/2, pi/2].
CVector array_response(const ArrayModel& array, double aoa);

// LOS UE-RIS channel g = sqrt(gain) exp(j phase) a(aoa).
class LosChannel {
public:
    LosChannel(double gain, double phase, double aoa);

    double gain() const noexcept { return gain_; }
    double phase() const noexcept { return phase_; }
    double aoa() const noexcept { return aoa_; }
    cplx coefficient() const { return std::polar(std::sqrt(gain_), phase_); }

private:
    double gain_;
    double phase_;
    double aoa_;
};

CVector expand_channel(const LosChannel& channel, const ArrayModel& array);

// RIS phase vector [exp(-j theta_1), ..., exp(-j theta_N)].
class RisConfiguration {
public:
    explicit RisConfiguration(CVector entries);

    // Builds the vector from the phase shifts theta_n themselves.
    static RisConfiguration from_phase_shifts(std::span<const double> theta);

    const CVector& entries() const noexcept { return entries_; }
    Eigen::Index size() const noexcept { return entries_.size(); }

    bool operator==(const RisConfiguration& other) const { return entries_ == other.entries_; }

private:
    CVector entries_;
};

// Known BS-RIS channel h. D_h = diag(h) is kept implicit.
class KnownBsRisChannel {
public:
    explicit KnownBsRisChannel(CVector coefficients);

    const CVector& coefficients() const noexcept { return coefficients_; }
    Eigen::Index size() const noexcept { return coefficients_.size(); }

    // Unit-magnitude entries with i.i.d. uniform phases.
    static KnownBsRisChannel random_unit_phases(int num_elements, std::mt19937_64& rng);
    static KnownBsRisChannel unit(int num_elements);

private:
    CVector coefficients_;
};

// theta^T D_h g.
cplx effective_channel(const RisConfiguration& ris, const KnownBsRisChannel& h, const CVector& g);

// log2(1 + |effective|^2 P_d / sigma^2).
double achievable_rate(cplx effective, double data_snr_scale);

// log2(1 + (sum_n |h_n g_n|)^2 P_d / sigma^2), reached when every path is phase-aligned.
double capacity(const KnownBsRisChannel& h, const CVector& g, double data_snr_scale);

// Configuration with theta_n = arg(h_n) + arg(g_n): the capacity-achieving choice when
// g is the true channel, and the natural way to configure the RIS from an estimate of g.
RisConfiguration phase_aligned_configuration(const KnownBsRisChannel& h, const CVector& g);

}  // namespace ris
