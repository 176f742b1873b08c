#pragma once

// Channel estimators for the UE-RIS link from L pilot observations
//
//   y = sqrt(P_p) B D_h g + w,   B = [theta_1, ..., theta_L]^T.
//
// Two estimators are provided:
//  - parametric ML for a LOS channel g = c a(phi): grid search over phi of
//        u(phi) = |y^H B D_h a(phi)|^2 / ||B D_h a(phi)||^2
//    followed by closed-form gain and phase at the maximizer;
//  - the non-parametric least-squares estimate (1/sqrt(P_p)) D_h^{-1} B^+ y.

#include <optional>
#include <utility>
#include <vector>

#include "ris/model.hpp"

namespace ris {

// Pilot observations collected so far. Immutable; with_pilot() returns an extended copy.
class PilotCampaign {
public:
    PilotCampaign(CMatrix config_matrix, CVector received, double pilot_power,
                  KnownBsRisChannel bs_ris_channel);

    // Campaign with no pilots yet, for N-element surfaces.
    static PilotCampaign empty(double pilot_power, KnownBsRisChannel bs_ris_channel);

    PilotCampaign with_pilot(const RisConfiguration& config, cplx received) const;

    const CMatrix& config_matrix() const noexcept { return config_matrix_; }
    const CVector& received() const noexcept { return received_; }
    double pilot_power() const noexcept { return pilot_power_; }
    const KnownBsRisChannel& bs_ris_channel() const noexcept { return h_; }
    Eigen::Index num_pilots() const noexcept { return config_matrix_.rows(); }
    Eigen::Index num_elements() const noexcept { return h_.size(); }

private:
    CMatrix config_matrix_;
    CVector received_;
    double pilot_power_;
    KnownBsRisChannel h_;
};

// Candidate AOAs for the grid search, sorted ascending without duplicates.
class AoaSearchGrid {
public:
    // num_points angles uniformly spaced over [lower, upper], both endpoints included.
    static AoaSearchGrid uniform(double lower, double upper, int num_points);

    // Copy with extra candidate angles merged in (those outside [lower, upper] are dropped).
    AoaSearchGrid with_points(std::span<const double> extra) const;

    const std::vector<double>& points() const noexcept { return points_; }
    std::size_t size() const noexcept { return points_.size(); }
    double lower() const noexcept { return lower_; }
    double upper() const noexcept { return upper_; }
    // Spacing of the underlying uniform grid.
    double step() const noexcept { return step_; }

private:
    AoaSearchGrid(double lower, double upper, double step, std::vector<double> points);

    double lower_;
    double upper_;
    double step_;
    std::vector<double> points_;
};

struct UtilitySample {
    double angle;
    double utility;
};

struct EstimationResult {
    double aoa_estimate = 0.0;
    double gain_estimate = 0.0;
    double phase_estimate = 0.0;
    CVector channel_estimate;
    std::optional<std::vector<UtilitySample>> utility_trace;
};

struct MlOptions {
    bool record_trace = false;
    // Golden-section polish of the grid maximizer within one grid step either side.
    bool refine = false;
};

struct ScalarCoefficient {
    double gain;
    double phase;
};

// ||B D_h a(phi)||^2 at or below this is an exact zero blurred by roundoff:
// 1e-24 * L * (sum_n |h_n|)^2. Pool configurations hit it on each other's Dirichlet nulls.
inline constexpr double kDegenerateRelTol = 1e-24;
double degenerate_floor(const KnownBsRisChannel& h, Eigen::Index num_pilots);

// Utility at a single angle. Throws DegenerateDirectionError when B D_h a(phi) = 0.
double ml_utility(const PilotCampaign& campaign, const ArrayModel& array, double aoa);

// Grid maximizer of ml_utility; ties go to the smallest angle.
double estimate_aoa(const PilotCampaign& campaign, const ArrayModel& array,
                    const AoaSearchGrid& grid);

// Gain |y^H z|^2 / (P_p ||z||^4) and phase -arg(y^H z) wrapped to [0, 2pi), z = B D_h a(aoa).
ScalarCoefficient estimate_scalar_coefficient(const PilotCampaign& campaign,
                                              const ArrayModel& array, double aoa_estimate);

// Same closed form when y^H z and ||z||^2 are already known.
ScalarCoefficient scalar_coefficient_from_projection(cplx inner, double norm_sq, double pilot_power);

EstimationResult parametric_ml_estimate(const PilotCampaign& campaign, const ArrayModel& array,
                                        const AoaSearchGrid& grid, const MlOptions& options = {});

// Minimum-norm pseudoinverse; singular values below rel_tol * sigma_max are treated as zero.
CMatrix pseudo_inverse(const CMatrix& m, double rel_tol = 1e-12);

// (1/sqrt(P_p)) D_h^{-1} B^+ y.
CVector least_squares_estimate(const PilotCampaign& campaign);

// Local maxima of a sampled utility, highest first. Endpoints count when they exceed
// their single neighbour; plateaus report their first index.
std::vector<std::size_t> find_peaks(std::span<const double> values);

// 10 log10(top / second) between the two highest local maxima; +inf if there is only one.
double top_two_peak_gap_db(std::span<const double> values);

}  // namespace ris
