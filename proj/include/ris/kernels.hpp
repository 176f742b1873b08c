#pragma once

// Grid kernels behind the AOA search.
//
// The *_serial functions evaluate the utility straight from its definition, one angle
// at a time, and are kept as the reference for tests and benchmarks. The *_omp
// functions work from a precomputed steering table (row k = (D_h a(phi_k))^T) and
// parallelize over grid angles with OpenMP. Inside an enclosing parallel region
// (Monte Carlo trials) they run on the calling thread.

#include <cstddef>
#include <span>
#include <vector>

#include "ris/estimators.hpp"
#include "ris/model.hpp"

namespace ris::kernels {

// Utility over a grid together with the pieces it is made of.
//
// Directions with ||B D_h a(phi)||^2 <= floor carry no signal under the pilots sent so
// far (pool configurations sit on each other's Dirichlet nulls). Their utility is 0,
// which is the concentrated likelihood min_c ||y - c z||^2 = ||y||^2 for z = 0, and
// they are never reported as the maximizer.
//
// The utility never exceeds ||y||^2, so values within kTieRelTol * ||y||^2 of the
// maximum are ties: they are equal in exact arithmetic (L = 1, or pool angles sharing a
// null pattern) and only roundoff separates them. Ties go to the smallest angle.
inline constexpr double kTieRelTol = 1e-13;

struct UtilityField {
    std::vector<double> utility;
    std::vector<double> norm_sq;  // ||B D_h a(phi_k)||^2
    std::vector<cplx> inner;      // y^H B D_h a(phi_k)
    double floor = 0.0;
    double tie_tol = 0.0;

    bool defined(std::size_t k) const { return norm_sq[k] > floor; }
    // First tied maximizer among defined directions (smallest angle on a sorted grid).
    // Throws DegenerateDirectionError when no direction is defined, e.g. with no pilots.
    std::size_t best() const;
};

// G x N table, row k = (D_h a(angles[k]))^T.
CMatrix steering_table(const KnownBsRisChannel& h, const ArrayModel& array,
                       std::span<const double> angles);

// out(r, k) = sum_n configs(r, n) * steering(k, n).
CMatrix project_rows_serial(const CMatrix& configs, const CMatrix& steering);
CMatrix project_rows_omp(const CMatrix& configs, const CMatrix& steering);

UtilityField utility_serial(const PilotCampaign& campaign, const ArrayModel& array,
                            std::span<const double> angles);
UtilityField utility_omp(const PilotCampaign& campaign, const CMatrix& steering);

// First index of the maximum.
std::size_t argmax_first(std::span<const double> values);

// Running y^H z(phi_k) and ||z(phi_k)||^2 per grid angle, grown one pilot at a time.
// Adding a pilot costs O(G) given its projections on the grid.
class UtilityAccumulator {
public:
    // reference_power = (sum_n |h_n|)^2, used for the degenerate-direction floor.
    UtilityAccumulator(std::size_t num_angles, double reference_power);

    // projections[k] = theta^T D_h a(phi_k) for the new pilot row.
    void add_pilot(std::span<const cplx> projections, cplx received);

    std::size_t num_angles() const noexcept { return inner_.size(); }
    std::size_t num_pilots() const noexcept { return pilots_; }

    UtilityField field() const;

private:
    std::vector<cplx> inner_;
    std::vector<double> norm_sq_;
    double reference_power_;
    double received_power_ = 0.0;
    std::size_t pilots_ = 0;
};

}  // namespace ris::kernels
