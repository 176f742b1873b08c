#include "ris/kernels.hpp"

#include <omp.h>

namespace ris::kernels {

namespace {

// Nested regions stay on the caller's thread; spawning teams per pilot inside
// per-trial parallelism only costs time.
bool run_parallel() { return !omp_in_parallel(); }

}  // namespace

CMatrix project_rows_omp(const CMatrix& configs, const CMatrix& steering) {
    if (configs.cols() != steering.cols()) {
        throw DimensionError("project_rows: column count mismatch");
    }
    const Eigen::Index rows = configs.rows();
    const Eigen::Index grid = steering.rows();
    const Eigen::Index n_el = configs.cols();
    CMatrix out(rows, grid);
#pragma omp parallel for schedule(static) if (run_parallel())
    for (Eigen::Index k = 0; k < grid; ++k) {
        for (Eigen::Index r = 0; r < rows; ++r) {
            cplx acc{0.0, 0.0};
            for (Eigen::Index n = 0; n < n_el; ++n) acc += configs(r, n) * steering(k, n);
            out(r, k) = acc;
        }
    }
    return out;
}

UtilityField utility_omp(const PilotCampaign& campaign, const CMatrix& steering) {
    const CMatrix z = project_rows_omp(campaign.config_matrix(), steering);
    const CVector& y = campaign.received();
    const Eigen::Index grid = steering.rows();
    UtilityField f;
    f.floor = degenerate_floor(campaign.bs_ris_channel(), campaign.num_pilots());
    f.tie_tol = kTieRelTol * y.squaredNorm();
    f.utility.resize(static_cast<std::size_t>(grid));
    f.norm_sq.resize(static_cast<std::size_t>(grid));
    f.inner.resize(static_cast<std::size_t>(grid));
#pragma omp parallel for schedule(static) if (run_parallel())
    for (Eigen::Index k = 0; k < grid; ++k) {
        cplx inner{0.0, 0.0};
        double norm_sq = 0.0;
        for (Eigen::Index l = 0; l < z.rows(); ++l) {
            inner += std::conj(y[l]) * z(l, k);
            norm_sq += std::norm(z(l, k));
        }
        const auto kk = static_cast<std::size_t>(k);
        f.inner[kk] = inner;
        f.norm_sq[kk] = norm_sq;
        f.utility[kk] = norm_sq > f.floor ? std::norm(inner) / norm_sq : 0.0;
    }
    return f;
}

UtilityAccumulator::UtilityAccumulator(std::size_t num_angles, double reference_power)
    : inner_(num_angles, cplx{0.0, 0.0}), norm_sq_(num_angles, 0.0), reference_power_(reference_power) {}

void UtilityAccumulator::add_pilot(std::span<const cplx> projections, cplx received) {
    if (projections.size() != inner_.size()) {
        throw DimensionError("UtilityAccumulator::add_pilot: projection count mismatch");
    }
    const cplx yc = std::conj(received);
    const auto grid = static_cast<std::ptrdiff_t>(inner_.size());
#pragma omp parallel for schedule(static) if (run_parallel() && grid > 4096)
    for (std::ptrdiff_t k = 0; k < grid; ++k) {
        inner_[k] += yc * projections[k];
        norm_sq_[k] += std::norm(projections[k]);
    }
    received_power_ += std::norm(received);
    ++pilots_;
}

UtilityField UtilityAccumulator::field() const {
    UtilityField f;
    f.floor = kDegenerateRelTol * static_cast<double>(pilots_) * reference_power_;
    f.tie_tol = kTieRelTol * received_power_;
    f.inner = inner_;
    f.norm_sq = norm_sq_;
    f.utility.resize(inner_.size());
    for (std::size_t k = 0; k < inner_.size(); ++k) {
        f.utility[k] = norm_sq_[k] > f.floor ? std::norm(inner_[k]) / norm_sq_[k] : 0.0;
    }
    return f;
}

}  // namespace ris::kernels
