#include "ris/kernels.hpp"

namespace ris::kernels {

std::size_t UtilityField::best() const {
    const std::size_t none = utility.size();
    std::size_t top = none;
    for (std::size_t k = 0; k < utility.size(); ++k) {
        if (defined(k) && (top == none || utility[k] > utility[top])) top = k;
    }
    if (top == none) {
        throw DegenerateDirectionError("utility: B D_h a(phi) vanishes at every grid angle");
    }
    for (std::size_t k = 0; k < top; ++k) {
        if (defined(k) && utility[k] >= utility[top] - tie_tol) return k;
    }
    return top;
}

CMatrix steering_table(const KnownBsRisChannel& h, const ArrayModel& array,
                       std::span<const double> angles) {
    if (h.size() != array.num_elements()) {
        throw DimensionError("steering_table: h length does not match array size");
    }
    CMatrix table(static_cast<Eigen::Index>(angles.size()), array.num_elements());
    for (std::size_t k = 0; k < angles.size(); ++k) {
        table.row(static_cast<Eigen::Index>(k)) =
            h.coefficients().cwiseProduct(array_response(array, angles[k])).transpose();
    }
    return table;
}

CMatrix project_rows_serial(const CMatrix& configs, const CMatrix& steering) {
    if (configs.cols() != steering.cols()) {
        throw DimensionError("project_rows: column count mismatch");
    }
    CMatrix out(configs.rows(), steering.rows());
    for (Eigen::Index r = 0; r < configs.rows(); ++r) {
        for (Eigen::Index k = 0; k < steering.rows(); ++k) {
            cplx acc{0.0, 0.0};
            for (Eigen::Index n = 0; n < configs.cols(); ++n) acc += configs(r, n) * steering(k, n);
            out(r, k) = acc;
        }
    }
    return out;
}

// Straight from the definition: z = B D_h a(phi), u = |y^H z|^2 / ||z||^2, one angle at a time.
UtilityField utility_serial(const PilotCampaign& campaign, const ArrayModel& array,
                            std::span<const double> angles) {
    if (campaign.num_elements() != array.num_elements()) {
        throw DimensionError("utility_serial: campaign and array disagree on N");
    }
    const CMatrix& b = campaign.config_matrix();
    const CVector& h = campaign.bs_ris_channel().coefficients();
    const CVector& y = campaign.received();
    UtilityField f;
    f.floor = degenerate_floor(campaign.bs_ris_channel(), campaign.num_pilots());
    f.tie_tol = kTieRelTol * y.squaredNorm();
    f.utility.resize(angles.size());
    f.norm_sq.resize(angles.size());
    f.inner.resize(angles.size());
    for (std::size_t k = 0; k < angles.size(); ++k) {
        const CVector a = array_response(array, angles[k]);
        cplx inner{0.0, 0.0};
        double norm_sq = 0.0;
        for (Eigen::Index l = 0; l < b.rows(); ++l) {
            cplx z{0.0, 0.0};
            for (Eigen::Index n = 0; n < b.cols(); ++n) z += b(l, n) * (h[n] * a[n]);
            inner += std::conj(y[l]) * z;
            norm_sq += std::norm(z);
        }
        f.inner[k] = inner;
        f.norm_sq[k] = norm_sq;
        f.utility[k] = norm_sq > f.floor ? std::norm(inner) / norm_sq : 0.0;
    }
    return f;
}

std::size_t argmax_first(std::span<const double> values) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < values.size(); ++k) {
        if (values[k] > values[best]) best = k;
    }
    return best;
}

}  // namespace ris::kernels
