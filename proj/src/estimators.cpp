#include "ris/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ris/kernels.hpp"

namespace ris {

namespace {

void check_unit_modulus(const CMatrix& b) {
    for (Eigen::Index r = 0; r < b.rows(); ++r) {
        for (Eigen::Index c = 0; c < b.cols(); ++c) {
            if (std::abs(std::abs(b(r, c)) - 1.0) > kUnitModulusTol) {
                throw DomainError("PilotCampaign: configuration entry (" + std::to_string(r) + ", " +
                                  std::to_string(c) + ") is not unit modulus");
            }
        }
    }
}

// z = B D_h a(phi)
CVector projected_direction(const PilotCampaign& campaign, const ArrayModel& array, double aoa) {
    if (campaign.num_elements() != array.num_elements()) {
        throw DimensionError("campaign and array disagree on the number of elements");
    }
    const CVector steer = campaign.bs_ris_channel().coefficients().cwiseProduct(array_response(array, aoa));
    return campaign.config_matrix() * steer;
}

}  // namespace

PilotCampaign::PilotCampaign(CMatrix config_matrix, CVector received, double pilot_power,
                             KnownBsRisChannel bs_ris_channel)
    : config_matrix_(std::move(config_matrix)),
      received_(std::move(received)),
      pilot_power_(pilot_power),
      h_(std::move(bs_ris_channel)) {
    if (received_.size() != config_matrix_.rows()) {
        throw DimensionError("PilotCampaign: " + std::to_string(received_.size()) +
                             " received samples for " + std::to_string(config_matrix_.rows()) +
                             " configurations");
    }
    if (config_matrix_.cols() != h_.size()) {
        throw DimensionError("PilotCampaign: configuration width does not match h");
    }
    if (!(pilot_power_ > 0.0)) throw DomainError("PilotCampaign: pilot power must be positive");
    check_unit_modulus(config_matrix_);
}

PilotCampaign PilotCampaign::empty(double pilot_power, KnownBsRisChannel bs_ris_channel) {
    const Eigen::Index n = bs_ris_channel.size();
    return PilotCampaign(CMatrix(0, n), CVector(0), pilot_power, std::move(bs_ris_channel));
}

PilotCampaign PilotCampaign::with_pilot(const RisConfiguration& config, cplx received) const {
    if (config.size() != num_elements()) {
        throw DimensionError("PilotCampaign::with_pilot: configuration length mismatch");
    }
    CMatrix b(config_matrix_.rows() + 1, config_matrix_.cols());
    b.topRows(config_matrix_.rows()) = config_matrix_;
    b.row(config_matrix_.rows()) = config.entries().transpose();
    CVector y(received_.size() + 1);
    y.head(received_.size()) = received_;
    y[received_.size()] = received;
    return PilotCampaign(std::move(b), std::move(y), pilot_power_, h_);
}

AoaSearchGrid::AoaSearchGrid(double lower, double upper, double step, std::vector<double> points)
    : lower_(lower), upper_(upper), step_(step), points_(std::move(points)) {}

AoaSearchGrid AoaSearchGrid::uniform(double lower, double upper, int num_points) {
    if (!(lower < upper)) throw DomainError("AoaSearchGrid: lower must be below upper");
    if (num_points < 2) throw DomainError("AoaSearchGrid: need at least two points");
    if (lower < -kHalfPi - 1e-12 || upper > kHalfPi + 1e-12) {
        throw DomainError("AoaSearchGrid: range must lie within [-pi/2, pi/2]");
    }
    const double step = (upper - lower) / (num_points - 1);
    std::vector<double> pts(static_cast<std::size_t>(num_points));
    for (int k = 0; k < num_points; ++k) pts[k] = lower + step * k;
    pts.back() = upper;
    return AoaSearchGrid(lower, upper, step, std::move(pts));
}

AoaSearchGrid AoaSearchGrid::with_points(std::span<const double> extra) const {
    std::vector<double> pts = points_;
    for (double p : extra) {
        if (p >= lower_ && p <= upper_) pts.push_back(p);
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return AoaSearchGrid(lower_, upper_, step_, std::move(pts));
}

double degenerate_floor(const KnownBsRisChannel& h, Eigen::Index num_pilots) {
    const double ref = h.coefficients().cwiseAbs().sum();
    return kDegenerateRelTol * static_cast<double>(num_pilots) * ref * ref;
}

double ml_utility(const PilotCampaign& campaign, const ArrayModel& array, double aoa) {
    const CVector z = projected_direction(campaign, array, aoa);
    const double norm_sq = z.squaredNorm();
    if (norm_sq <= degenerate_floor(campaign.bs_ris_channel(), campaign.num_pilots())) {
        throw DegenerateDirectionError("ml_utility: B D_h a(phi) = 0 at phi = " + std::to_string(aoa));
    }
    // Eigen's dot conjugates the left operand: y.dot(z) = y^H z.
    return std::norm(campaign.received().dot(z)) / norm_sq;
}

double estimate_aoa(const PilotCampaign& campaign, const ArrayModel& array,
                    const AoaSearchGrid& grid) {
    const CMatrix steering = kernels::steering_table(campaign.bs_ris_channel(), array, grid.points());
    return grid.points()[kernels::utility_omp(campaign, steering).best()];
}

ScalarCoefficient scalar_coefficient_from_projection(cplx inner, double norm_sq, double pilot_power) {
    if (norm_sq == 0.0) {
        throw DegenerateDirectionError("scalar coefficient: B D_h a(phi) = 0");
    }
    return {std::norm(inner) / (pilot_power * norm_sq * norm_sq), wrap_phase(-safe_arg(inner))};
}

ScalarCoefficient estimate_scalar_coefficient(const PilotCampaign& campaign,
                                              const ArrayModel& array, double aoa_estimate) {
    const CVector z = projected_direction(campaign, array, aoa_estimate);
    return scalar_coefficient_from_projection(campaign.received().dot(z), z.squaredNorm(),
                                              campaign.pilot_power());
}

namespace {

double golden_section_max(const PilotCampaign& campaign, const ArrayModel& array, double a,
                          double b) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = ml_utility(campaign, array, c);
    double fd = ml_utility(campaign, array, d);
    for (int it = 0; it < 200 && (b - a) > 1e-13; ++it) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = ml_utility(campaign, array, c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = ml_utility(campaign, array, d);
        }
    }
    return fc >= fd ? c : d;
}

}  // namespace

EstimationResult parametric_ml_estimate(const PilotCampaign& campaign, const ArrayModel& array,
                                        const AoaSearchGrid& grid, const MlOptions& options) {
    const auto& pts = grid.points();
    const CMatrix steering = kernels::steering_table(campaign.bs_ris_channel(), array, pts);
    const kernels::UtilityField field = kernels::utility_omp(campaign, steering);
    const std::vector<double>& u = field.utility;
    const std::size_t best = field.best();

    EstimationResult result;
    result.aoa_estimate = pts[best];
    if (options.refine) {
        const double lo = std::max(grid.lower(), pts[best] - grid.step());
        const double hi = std::min(grid.upper(), pts[best] + grid.step());
        const double polished = golden_section_max(campaign, array, lo, hi);
        if (ml_utility(campaign, array, polished) > u[best]) result.aoa_estimate = polished;
    }

    const ScalarCoefficient coef =
        result.aoa_estimate == pts[best]
            ? scalar_coefficient_from_projection(field.inner[best], field.norm_sq[best], campaign.pilot_power())
            : estimate_scalar_coefficient(campaign, array, result.aoa_estimate);
    result.gain_estimate = coef.gain;
    result.phase_estimate = coef.phase;
    result.channel_estimate =
        std::polar(std::sqrt(coef.gain), coef.phase) * array_response(array, result.aoa_estimate);
    if (options.record_trace) {
        std::vector<UtilitySample> trace(pts.size());
        for (std::size_t k = 0; k < pts.size(); ++k) trace[k] = {pts[k], u[k]};
        result.utility_trace = std::move(trace);
    }
    return result;
}

CMatrix pseudo_inverse(const CMatrix& m, double rel_tol) {
    if (m.size() == 0) return CMatrix::Zero(m.cols(), m.rows());
    Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& s = svd.singularValues();
    const double cutoff = rel_tol * s[0];
    Eigen::VectorXd s_inv = Eigen::VectorXd::Zero(s.size());
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (s[i] > cutoff && s[i] > 0.0) s_inv[i] = 1.0 / s[i];
    }
    return svd.matrixV() * s_inv.asDiagonal() * svd.matrixU().adjoint();
}

CVector least_squares_estimate(const PilotCampaign& campaign) {
    const CVector& h = campaign.bs_ris_channel().coefficients();
    for (Eigen::Index n = 0; n < h.size(); ++n) {
        if (h[n] == cplx{0.0, 0.0}) throw SingularChannelError("least_squares_estimate: h has a zero entry");
    }
    const CVector x = pseudo_inverse(campaign.config_matrix()) * campaign.received();
    return x.cwiseQuotient(h) / std::sqrt(campaign.pilot_power());
}

std::vector<std::size_t> find_peaks(std::span<const double> values) {
    std::vector<std::size_t> peaks;
    const std::size_t n = values.size();
    constexpr double kLowest = -std::numeric_limits<double>::infinity();
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[j + 1] == values[i]) ++j;
        const double left = i > 0 ? values[i - 1] : kLowest;
        const double right = j + 1 < n ? values[j + 1] : kLowest;
        if (values[i] > left && values[i] > right) peaks.push_back(i);
        i = j + 1;
    }
    std::stable_sort(peaks.begin(), peaks.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
    return peaks;
}

double top_two_peak_gap_db(std::span<const double> values) {
    const auto peaks = find_peaks(values);
    if (peaks.size() < 2) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(values[peaks[0]] / values[peaks[1]]);
}

}  // namespace ris
