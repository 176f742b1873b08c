#include "ris/adaptive.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "ris/kernels.hpp"

namespace ris {

PlausibleAngleSet plausible_angles(int num_elements) {
    if (num_elements < 1) throw DomainError("plausible_angles: N must be >= 1");
    PlausibleAngleSet set;
    const int lo = -((num_elements - 1) / 2);
    const int hi = num_elements / 2;
    for (int m = lo; m <= hi; ++m) {
        const double s = 2.0 * m / num_elements;
        set.indices.push_back(m);
        set.sines.push_back(s);
        set.angles.push_back(std::asin(s));
    }
    return set;
}

RisConfiguration optimal_configuration(const KnownBsRisChannel& h, double aoa,
                                       const ArrayModel& array) {
    if (h.size() != array.num_elements()) {
        throw DimensionError("optimal_configuration: h length does not match array size");
    }
    const CVector a = array_response(array, aoa);
    CVector theta(a.size());
    for (Eigen::Index n = 0; n < a.size(); ++n) {
        theta[n] = std::polar(1.0, -safe_arg(h.coefficients()[n])) * std::conj(a[n]);
    }
    return RisConfiguration(std::move(theta));
}

double config_correlation(const RisConfiguration& a, const RisConfiguration& b) {
    if (a.size() != b.size()) throw DimensionError("config_correlation: length mismatch");
    return std::abs(a.entries().dot(b.entries()));
}

ConfigurationPool::ConfigurationPool(std::vector<Entry> entries)
    : entries_(std::move(entries)), taken_(entries_.size(), false) {}

const ConfigurationPool::Entry& ConfigurationPool::take(std::size_t slot) {
    if (slot >= entries_.size()) throw ExhaustedPoolError("pool slot out of range");
    if (taken_[slot]) {
        throw ExhaustedPoolError("pool configuration " + std::to_string(slot) + " already used");
    }
    taken_[slot] = true;
    used_.push_back(slot);
    return entries_[slot];
}

std::size_t ConfigurationPool::best_match(const RisConfiguration& target) const {
    if (remaining() == 0) throw ExhaustedPoolError("configuration pool is exhausted");
    std::size_t best = entries_.size();
    double best_corr = -1.0;
    for (std::size_t s = 0; s < entries_.size(); ++s) {
        if (taken_[s]) continue;
        const double c = config_correlation(target, entries_[s].config);
        if (c > best_corr) {
            best_corr = c;
            best = s;
        }
    }
    return best;
}

std::size_t ConfigurationPool::nearest_sine(double sine) const {
    if (remaining() == 0) throw ExhaustedPoolError("configuration pool is exhausted");
    std::size_t best = entries_.size();
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < entries_.size(); ++s) {
        if (taken_[s]) continue;
        const double d = std::abs(entries_[s].sine - sine);
        if (d < best_dist) {
            best_dist = d;
            best = s;
        }
    }
    return best;
}

ConfigurationPool build_configuration_pool(const KnownBsRisChannel& h,
                                           const PlausibleAngleSet& angles,
                                           const ArrayModel& array) {
    std::vector<ConfigurationPool::Entry> entries;
    entries.reserve(angles.size());
    for (std::size_t i = 0; i < angles.size(); ++i) {
        entries.push_back({angles.indices[i], angles.sines[i], angles.angles[i],
                           optimal_configuration(h, angles.angles[i], array)});
    }
    return ConfigurationPool(std::move(entries));
}

std::array<ConfigurationPool::Entry, 2> select_initial_pair(ConfigurationPool& pool) {
    if (pool.remaining() < 2) {
        throw ExhaustedPoolError("select_initial_pair: fewer than two configurations left");
    }
    const auto& first = pool.take(pool.nearest_sine(-0.5));
    const auto& second = pool.take(pool.nearest_sine(0.5));
    return {first, second};
}

AdaptiveEstimator::AdaptiveEstimator(KnownBsRisChannel h, ArrayModel array, AoaSearchGrid grid)
    : h_(std::move(h)),
      array_(array),
      grid_(std::move(grid)),
      pool_(build_configuration_pool(h_, plausible_angles(array_.num_elements()), array_)) {
    const CMatrix steering = kernels::steering_table(h_, array_, grid_.points());
    CMatrix configs(static_cast<Eigen::Index>(pool_.size()), array_.num_elements());
    for (std::size_t s = 0; s < pool_.size(); ++s) {
        configs.row(static_cast<Eigen::Index>(s)) = pool_.entry(s).config.entries().transpose();
    }
    pool_projections_ = kernels::project_rows_omp(configs, steering).transpose();
}

namespace {

EstimationResult estimate_from_accumulator(const kernels::UtilityAccumulator& acc,
                                           const AoaSearchGrid& grid, const ArrayModel& array,
                                           double pilot_power, bool record_trace,
                                           std::vector<double>& utilities) {
    kernels::UtilityField field = acc.field();
    const std::size_t best = field.best();
    const ScalarCoefficient coef =
        scalar_coefficient_from_projection(field.inner[best], field.norm_sq[best], pilot_power);
    utilities = std::move(field.utility);
    EstimationResult est;
    est.aoa_estimate = grid.points()[best];
    est.gain_estimate = coef.gain;
    est.phase_estimate = coef.phase;
    est.channel_estimate =
        std::polar(std::sqrt(coef.gain), coef.phase) * array_response(array, est.aoa_estimate);
    if (record_trace) {
        std::vector<UtilitySample> trace(utilities.size());
        for (std::size_t k = 0; k < utilities.size(); ++k) trace[k] = {grid.points()[k], utilities[k]};
        est.utility_trace = std::move(trace);
    }
    return est;
}

}  // namespace

AdaptiveRunRecord AdaptiveEstimator::run(const LosChannel& truth, int budget, double pilot_power,
                                         Rng& rng, const AdaptiveOptions& options) const {
    if (budget < 2) throw InsufficientPilotsError("adaptive estimation needs at least two pilots");
    if (budget > static_cast<int>(pool_.size())) {
        throw ExhaustedPoolError("pilot budget " + std::to_string(budget) + " exceeds the " +
                                 std::to_string(pool_.size()) + " plausible configurations");
    }
    if (!(options.noise_std >= 0.0)) throw DomainError("noise_std must be nonnegative");

    const CVector g = expand_channel(truth, array_);
    ConfigurationPool pool = pool_;
    const double h_sum = h_.coefficients().cwiseAbs().sum();
    kernels::UtilityAccumulator acc(grid_.size(), h_sum * h_sum);
    PilotCampaign campaign = PilotCampaign::empty(pilot_power, h_);
    AdaptiveRunRecord record{{}, {}, campaign, false};

    auto send = [&](std::size_t slot) {
        const auto& entry = pool.take(slot);
        const cplx y = simulate_pilot_reception(entry.config, h_, g, pilot_power, options.noise_std, rng);
        const cplx* col = pool_projections_.col(static_cast<Eigen::Index>(slot)).data();
        acc.add_pilot(std::span<const cplx>(col, grid_.size()), y);
        campaign = campaign.with_pilot(entry.config, y);
        record.steps.push_back({static_cast<int>(record.steps.size()) + 1, entry.index, entry.angle, y,
                                std::nullopt});
    };

    if (options.initial_angles) {
        send(pool.nearest_sine(std::sin(options.initial_angles->first)));
        send(pool.nearest_sine(std::sin(options.initial_angles->second)));
    } else {
        send(pool.nearest_sine(-0.5));
        send(pool.nearest_sine(0.5));
    }

    std::vector<double> utilities;
    for (int i = 2; i <= budget; ++i) {
        EstimationResult est =
            estimate_from_accumulator(acc, grid_, array_, pilot_power, options.record_traces, utilities);
        const double aoa_hat = est.aoa_estimate;
        record.steps.back().estimate = est;
        record.final_estimate = std::move(est);
        if (i == budget) break;
        if (options.early_stop_gap_db && top_two_peak_gap_db(utilities) >= *options.early_stop_gap_db) {
            record.terminated_early = true;
            break;
        }
        send(pool.best_match(optimal_configuration(h_, aoa_hat, array_)));
    }
    record.campaign = std::move(campaign);
    return record;
}

AdaptiveRunRecord run_adaptive_estimation(const LosChannel& truth, const KnownBsRisChannel& h,
                                          const ArrayModel& array, int budget, double pilot_power,
                                          std::uint64_t rng_seed, const AoaSearchGrid& grid,
                                          const AdaptiveOptions& options) {
    AdaptiveEstimator estimator(h, array, grid);
    Rng rng = derive_stream(rng_seed, 0);
    return estimator.run(truth, budget, pilot_power, rng, options);
}

}  // namespace ris
