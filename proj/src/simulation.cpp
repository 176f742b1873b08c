#include "ris/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>

#include "ris/kernels.hpp"

namespace ris {

namespace {

constexpr double kAngleSlack = 1e-12;

// Stream ids per trial: scenario draws, ML pilot noise, LS configurations and noise.
constexpr std::uint64_t kStreamsPerTrial = 3;

struct MeanStderr {
    double mean;
    double stderr_;
};

MeanStderr summarize(const std::vector<double>& xs) {
    const double n = static_cast<double>(xs.size());
    double sum = 0.0;
    for (double x : xs) sum += x;
    const double mean = sum / n;
    if (xs.size() < 2) return {mean, 0.0};
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

}  // namespace

void ExperimentConfig::validate() const {
    if (num_elements < 1) throw ValidationError("num_elements", "must be >= 1");
    if (!(spacing_ratio > 0.0) || !std::isfinite(spacing_ratio)) {
        throw ValidationError("spacing_ratio", "must be positive");
    }
    if (!std::isfinite(data_snr_db)) throw ValidationError("data_snr_db", "must be finite");
    if (!std::isfinite(pilot_snr_offset_db)) throw ValidationError("pilot_snr_offset_db", "must be finite");
    if (pilot_budgets.empty()) throw ValidationError("pilot_budgets", "must not be empty");
    for (int l : pilot_budgets) {
        if (l < 2 || l > num_elements) {
            throw ValidationError("pilot_budgets", "each budget must lie in [2, num_elements]; got " +
                                                       std::to_string(l));
        }
    }
    if (num_trials < 1) throw ValidationError("num_trials", "must be positive");
    if (grid_points < 2) throw ValidationError("grid_points", "must be >= 2");
    if (!(search_domain.lower < search_domain.upper) || search_domain.lower < -kHalfPi - kAngleSlack ||
        search_domain.upper > kHalfPi + kAngleSlack) {
        throw ValidationError("search_domain", "must be an increasing interval within [-90, 90] degrees");
    }
    if (!(ue_angle_range.lower < ue_angle_range.upper)) {
        throw ValidationError("ue_angle_range", "lower bound must be below upper bound");
    }
    if (ue_angle_range.lower < search_domain.lower || ue_angle_range.upper > search_domain.upper) {
        throw ValidationError("ue_angle_range", "must lie inside search_domain");
    }
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double x) {
    if (x <= 0.0) return -std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(x);
}

PowerScales snr_to_powers(const ExperimentConfig& config) {
    const double data = db_to_linear(config.data_snr_db);
    return {data, data * db_to_linear(config.pilot_snr_offset_db), 1.0};
}

ArrayModel make_array(const ExperimentConfig& config) {
    return ArrayModel(config.num_elements, config.spacing_ratio);
}

KnownBsRisChannel make_bs_ris_channel(const ExperimentConfig& config) {
    Rng rng = derive_stream(config.bs_channel_seed, 0);
    return KnownBsRisChannel::random_unit_phases(config.num_elements, rng);
}

AoaSearchGrid make_search_grid(const ExperimentConfig& config) {
    const auto pool = plausible_angles(config.num_elements);
    return AoaSearchGrid::uniform(config.search_domain.lower, config.search_domain.upper,
                                  config.grid_points)
        .with_points(pool.angles);
}

double rate_from_estimate(const KnownBsRisChannel& h, const CVector& true_channel,
                          const CVector& estimate, double data_snr_scale) {
    const RisConfiguration ris = phase_aligned_configuration(h, estimate);
    return achievable_rate(effective_channel(ris, h, true_channel), data_snr_scale);
}

CMatrix random_dft_configurations(int num_elements, int num_pilots, Rng& rng) {
    if (num_pilots < 1 || num_pilots > num_elements) {
        throw DomainError("random_dft_configurations: need 1 <= L <= N distinct columns");
    }
    std::vector<int> cols(static_cast<std::size_t>(num_elements));
    std::iota(cols.begin(), cols.end(), 0);
    // Partial Fisher-Yates: the first num_pilots entries are a uniform draw without replacement.
    for (int i = 0; i < num_pilots; ++i) {
        std::uniform_int_distribution<int> pick(i, num_elements - 1);
        std::swap(cols[i], cols[pick(rng)]);
    }
    CMatrix b(num_pilots, num_elements);
    for (int l = 0; l < num_pilots; ++l) {
        for (int n = 0; n < num_elements; ++n) {
            // Reduce n*k mod N first so the phase stays exact for large products.
            const int nk = (n * cols[l]) % num_elements;
            b(l, n) = std::polar(1.0, -kTwoPi * nk / num_elements);
        }
    }
    return b;
}

std::vector<RateCurvePoint> run_rate_experiment(const ExperimentConfig& config) {
    config.validate();
    return run_rate_experiment(config, make_bs_ris_channel(config));
}

std::vector<RateCurvePoint> run_rate_experiment(const ExperimentConfig& config,
                                                const KnownBsRisChannel& h) {
    config.validate();
    if (h.size() != config.num_elements) {
        throw DimensionError("run_rate_experiment: h length does not match num_elements");
    }
    std::vector<int> budgets = config.pilot_budgets;
    std::sort(budgets.begin(), budgets.end());
    budgets.erase(std::unique(budgets.begin(), budgets.end()), budgets.end());
    const int max_budget = budgets.back();
    const std::size_t nb = budgets.size();

    const PowerScales powers = snr_to_powers(config);
    const ArrayModel array = make_array(config);
    const AdaptiveEstimator estimator(h, array, make_search_grid(config));
    AdaptiveOptions ml_options;
    ml_options.noise_std = config.noise_free ? 0.0 : 1.0;

    const int trials = config.num_trials;
    std::vector<double> cap(static_cast<std::size_t>(trials));
    std::vector<std::vector<double>> rate_ml(nb, std::vector<double>(trials));
    std::vector<std::vector<double>> rate_ls(nb, std::vector<double>(trials));

    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 8)
    for (int t = 0; t < trials; ++t) {
        try {
            const auto base = static_cast<std::uint64_t>(t) * kStreamsPerTrial;
            Rng scenario = derive_stream(config.rng_seed, base);
            Rng ml_rng = derive_stream(config.rng_seed, base + 1);
            Rng ls_rng = derive_stream(config.rng_seed, base + 2);

            std::uniform_real_distribution<double> aoa_dist(config.ue_angle_range.lower,
                                                            config.ue_angle_range.upper);
            std::uniform_real_distribution<double> phase_dist(0.0, kTwoPi);
            const double aoa = aoa_dist(scenario);
            const double phase = phase_dist(scenario);
            const LosChannel truth(powers.gain, phase, aoa);
            const CVector g = expand_channel(truth, array);
            cap[t] = capacity(h, g, powers.data);

            const AdaptiveRunRecord run = estimator.run(truth, max_budget, powers.pilot, ml_rng, ml_options);
            for (std::size_t b = 0; b < nb; ++b) {
                const auto& step = run.steps[static_cast<std::size_t>(budgets[b] - 1)];
                rate_ml[b][t] = rate_from_estimate(h, g, step.estimate->channel_estimate, powers.data);
            }

            for (std::size_t b = 0; b < nb; ++b) {
                const CMatrix configs = random_dft_configurations(config.num_elements, budgets[b], ls_rng);
                CVector y(budgets[b]);
                for (int l = 0; l < budgets[b]; ++l) {
                    const RisConfiguration row(configs.row(l).transpose());
                    y[l] = simulate_pilot_reception(row, h, g, powers.pilot, ml_options.noise_std, ls_rng);
                }
                const CVector g_ls = least_squares_estimate(PilotCampaign(configs, y, powers.pilot, h));
                rate_ls[b][t] = rate_from_estimate(h, g, g_ls, powers.data);
            }
        } catch (...) {
#pragma omp critical(ris_rate_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);

    const MeanStderr cap_stats = summarize(cap);
    std::vector<RateCurvePoint> points;
    points.reserve(nb);
    for (std::size_t b = 0; b < nb; ++b) {
        const MeanStderr ml = summarize(rate_ml[b]);
        const MeanStderr ls = summarize(rate_ls[b]);
        RateCurvePoint p;
        p.pilot_budget = budgets[b];
        p.mean_rate_ml = ml.mean;
        p.mean_rate_ls = ls.mean;
        p.mean_capacity = cap_stats.mean;
        p.ratio_ml = ml.mean / cap_stats.mean;
        p.ratio_ls = ls.mean / cap_stats.mean;
        p.stderr_ml = ml.stderr_;
        p.stderr_ls = ls.stderr_;
        p.stderr_capacity = cap_stats.stderr_;
        p.trial_count = trials;
        points.push_back(p);
    }
    return points;
}

namespace {

void check_true_aoa(const ExperimentConfig& config, double true_aoa) {
    if (!(true_aoa >= config.ue_angle_range.lower - kAngleSlack &&
          true_aoa <= config.ue_angle_range.upper + kAngleSlack)) {
        throw ValidationError("true_aoa", "must lie inside ue_angle_range");
    }
}

struct SingleRun {
    AdaptiveRunRecord record;
    CVector true_channel;
    double true_phase;
};

SingleRun single_adaptive_run(const ExperimentConfig& config, const KnownBsRisChannel& h,
                              double true_aoa, int pilots, bool record_traces) {
    config.validate();
    check_true_aoa(config, true_aoa);
    const PowerScales powers = snr_to_powers(config);
    const ArrayModel array = make_array(config);
    const AdaptiveEstimator estimator(h, array, make_search_grid(config));

    Rng scenario = derive_stream(config.rng_seed, 0);
    Rng noise = derive_stream(config.rng_seed, 1);
    std::uniform_real_distribution<double> phase_dist(0.0, kTwoPi);
    const LosChannel truth(powers.gain, phase_dist(scenario), true_aoa);

    AdaptiveOptions options;
    options.noise_std = config.noise_free ? 0.0 : 1.0;
    options.record_traces = record_traces;
    return {estimator.run(truth, pilots, powers.pilot, noise, options), expand_channel(truth, array),
            truth.phase()};
}

}  // namespace

UtilityTrace run_utility_trace(const ExperimentConfig& config, double true_aoa, int max_pilots) {
    const SingleRun run =
        single_adaptive_run(config, make_bs_ris_channel(config), true_aoa, max_pilots, true);
    UtilityTrace trace;
    trace.true_aoa = true_aoa;
    for (const auto& step : run.record.steps) {
        if (!step.estimate) continue;
        UtilityCurve curve;
        curve.pilots = step.pilot_index;
        curve.samples = *step.estimate->utility_trace;
        // The estimate is a grid point; degenerate directions never win even at utility 0.
        const auto hit = std::find_if(curve.samples.begin(), curve.samples.end(),
                                      [&](const UtilitySample& s) { return s.angle == step.estimate->aoa_estimate; });
        curve.argmax = static_cast<std::size_t>(hit - curve.samples.begin());
        trace.curves.push_back(std::move(curve));
    }
    return trace;
}

EstimateOnceSummary run_estimate_once(const ExperimentConfig& config, double true_aoa, int pilots) {
    const KnownBsRisChannel h = make_bs_ris_channel(config);
    const SingleRun run = single_adaptive_run(config, h, true_aoa, pilots, false);
    const PowerScales powers = snr_to_powers(config);

    EstimateOnceSummary s;
    s.true_aoa = true_aoa;
    s.true_phase = run.true_phase;
    s.estimate = run.record.final_estimate;
    s.rate = rate_from_estimate(h, run.true_channel, s.estimate.channel_estimate, powers.data);
    s.capacity = capacity(h, run.true_channel, powers.data);
    s.ratio = s.rate / s.capacity;
    for (const auto& step : run.record.steps) s.pool_angles.push_back(step.config_angle);
    return s;
}

}  // namespace ris
