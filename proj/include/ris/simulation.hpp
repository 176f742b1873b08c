#pragma once

// Monte Carlo experiments: average rate versus pilot budget for the adaptive ML scheme
// and the least-squares baseline, and the evolution of the ML utility over pilots.
//
// Normalization: sigma^2 = 1, |h_n| = 1 and beta = 1, so the per-element data SNR equals
// P_d and all SNR control goes through the transmit powers.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ris/adaptive.hpp"

namespace ris {

struct AngleRange {
    double lower;
    double upper;
};

struct ExperimentConfig {
    int num_elements = 40;
    double spacing_ratio = 0.25;
    double data_snr_db = 0.0;
    double pilot_snr_offset_db = 10.0;
    std::vector<int> pilot_budgets{2, 3, 4, 5, 6, 8, 10, 15, 20, 30, 40};
    int num_trials = 2000;
    AngleRange ue_angle_range{-kPi / 3.0, kPi / 3.0};
    AngleRange search_domain{-kHalfPi, kHalfPi};
    int grid_points = 2000;
    std::uint64_t rng_seed = 1;
    // Seeds the phase profile of the default BS-RIS channel.
    std::uint64_t bs_channel_seed = 2022;
    // Pilots without receiver noise (consistency checks and debugging).
    bool noise_free = false;

    // Throws ValidationError naming the offending field.
    void validate() const;
};

struct PowerScales {
    double data;   // P_d / sigma^2
    double pilot;  // P_p / sigma^2
    double gain;   // beta
};

PowerScales snr_to_powers(const ExperimentConfig& config);

double db_to_linear(double db);
// 10 log10(x); -inf for x == 0.
double linear_to_db(double x);

ArrayModel make_array(const ExperimentConfig& config);
KnownBsRisChannel make_bs_ris_channel(const ExperimentConfig& config);
// Uniform grid over the search domain, plus the plausible pool angles that fall inside it.
AoaSearchGrid make_search_grid(const ExperimentConfig& config);

struct RateCurvePoint {
    int pilot_budget = 0;
    double mean_rate_ml = 0.0;
    double mean_rate_ls = 0.0;
    double mean_capacity = 0.0;
    double ratio_ml = 0.0;
    double ratio_ls = 0.0;
    double stderr_ml = 0.0;
    double stderr_ls = 0.0;
    double stderr_capacity = 0.0;
    int trial_count = 0;
};

// Rate of the RIS configured from a channel estimate (theta_n = arg h_n + arg g_hat_n),
// scored against the true channel.
double rate_from_estimate(const KnownBsRisChannel& h, const CVector& true_channel,
                          const CVector& estimate, double data_snr_scale);

// L distinct columns of the N x N DFT matrix exp(-j 2 pi n k / N), drawn uniformly.
CMatrix random_dft_configurations(int num_elements, int num_pilots, Rng& rng);

// One ML run to the largest budget serves every smaller budget: the configurations chosen
// for pilot i never depend on the final budget. The LS baseline draws fresh configurations
// and noise for every budget.
std::vector<RateCurvePoint> run_rate_experiment(const ExperimentConfig& config);
std::vector<RateCurvePoint> run_rate_experiment(const ExperimentConfig& config,
                                                const KnownBsRisChannel& h);

struct UtilityCurve {
    int pilots = 0;
    std::vector<UtilitySample> samples;  // linear utility
    std::size_t argmax = 0;
};

struct UtilityTrace {
    double true_aoa = 0.0;
    std::vector<UtilityCurve> curves;  // pilots = 2 .. L_max
};

UtilityTrace run_utility_trace(const ExperimentConfig& config, double true_aoa, int max_pilots);

struct EstimateOnceSummary {
    double true_aoa = 0.0;
    double true_phase = 0.0;
    EstimationResult estimate;
    double rate = 0.0;
    double capacity = 0.0;
    double ratio = 0.0;
    std::vector<double> pool_angles;  // angle of the configuration sent with each pilot
};

EstimateOnceSummary run_estimate_once(const ExperimentConfig& config, double true_aoa, int pilots);

}  // namespace ris
