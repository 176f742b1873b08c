#pragma once

// Adaptive choice of RIS configurations while pilots are being sent.
//
// Candidate configurations are phase-compensated steering vectors
// diag(exp(-j arg h)) a*(phi) over N plausible angles whose sines are equally spaced.
// Two far-apart candidates start the campaign; after every pilot the ML estimate is
// refreshed and the unused candidate closest to the configuration that would be
// optimal for that estimate is sent next.

#include <array>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "ris/estimators.hpp"
#include "ris/noise.hpp"

namespace ris {

// Angles arcsin(2m/N), m = -floor((N-1)/2) .. floor(N/2), ascending.
struct PlausibleAngleSet {
    std::vector<int> indices;    // m
    std::vector<double> sines;   // 2m/N, exact
    std::vector<double> angles;  // arcsin(2m/N)

    std::size_t size() const noexcept { return angles.size(); }
};

PlausibleAngleSet plausible_angles(int num_elements);

// Entry n = exp(-j arg h_n) conj(a(aoa)_n).
RisConfiguration optimal_configuration(const KnownBsRisChannel& h, double aoa,
                                       const ArrayModel& array);

// |a^H b|
double config_correlation(const RisConfiguration& a, const RisConfiguration& b);

class ConfigurationPool {
public:
    struct Entry {
        int index;    // m in the plausible-angle set
        double sine;  // 2m/N
        double angle;
        RisConfiguration config;
    };

    explicit ConfigurationPool(std::vector<Entry> entries);

    const std::vector<Entry>& entries() const noexcept { return entries_; }
    const Entry& entry(std::size_t slot) const { return entries_.at(slot); }
    std::size_t size() const noexcept { return entries_.size(); }
    std::size_t remaining() const noexcept { return entries_.size() - used_.size(); }
    bool is_used(std::size_t slot) const { return taken_.at(slot); }
    // Slots in the order they were consumed.
    const std::vector<std::size_t>& used() const noexcept { return used_; }

    // Marks a slot consumed; throws ExhaustedPoolError if it already was.
    const Entry& take(std::size_t slot);

    // Unused slot maximizing |target^H theta|; ties go to the smaller angle.
    std::size_t best_match(const RisConfiguration& target) const;

    // Unused slot whose sine is closest to `sine`; ties go to the smaller angle.
    std::size_t nearest_sine(double sine) const;

private:
    std::vector<Entry> entries_;
    std::vector<bool> taken_;
    std::vector<std::size_t> used_;
};

ConfigurationPool build_configuration_pool(const KnownBsRisChannel& h,
                                           const PlausibleAngleSet& angles,
                                           const ArrayModel& array);

// Takes the unused configurations with sines nearest -1/2 and +1/2, in that order.
std::array<ConfigurationPool::Entry, 2> select_initial_pair(ConfigurationPool& pool);

struct AdaptiveOptions {
    double noise_std = 1.0;
    // Prior knowledge of the UE direction: start from the pool entries nearest these angles.
    std::optional<std::pair<double, double>> initial_angles;
    // Stop before the budget once the top two utility peaks differ by at least this many dB.
    std::optional<double> early_stop_gap_db;
    bool record_traces = false;
};

struct PilotStep {
    int pilot_index;  // 1-based
    int config_index;  // m of the configuration sent
    double config_angle;
    cplx received;
    // ML estimate using pilots 1..pilot_index; present from the second pilot on.
    std::optional<EstimationResult> estimate;
};

struct AdaptiveRunRecord {
    std::vector<PilotStep> steps;
    EstimationResult final_estimate;
    PilotCampaign campaign;
    bool terminated_early = false;
};

// Precomputes everything that depends only on (h, array, grid): the steering table,
// the configuration pool and the pool's projections on the grid. run() is const and
// may be called concurrently from several threads with separate engines.
class AdaptiveEstimator {
public:
    AdaptiveEstimator(KnownBsRisChannel h, ArrayModel array, AoaSearchGrid grid);

    AdaptiveRunRecord run(const LosChannel& truth, int budget, double pilot_power, Rng& rng,
                          const AdaptiveOptions& options = {}) const;

    const KnownBsRisChannel& bs_ris_channel() const noexcept { return h_; }
    const ArrayModel& array() const noexcept { return array_; }
    const AoaSearchGrid& grid() const noexcept { return grid_; }
    const ConfigurationPool& pool_template() const noexcept { return pool_; }

private:
    KnownBsRisChannel h_;
    ArrayModel array_;
    AoaSearchGrid grid_;
    ConfigurationPool pool_;
    CMatrix pool_projections_;  // G x N_pool, column = one configuration on the whole grid
};

AdaptiveRunRecord run_adaptive_estimation(const LosChannel& truth, const KnownBsRisChannel& h,
                                          const ArrayModel& array, int budget, double pilot_power,
                                          std::uint64_t rng_seed, const AoaSearchGrid& grid,
                                          const AdaptiveOptions& options = {});

}  // namespace ris
