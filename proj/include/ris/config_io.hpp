#pragma once

// Experiment configuration files and CSV output.
//
// Config files are flat `key = value` text, one pair per line, `#` starts a comment.
// Angles are given in degrees and converted to radians here. Recognized keys:
//
//   num_elements, spacing_ratio, data_snr_db, pilot_snr_offset_db,
//   pilot_budgets (comma separated), num_trials, ue_angle_min_deg, ue_angle_max_deg,
//   search_min_deg, search_max_deg, grid_points, rng_seed, bs_channel_seed, noise_free

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "ris/simulation.hpp"

namespace ris {

// Applies one `key=value` assignment. Throws ValidationError naming the key on unknown
// keys or values that do not parse as the field's type.
void apply_setting(ExperimentConfig& config, const std::string& key, const std::string& value);

// Reads `text` as a config file on top of the defaults. Throws ParseError with the line.
ExperimentConfig parse_config_text(const std::string& text);

// Defaults, then the file (if non-empty path), then `key=value` overrides; validated.
ExperimentConfig parse_config(const std::filesystem::path& path,
                              const std::vector<std::string>& overrides);

inline constexpr const char* kRateCsvHeader =
    "L,mean_rate_ml,mean_rate_ls,mean_capacity,ratio_ml,ratio_ls,stderr_ml,stderr_ls,trials";
inline constexpr const char* kUtilityCsvHeader = "L,angle_rad,utility_db,is_argmax";

// Rows sorted by L, reals with 6 significant digits.
void write_rate_csv(std::vector<RateCurvePoint> points, std::ostream& out);
void emit_rate_csv(const std::vector<RateCurvePoint>& points, const std::filesystem::path& path);
std::vector<RateCurvePoint> read_rate_csv(std::istream& in);

void write_utility_csv(const UtilityTrace& trace, std::ostream& out);
void emit_utility_csv(const UtilityTrace& trace, const std::filesystem::path& path);

std::string format_estimate_summary(const EstimateOnceSummary& summary);

// Shortest %g rendering with the given significant digits.
std::string format_sig(double value, int digits = 6);

}  // namespace ris
