#include "ris/config_io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace ris {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
    T value{};
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (!text.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || text.empty()) {
        throw ValidationError(key, "cannot parse '" + text + "'");
    }
    return value;
}

bool parse_bool(const std::string& key, const std::string& text) {
    if (text == "1" || text == "true" || text == "yes") return true;
    if (text == "0" || text == "false" || text == "no") return false;
    throw ValidationError(key, "expected a boolean, got '" + text + "'");
}

std::vector<int> parse_int_list(const std::string& key, const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_number<int>(key, trim(item)));
    if (out.empty()) throw ValidationError(key, "empty list");
    return out;
}

double deg(double d) { return d * kPi / 180.0; }

}  // namespace

void apply_setting(ExperimentConfig& c, const std::string& key_raw, const std::string& value_raw) {
    const std::string key = trim(key_raw);
    const std::string v = trim(value_raw);
    if (key == "num_elements") {
        c.num_elements = parse_number<int>(key, v);
    } else if (key == "spacing_ratio") {
        c.spacing_ratio = parse_number<double>(key, v);
    } else if (key == "data_snr_db") {
        c.data_snr_db = parse_number<double>(key, v);
    } else if (key == "pilot_snr_offset_db") {
        c.pilot_snr_offset_db = parse_number<double>(key, v);
    } else if (key == "pilot_budgets") {
        c.pilot_budgets = parse_int_list(key, v);
    } else if (key == "num_trials") {
        c.num_trials = parse_number<int>(key, v);
    } else if (key == "ue_angle_min_deg") {
        c.ue_angle_range.lower = deg(parse_number<double>(key, v));
    } else if (key == "ue_angle_max_deg") {
        c.ue_angle_range.upper = deg(parse_number<double>(key, v));
    } else if (key == "search_min_deg") {
        c.search_domain.lower = deg(parse_number<double>(key, v));
    } else if (key == "search_max_deg") {
        c.search_domain.upper = deg(parse_number<double>(key, v));
    } else if (key == "grid_points") {
        c.grid_points = parse_number<int>(key, v);
    } else if (key == "rng_seed") {
        c.rng_seed = parse_number<std::uint64_t>(key, v);
    } else if (key == "bs_channel_seed") {
        c.bs_channel_seed = parse_number<std::uint64_t>(key, v);
    } else if (key == "noise_free") {
        c.noise_free = parse_bool(key, v);
    } else {
        throw ValidationError(key, "unknown configuration key");
    }
}

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig config;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError(line_no, "expected key = value");
        try {
            apply_setting(config, line.substr(0, eq), line.substr(eq + 1));
        } catch (const ValidationError& e) {
            throw ParseError(line_no, e.what());
        }
    }
    return config;
}

ExperimentConfig parse_config(const std::filesystem::path& path,
                              const std::vector<std::string>& overrides) {
    ExperimentConfig config;
    if (!path.empty()) {
        std::ifstream in(path);
        if (!in) throw IoError("cannot open config file " + path.string());
        std::stringstream buf;
        buf << in.rdbuf();
        config = parse_config_text(buf.str());
    }
    for (const auto& o : overrides) {
        const auto eq = o.find('=');
        if (eq == std::string::npos) throw ValidationError(o, "override must be key=value");
        apply_setting(config, o.substr(0, eq), o.substr(eq + 1));
    }
    config.validate();
    return config;
}

std::string format_sig(double value, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, value);
    return buf;
}

void write_rate_csv(std::vector<RateCurvePoint> points, std::ostream& out) {
    std::stable_sort(points.begin(), points.end(),
                     [](const auto& a, const auto& b) { return a.pilot_budget < b.pilot_budget; });
    out << kRateCsvHeader << '\n';
    for (const auto& p : points) {
        out << p.pilot_budget << ',' << format_sig(p.mean_rate_ml) << ',' << format_sig(p.mean_rate_ls)
            << ',' << format_sig(p.mean_capacity) << ',' << format_sig(p.ratio_ml) << ','
            << format_sig(p.ratio_ls) << ',' << format_sig(p.stderr_ml) << ','
            << format_sig(p.stderr_ls) << ',' << p.trial_count << '\n';
    }
}

void emit_rate_csv(const std::vector<RateCurvePoint>& points, const std::filesystem::path& path) {
    if (points.empty()) throw DomainError("emit_rate_csv: no points to write");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    write_rate_csv(points, out);
    if (!out) throw IoError("write to " + path.string() + " failed");
}

std::vector<RateCurvePoint> read_rate_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || trim(line) != kRateCsvHeader) {
        throw ParseError(1, "missing rate CSV header");
    }
    std::vector<RateCurvePoint> points;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string item;
        while (std::getline(ss, item, ',')) f.push_back(trim(item));
        if (f.size() != 9) throw ParseError(line_no, "expected 9 fields");
        try {
            RateCurvePoint p;
            p.pilot_budget = parse_number<int>("L", f[0]);
            p.mean_rate_ml = parse_number<double>("mean_rate_ml", f[1]);
            p.mean_rate_ls = parse_number<double>("mean_rate_ls", f[2]);
            p.mean_capacity = parse_number<double>("mean_capacity", f[3]);
            p.ratio_ml = parse_number<double>("ratio_ml", f[4]);
            p.ratio_ls = parse_number<double>("ratio_ls", f[5]);
            p.stderr_ml = parse_number<double>("stderr_ml", f[6]);
            p.stderr_ls = parse_number<double>("stderr_ls", f[7]);
            p.trial_count = parse_number<int>("trials", f[8]);
            points.push_back(p);
        } catch (const ValidationError& e) {
            throw ParseError(line_no, e.what());
        }
    }
    return points;
}

void write_utility_csv(const UtilityTrace& trace, std::ostream& out) {
    out << kUtilityCsvHeader << '\n';
    for (const auto& curve : trace.curves) {
        for (std::size_t k = 0; k < curve.samples.size(); ++k) {
            const auto& s = curve.samples[k];
            out << curve.pilots << ',' << format_sig(s.angle, 10) << ','
                << format_sig(linear_to_db(s.utility)) << ',' << (k == curve.argmax ? 1 : 0) << '\n';
        }
    }
}

void emit_utility_csv(const UtilityTrace& trace, const std::filesystem::path& path) {
    if (trace.curves.empty()) throw DomainError("emit_utility_csv: empty trace");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    write_utility_csv(trace, out);
    if (!out) throw IoError("write to " + path.string() + " failed");
}

std::string format_estimate_summary(const EstimateOnceSummary& s) {
    const double to_deg = 180.0 / kPi;
    std::ostringstream out;
    out << "true AOA:        " << format_sig(s.true_aoa, 8) << " rad (" << format_sig(s.true_aoa * to_deg, 8)
        << " deg)\n";
    out << "estimated AOA:   " << format_sig(s.estimate.aoa_estimate, 8) << " rad ("
        << format_sig(s.estimate.aoa_estimate * to_deg, 8) << " deg)\n";
    out << "estimated gain:  " << format_sig(s.estimate.gain_estimate) << '\n';
    out << "estimated phase: " << format_sig(s.estimate.phase_estimate) << " rad (true "
        << format_sig(s.true_phase) << ")\n";
    out << "achieved rate:   " << format_sig(s.rate) << " bit/s/Hz\n";
    out << "capacity:        " << format_sig(s.capacity) << " bit/s/Hz\n";
    out << "ratio:           " << format_sig(s.ratio) << '\n';
    out << "pool angles (deg):";
    for (std::size_t i = 0; i < s.pool_angles.size(); ++i) {
        out << (i == 0 ? " " : ", ") << format_sig(s.pool_angles[i] * to_deg);
    }
    out << '\n';
    return out.str();
}

}  // namespace ris
