// ris_sim: command-line front end for the RIS channel-estimation simulator.
//
//   ris_sim rate-curve    --config <path> [--set key=value]... --out <csv>
//   ris_sim utility-trace --true-aoa-deg <v> --l-max <n> --out <csv>
//   ris_sim estimate-once --true-aoa-deg <v> --l <n> [--noise-free]
//   ris_sim validate
//
// RIS_SIM_SEED overrides rng_seed. Exit codes: 0 ok, 2 validation/parse error,
// 3 runtime numerical error.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ris/config_io.hpp"
#include "ris/validation.hpp"

namespace {

constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;

struct CommonArgs {
    std::string config_path;
    std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "key=value configuration file");
    cmd->add_option("--set", args.overrides, "override a configuration key (key=value)")
        ->allow_extra_args(false);
}

ris::ExperimentConfig load_config(const CommonArgs& args) {
    std::vector<std::string> overrides = args.overrides;
    if (const char* seed = std::getenv("RIS_SIM_SEED"); seed != nullptr && *seed != '\0') {
        overrides.push_back(std::string("rng_seed=") + seed);
    }
    return ris::parse_config(args.config_path, overrides);
}

double deg_to_rad(double d) { return d * ris::kPi / 180.0; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Parametric ML channel estimation for RIS-aided LOS links"};
    app.require_subcommand(1);

    CommonArgs rate_args;
    std::string rate_out;
    auto* rate = app.add_subcommand("rate-curve", "average rate versus pilot budget (CSV)");
    add_common(rate, rate_args);
    rate->add_option("--out", rate_out, "output CSV path")->required();

    CommonArgs trace_args;
    std::string trace_out;
    double trace_aoa_deg = -45.0;
    int trace_l_max = 10;
    auto* trace = app.add_subcommand("utility-trace", "ML utility over the grid for L = 2..l-max (CSV)");
    add_common(trace, trace_args);
    trace->add_option("--true-aoa-deg", trace_aoa_deg, "true AOA in degrees")->required();
    trace->add_option("--l-max", trace_l_max, "largest pilot count")->required();
    trace->add_option("--out", trace_out, "output CSV path")->required();

    CommonArgs once_args;
    double once_aoa_deg = 0.0;
    int once_l = 5;
    bool once_noise_free = false;
    auto* once = app.add_subcommand("estimate-once", "one adaptive estimation with a printed summary");
    add_common(once, once_args);
    once->add_option("--true-aoa-deg", once_aoa_deg, "true AOA in degrees")->required();
    once->add_option("--l", once_l, "pilot budget")->required();
    once->add_flag("--noise-free", once_noise_free, "send pilots without receiver noise");

    std::uint64_t validate_seed = 1;
    auto* validate = app.add_subcommand("validate", "run the noise-free consistency checks");
    validate->add_option("--seed", validate_seed, "seed for the randomized checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInput;
    }

    try {
        if (rate->parsed()) {
            const auto config = load_config(rate_args);
            ris::emit_rate_csv(ris::run_rate_experiment(config), rate_out);
        } else if (trace->parsed()) {
            const auto config = load_config(trace_args);
            ris::emit_utility_csv(ris::run_utility_trace(config, deg_to_rad(trace_aoa_deg), trace_l_max),
                                  trace_out);
        } else if (once->parsed()) {
            auto config = load_config(once_args);
            if (once_noise_free) config.noise_free = true;
            std::cout << ris::format_estimate_summary(
                ris::run_estimate_once(config, deg_to_rad(once_aoa_deg), once_l));
        } else if (validate->parsed()) {
            bool ok = true;
            for (const auto& r : ris::run_noise_free_suite(validate_seed)) {
                std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << " -- " << r.detail << '\n';
                ok = ok && r.passed;
            }
            return ok ? 0 : 1;
        }
    } catch (const ris::ValidationError& e) {
        std::cerr << "invalid configuration: " << e.what() << '\n';
        return kExitInput;
    } catch (const ris::ParseError& e) {
        std::cerr << "config parse error: " << e.what() << '\n';
        return kExitInput;
    } catch (const ris::IoError& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return kExitInput;
    } catch (const ris::InsufficientPilotsError& e) {
        std::cerr << "invalid pilot budget: " << e.what() << '\n';
        return kExitInput;
    } catch (const ris::ExhaustedPoolError& e) {
        std::cerr << "invalid pilot budget: " << e.what() << '\n';
        return kExitInput;
    } catch (const ris::DomainError& e) {
        std::cerr << "invalid argument: " << e.what() << '\n';
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
    return 0;
}
