// camwave: discrete-phase MIMO radar waveform design experiments.
//
//   camwave solve|baseline|oracle|sweep|beampattern --config <path> [--out <dir>] [--seed <int>]
//
// The output directory may also be overridden through CAMWAVE_OUT_DIR
// (--out takes precedence). Exit codes: 0 success, 2 config error,
// 3 numerical failure, 4 oracle budget exceeded. Failures print a JSON
// object to stderr.

#include "camwave/config.hpp"
#include "camwave/runner.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdlib>
#include <iostream>
#include <optional>

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitBudget = 4;

int report_error(const char* kind, const std::string& message, int code, nlohmann::json extra = {}) {
    nlohmann::json err = {{"kind", kind}, {"message", message}, {"exit_code", code}};
    if (!extra.is_null()) err.update(extra);
    std::cerr << nlohmann::json{{"error", err}}.dump() << "\n";
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Discrete-phase MIMO radar waveform design"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::string> out_dir;
    std::optional<std::uint64_t> seed;

    const std::vector<std::pair<std::string, std::string>> commands = {
        {"solve", "CAM design: hull relaxation plus nearest-point quantization"},
        {"baseline", "continuous-phase arc-constrained baseline"},
        {"oracle", "CAM against exhaustive search on small instances"},
        {"sweep", "CAM and baseline over (N, omega, eta) cells"},
        {"beampattern", "transmit beampatterns of the CAM and baseline designs"},
    };
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config_path, "run configuration file")->required();
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--seed", seed, "random seed");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        return report_error("usage_error", e.what(), kExitConfig);
    }

    try {
        camwave::RunConfig cfg = camwave::load_config(config_path);
        cfg.mode = camwave::parse_mode(app.get_subcommands().front()->get_name());
        if (out_dir) {
            cfg.outputs.directory = *out_dir;
        } else if (const char* env = std::getenv("CAMWAVE_OUT_DIR"); env != nullptr && *env != '\0') {
            cfg.outputs.directory = env;
        }
        if (seed) cfg.solver.seed = *seed;
        const auto result = camwave::run(cfg);
        std::cout << result.summary << "\n";
        for (const auto& f : result.files) std::cout << "  wrote " << f.string() << "\n";
        return 0;
    } catch (const camwave::BudgetExceeded& e) {
        return report_error("budget_exceeded", e.what(), kExitBudget,
                            {{"cardinality", e.cardinality()}, {"budget", e.budget()}});
    } catch (const camwave::ValidationError& e) {
        return report_error("config_error", e.what(), kExitConfig);
    } catch (const camwave::Error& e) {
        return report_error("numerical_error", e.what(), kExitNumerical);
    } catch (const std::exception& e) {
        return report_error("numerical_error", e.what(), kExitNumerical);
    }
}
