#pragma once

// Run configuration: a flat key = value file with dotted section keys.
//
//   # comment
//   scenario.n_tx = 4
//   scenario.interferer_angles_deg = -50, -10, 40
//   sweep.pairs = 16:6, 32:12, 48:18
//
// Angles are given in degrees and stored in radians. Every key is optional
// (defaults reproduce the four-antenna, three-interferer reference scene);
// unknown or repeated keys are errors.

#include "camwave/model.hpp"
#include "camwave/solver.hpp"
#include "camwave/types.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace camwave {

class ConfigError : public ValidationError {
public:
    ConfigError(const std::string& message, int line = 0)
        : ValidationError(line > 0 ? "line " + std::to_string(line) + ": " + message : message), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

enum class Mode { Cam, Baseline, Oracle, Sweep, Beampattern };

std::string_view mode_name(Mode mode);
/// Accepts the mode names and the CLI alias `solve` for cam.
Mode parse_mode(std::string_view name);

struct OutputSpec {
    std::filesystem::path directory = "out";
    bool csv = true;
    bool json = true;
};

struct SweepSpec {
    std::vector<int> n_samples{8, 16, 24, 32};
    std::vector<std::pair<int, int>> pairs{{16, 6}, {32, 12}, {48, 18}};
    int jobs = 1;
};

struct OracleSpec {
    int trials = 20;
    std::uint64_t budget = kDefaultOracleBudget;
};

struct RunConfig {
    Scenario scenario;
    int omega = 16;
    int eta = 6;
    SolverConfig solver;
    OutputSpec outputs;
    Mode mode = Mode::Cam;
    SweepSpec sweep;
    OracleSpec oracle;
    int beampattern_grid = 721;

    /// Throws ConfigError naming the field and the violated constraint.
    void validate() const;
};

/// Reference scene: N_T = 4, N_R = 8, N = 8, target at 15 deg / 10 dB,
/// interferers at -50, -10, 40 deg / 30 dB, 0 dB noise, Omega = 16, eta = 6.
RunConfig default_config();

RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

}  // namespace camwave
