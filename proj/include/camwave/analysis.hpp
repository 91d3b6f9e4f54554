#pragma once

#include "camwave/model.hpp"
#include "camwave/solver.hpp"
#include "camwave/types.hpp"

#include <string>
#include <vector>

namespace camwave {

inline constexpr int kDefaultBeampatternGrid = 721;

struct Beampattern {
    std::vector<double> angles_rad;
    std::vector<double> power;     // linear, before the log
    std::vector<double> power_db;
    std::vector<double> power_db_normalized;  // relative to the grid peak

    std::size_t peak_index() const;
};

/// Transmit power sum_n |a_t(theta)^T s_n|^2 at each requested angle.
std::vector<double> transmit_power(const Waveform& s, const Scenario& scenario, const std::vector<double>& angles_rad);

/// Transmit beampattern on a uniform grid over [-90, 90] degrees.
Beampattern beampattern(const Waveform& s, const Scenario& scenario, int grid_size = kDefaultBeampatternGrid);

struct GapRow {
    std::string label;
    double cam_sinr_db = 0.0;
    double baseline_sinr_db = 0.0;
    double gap_db = 0.0;  // baseline minus CAM
};

struct GapSummary {
    std::vector<GapRow> rows;
    double median_gap_db = 0.0;
    double max_gap_db = 0.0;
};

struct GapInput {
    std::string label;
    const SolverReport* cam = nullptr;
    const SolverReport* baseline = nullptr;
};

GapSummary sinr_gap_report(const std::vector<GapInput>& inputs);

/// Median of a non-empty sample (mean of the two middle values for even sizes).
double median(std::vector<double> values);

}  // namespace camwave
