#include "camwave/analysis.hpp"

#include <algorithm>
#include <cmath>

namespace camwave {

std::size_t Beampattern::peak_index() const {
    return static_cast<std::size_t>(std::max_element(power.begin(), power.end()) - power.begin());
}

std::vector<double> transmit_power(const Waveform& s, const Scenario& scenario, const std::vector<double>& angles_rad) {
    if (s.entries.size() != scenario.tx_length()) {
        throw DimensionError("beampattern: waveform length " + std::to_string(s.entries.size()) + ", expected " +
                             std::to_string(scenario.tx_length()));
    }
    // Snapshot matrix, one column per snapshot s_n.
    const Eigen::Map<const CMatrix> snapshots(s.entries.data(), scenario.n_tx, scenario.n_samples);
    std::vector<double> out;
    out.reserve(angles_rad.size());
    for (double theta : angles_rad) {
        const CVector a = steering_vector(theta, scenario.n_tx);
        out.push_back((a.transpose() * snapshots).squaredNorm());
    }
    return out;
}

Beampattern beampattern(const Waveform& s, const Scenario& scenario, int grid_size) {
    if (grid_size < 2) throw ValidationError("beampattern grid_size must be >= 2");
    Beampattern bp;
    bp.angles_rad.resize(static_cast<std::size_t>(grid_size));
    for (int i = 0; i < grid_size; ++i) {
        bp.angles_rad[static_cast<std::size_t>(i)] = -kPi / 2.0 + kPi * i / (grid_size - 1);
    }
    bp.power = transmit_power(s, scenario, bp.angles_rad);
    const double peak = *std::max_element(bp.power.begin(), bp.power.end());
    for (double p : bp.power) {
        bp.power_db.push_back(linear_to_db(p));
        bp.power_db_normalized.push_back(linear_to_db(p / peak));
    }
    return bp;
}

double median(std::vector<double> values) {
    if (values.empty()) throw ValidationError("median of an empty sample");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

GapSummary sinr_gap_report(const std::vector<GapInput>& inputs) {
    if (inputs.empty()) throw ValidationError("sinr_gap_report needs at least one configuration");
    GapSummary summary;
    std::vector<double> gaps;
    for (const auto& in : inputs) {
        if (in.cam == nullptr || in.baseline == nullptr) throw ValidationError("sinr_gap_report: missing report");
        GapRow row;
        row.label = in.label;
        row.cam_sinr_db = in.cam->final_sinr_db;
        row.baseline_sinr_db = in.baseline->final_sinr_db;
        row.gap_db = row.baseline_sinr_db - row.cam_sinr_db;
        gaps.push_back(row.gap_db);
        summary.rows.push_back(std::move(row));
    }
    summary.median_gap_db = median(gaps);
    summary.max_gap_db = *std::max_element(gaps.begin(), gaps.end());
    return summary;
}

}  // namespace camwave
