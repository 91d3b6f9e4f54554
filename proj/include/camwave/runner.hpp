#pragma once

// Experiment orchestration and artifact emission.
//
// Files written per mode (inside RunConfig::outputs.directory):
//   cam          sinr_trace.csv (iter, sinr_db_relaxed), solution.json
//   baseline     baseline_trace.csv (iter, sinr_db), baseline_solution.json
//   beampattern  beampattern.csv, beampattern_baseline.csv
//                (theta_deg, power_db, power_db_normalized)
//   oracle       oracle_gap.csv (trial, oracle_obj, cam_obj, gap_db)
//   sweep        sweep.csv (n_samples, omega, eta, epsilon, cam_sinr_db,
//                baseline_sinr_db, gap_db)
// CSV numbers use 12 significant digits and '\n' line endings.

#include "camwave/analysis.hpp"
#include "camwave/config.hpp"
#include "camwave/solver.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace camwave {

/// printf("%.12g").
std::string format_number(double value);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::string str() const;
};

struct SweepRow {
    int n_samples = 0;
    int omega = 0;
    int eta = 0;
    double epsilon = 0.0;
    double cam_sinr_db = 0.0;
    double baseline_sinr_db = 0.0;
    double gap_db = 0.0;
};

/// Runs every (N, Omega, eta) cell of the sweep; rows are ordered by N, then pair.
std::vector<SweepRow> run_sweep(const RunConfig& cfg);
CsvTable sweep_table(const std::vector<SweepRow>& rows);

struct OracleTrial {
    int trial = 0;
    double oracle_obj = 0.0;
    double cam_obj = 0.0;
    double relaxed_obj = 0.0;
    double gap_db = 0.0;  // oracle over CAM, >= 0
};

/// Trial t keeps the configured scene but redraws every interferer angle
/// uniformly in [-90, 90] deg from (seed, t). Y is frozen at the quantized
/// chirp reference of that scene.
Scenario oracle_trial_scenario(const RunConfig& cfg, int trial);
OracleTrial run_oracle_trial(const RunConfig& cfg, int trial);
std::vector<OracleTrial> run_oracle(const RunConfig& cfg);
CsvTable oracle_table(const std::vector<OracleTrial>& trials);

CsvTable trace_table(const SolverReport& rep, const std::string& value_column);
CsvTable beampattern_table(const Beampattern& bp);

struct SavedSolution {
    CVector entries;
    double final_sinr_db = 0.0;
    double epsilon = 0.0;
    double phi = 0.0;
    int omega = 0;
    int eta = 0;
};

std::string solution_json(const SolverReport& rep, const RunConfig& cfg);
SavedSolution load_solution(const std::filesystem::path& path);

struct RunResult {
    std::vector<std::filesystem::path> files;
    std::string summary;
};

/// Executes cfg.mode and writes its artifacts. Throws on failure.
RunResult run(const RunConfig& cfg);

}  // namespace camwave
