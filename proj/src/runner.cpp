#include "camwave/runner.hpp"

#include "json.hpp"

#include <atomic>
#include <cstdio>
#include <fstream>
#include <functional>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

namespace camwave {

namespace {

using nlohmann::json;

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write '" + path.string() + "'");
    out << content;
    if (!out) throw ConfigError("failed writing '" + path.string() + "'");
}

std::filesystem::path prepare_directory(const RunConfig& cfg) {
    std::error_code ec;
    std::filesystem::create_directories(cfg.outputs.directory, ec);
    if (ec || !std::filesystem::is_directory(cfg.outputs.directory)) {
        throw ConfigError("outputs.directory '" + cfg.outputs.directory.string() + "' is not writable");
    }
    return cfg.outputs.directory;
}

// Uniform double in [0, 1) from the top 53 bits; independent of the
// standard library's distribution implementations.
double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

json scenario_json(const Scenario& sc) {
    json interferers = json::array();
    for (const auto& i : sc.interferers) {
        interferers.push_back({{"angle_deg", rad_to_deg(i.angle_rad)}, {"power_db", i.power_db}});
    }
    return {{"n_tx", sc.n_tx},
            {"n_rx", sc.n_rx},
            {"n_samples", sc.n_samples},
            {"target_angle_deg", rad_to_deg(sc.target_angle_rad)},
            {"target_power_db", sc.target_power_db},
            {"noise_power_db", sc.noise_power_db},
            {"interferers", interferers}};
}

void run_cells(std::size_t count, int jobs, const std::function<void(std::size_t)>& body) {
    if (jobs <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> workers;
    const auto n_workers = std::min<std::size_t>(static_cast<std::size_t>(jobs), count);
    for (std::size_t w = 0; w < n_workers; ++w) {
        workers.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& t : workers) t.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace

std::string format_number(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

std::string CsvTable::str() const {
    std::string out;
    auto append_row = [&out](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i > 0) out += ',';
            out += cells[i];
        }
        out += '\n';
    };
    append_row(header);
    for (const auto& r : rows) append_row(r);
    return out;
}

std::vector<SweepRow> run_sweep(const RunConfig& cfg) {
    struct Cell {
        int n;
        int omega;
        int eta;
    };
    std::vector<Cell> cells;
    for (int n : cfg.sweep.n_samples) {
        for (const auto& [o, e] : cfg.sweep.pairs) cells.push_back({n, o, e});
    }
    std::vector<SweepRow> rows(cells.size());
    run_cells(cells.size(), cfg.sweep.jobs, [&](std::size_t i) {
        const Cell& c = cells[i];
        Scenario sc = cfg.scenario;
        sc.n_samples = c.n;
        const Waveform s0 = chirp_reference(sc.n_tx, sc.n_samples);
        const SolverReport cam = cam_solve(sc, s0, c.omega, c.eta, cfg.solver);
        const SolverReport base = continuous_baseline(sc, s0, cam.epsilon, cfg.solver);
        rows[i] = {c.n, c.omega, c.eta, cam.epsilon, cam.final_sinr_db, base.final_sinr_db,
                   base.final_sinr_db - cam.final_sinr_db};
    });
    return rows;
}

CsvTable sweep_table(const std::vector<SweepRow>& rows) {
    CsvTable t;
    t.header = {"n_samples", "omega", "eta", "epsilon", "cam_sinr_db", "baseline_sinr_db", "gap_db"};
    for (const auto& r : rows) {
        t.rows.push_back({std::to_string(r.n_samples), std::to_string(r.omega), std::to_string(r.eta),
                          format_number(r.epsilon), format_number(r.cam_sinr_db), format_number(r.baseline_sinr_db),
                          format_number(r.gap_db)});
    }
    return t;
}

Scenario oracle_trial_scenario(const RunConfig& cfg, int trial) {
    std::seed_seq seq{static_cast<std::uint32_t>(cfg.solver.seed), static_cast<std::uint32_t>(cfg.solver.seed >> 32),
                      static_cast<std::uint32_t>(trial), 0x6f72u};
    std::mt19937_64 rng(seq);
    Scenario sc = cfg.scenario;
    for (auto& i : sc.interferers) i.angle_rad = (unit_uniform(rng) - 0.5) * kPi;
    return sc;
}

OracleTrial run_oracle_trial(const RunConfig& cfg, int trial) {
    const Scenario sc = oracle_trial_scenario(cfg, trial);
    const Constellation alphabet = build_alphabet(cfg.omega, sc.n_tx, sc.n_samples);
    const Waveform q0 = quantize_reference(chirp_reference(sc.n_tx, sc.n_samples), alphabet);
    const auto sets = build_similarity_sets(q0, cfg.eta, alphabet);
    const auto hulls = build_hulls(sets);
    const CMatrix y = y_matrix(sc, q0);

    const OracleResult best = exhaustive_oracle(y, sets, cfg.oracle.budget);
    const SubproblemResult cam = cam_subproblem(y, sets, hulls, q0.entries, cfg.solver, static_cast<std::uint64_t>(trial));
    OracleTrial out;
    out.trial = trial;
    out.oracle_obj = best.objective;
    out.cam_obj = cam.quantized_objective;
    out.relaxed_obj = cam.relaxed_objective;
    out.gap_db = linear_to_db(best.objective / cam.quantized_objective);
    return out;
}

std::vector<OracleTrial> run_oracle(const RunConfig& cfg) {
    std::vector<OracleTrial> out;
    for (int t = 0; t < cfg.oracle.trials; ++t) out.push_back(run_oracle_trial(cfg, t));
    return out;
}

CsvTable oracle_table(const std::vector<OracleTrial>& trials) {
    CsvTable t;
    t.header = {"trial", "oracle_obj", "cam_obj", "gap_db"};
    for (const auto& r : trials) {
        t.rows.push_back({std::to_string(r.trial), format_number(r.oracle_obj), format_number(r.cam_obj),
                          format_number(r.gap_db)});
    }
    return t;
}

CsvTable trace_table(const SolverReport& rep, const std::string& value_column) {
    CsvTable t;
    t.header = {"iter", value_column};
    for (std::size_t i = 0; i < rep.sinr_trace_db.size(); ++i) {
        t.rows.push_back({std::to_string(i), format_number(rep.sinr_trace_db[i])});
    }
    return t;
}

CsvTable beampattern_table(const Beampattern& bp) {
    CsvTable t;
    t.header = {"theta_deg", "power_db", "power_db_normalized"};
    for (std::size_t i = 0; i < bp.angles_rad.size(); ++i) {
        t.rows.push_back({format_number(rad_to_deg(bp.angles_rad[i])), format_number(bp.power_db[i]),
                          format_number(bp.power_db_normalized[i])});
    }
    return t;
}

std::string solution_json(const SolverReport& rep, const RunConfig& cfg) {
    json entries = json::array();
    for (Eigen::Index k = 0; k < rep.final_waveform.entries.size(); ++k) {
        const Complex z = rep.final_waveform.entries(k);
        entries.push_back({z.real(), z.imag()});
    }
    json doc = {{"omega", rep.omega},
                {"eta", rep.eta},
                {"epsilon", rep.epsilon},
                {"phi", rep.arc},
                {"final_sinr_db", rep.final_sinr_db},
                {"outer_iterations", rep.outer_iterations},
                {"seed", cfg.solver.seed},
                {"scenario", scenario_json(cfg.scenario)},
                {"entries", entries}};
    return doc.dump(2) + "\n";
}

SavedSolution load_solution(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open solution file '" + path.string() + "'");
    json doc;
    try {
        doc = json::parse(in);
        SavedSolution s;
        s.omega = doc.at("omega").get<int>();
        s.eta = doc.at("eta").get<int>();
        s.epsilon = doc.at("epsilon").get<double>();
        s.phi = doc.at("phi").get<double>();
        s.final_sinr_db = doc.at("final_sinr_db").get<double>();
        const auto& entries = doc.at("entries");
        s.entries.resize(static_cast<Eigen::Index>(entries.size()));
        for (std::size_t k = 0; k < entries.size(); ++k) {
            s.entries(static_cast<Eigen::Index>(k)) = Complex(entries[k].at(0).get<double>(), entries[k].at(1).get<double>());
        }
        return s;
    } catch (const json::exception& e) {
        throw ConfigError("malformed solution file '" + path.string() + "': " + e.what());
    }
}

RunResult run(const RunConfig& cfg) {
    cfg.validate();
    const auto dir = prepare_directory(cfg);
    RunResult result;
    auto emit = [&](const std::string& name, const std::string& content) {
        write_file(dir / name, content);
        result.files.push_back(dir / name);
    };
    std::ostringstream summary;

    switch (cfg.mode) {
        case Mode::Cam: {
            const Waveform s0 = chirp_reference(cfg.scenario.n_tx, cfg.scenario.n_samples);
            const SolverReport rep = cam_solve(cfg.scenario, s0, cfg.omega, cfg.eta, cfg.solver);
            if (cfg.outputs.csv) emit("sinr_trace.csv", trace_table(rep, "sinr_db_relaxed").str());
            if (cfg.outputs.json) emit("solution.json", solution_json(rep, cfg));
            summary << "cam: " << rep.outer_iterations << " outer iterations, final quantized SINR "
                    << format_number(rep.final_sinr_db) << " dB";
            break;
        }
        case Mode::Baseline: {
            const Waveform s0 = chirp_reference(cfg.scenario.n_tx, cfg.scenario.n_samples);
            const double eps = similarity_tolerance(similarity_arc(cfg.omega, cfg.eta));
            SolverReport rep = continuous_baseline(cfg.scenario, s0, eps, cfg.solver);
            if (cfg.outputs.csv) emit("baseline_trace.csv", trace_table(rep, "sinr_db").str());
            if (cfg.outputs.json) emit("baseline_solution.json", solution_json(rep, cfg));
            summary << "baseline: " << rep.outer_iterations << " outer iterations, final SINR "
                    << format_number(rep.final_sinr_db) << " dB";
            break;
        }
        case Mode::Beampattern: {
            const Waveform s0 = chirp_reference(cfg.scenario.n_tx, cfg.scenario.n_samples);
            const SolverReport cam = cam_solve(cfg.scenario, s0, cfg.omega, cfg.eta, cfg.solver);
            const SolverReport base = continuous_baseline(cfg.scenario, s0, cam.epsilon, cfg.solver);
            const Beampattern bp_cam = beampattern(cam.final_waveform, cfg.scenario, cfg.beampattern_grid);
            const Beampattern bp_base = beampattern(base.final_waveform, cfg.scenario, cfg.beampattern_grid);
            if (cfg.outputs.csv) {
                emit("beampattern.csv", beampattern_table(bp_cam).str());
                emit("beampattern_baseline.csv", beampattern_table(bp_base).str());
            }
            if (cfg.outputs.json) emit("solution.json", solution_json(cam, cfg));
            summary << "beampattern: CAM peak at " << format_number(rad_to_deg(bp_cam.angles_rad[bp_cam.peak_index()]))
                    << " deg";
            break;
        }
        case Mode::Oracle: {
            const auto trials = run_oracle(cfg);
            if (cfg.outputs.csv) emit("oracle_gap.csv", oracle_table(trials).str());
            if (cfg.outputs.json) {
                json doc = json::array();
                for (const auto& t : trials) {
                    doc.push_back({{"trial", t.trial},
                                   {"oracle_obj", t.oracle_obj},
                                   {"cam_obj", t.cam_obj},
                                   {"relaxed_obj", t.relaxed_obj},
                                   {"gap_db", t.gap_db}});
                }
                emit("oracle_gap.json", doc.dump(2) + "\n");
            }
            std::vector<double> gaps;
            for (const auto& t : trials) gaps.push_back(t.gap_db);
            summary << "oracle: " << trials.size() << " trials, median gap " << format_number(median(gaps)) << " dB";
            break;
        }
        case Mode::Sweep: {
            const auto rows = run_sweep(cfg);
            if (cfg.outputs.csv) emit("sweep.csv", sweep_table(rows).str());
            if (cfg.outputs.json) {
                json doc = json::array();
                for (const auto& r : rows) {
                    doc.push_back({{"n_samples", r.n_samples},
                                   {"omega", r.omega},
                                   {"eta", r.eta},
                                   {"epsilon", r.epsilon},
                                   {"cam_sinr_db", r.cam_sinr_db},
                                   {"baseline_sinr_db", r.baseline_sinr_db},
                                   {"gap_db", r.gap_db}});
                }
                emit("sweep.json", doc.dump(2) + "\n");
            }
            std::vector<double> gaps;
            for (const auto& r : rows) gaps.push_back(r.gap_db);
            summary << "sweep: " << rows.size() << " cells, median gap " << format_number(median(gaps)) << " dB";
            break;
        }
    }
    result.summary = summary.str();
    return result;
}

}  // namespace camwave
