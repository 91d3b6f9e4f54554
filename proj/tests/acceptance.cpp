// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include "camwave/analysis.hpp"
#include "camwave/config.hpp"
#include "camwave/runner.hpp"
#include "test_support.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

using namespace camwave;
namespace fs = std::filesystem;
using camwave::testing::Rng;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, pattern, a, b, c, d);
    return buf;
}

RunConfig reference_config() { return load_config(fs::path(CAMWAVE_SOURCE_DIR) / "configs" / "paper_fig3.cfg"); }

Outcome epsilon_formula() {
    const double phi = similarity_arc(16, 6);
    const double eps = similarity_tolerance(phi);
    const bool ok = std::abs(phi - 3.0 * kPi / 4.0) <= 1e-15 && std::abs(eps - 1.111140) <= 1e-6;
    return {ok, fmt("phi=%.15g eps=%.9f", phi, eps)};
}

Outcome fixed_ratio() {
    const double a = similarity_tolerance(similarity_arc(16, 6));
    const double b = similarity_tolerance(similarity_arc(32, 12));
    const double c = similarity_tolerance(similarity_arc(48, 18));
    const double spread = std::max({a, b, c}) - std::min({a, b, c});
    return {spread <= 1e-12, fmt("eps spread=%.3g", spread)};
}

Outcome gap_reproduction() {
    RunConfig cfg = reference_config();
    const Waveform s0 = chirp_reference(cfg.scenario.n_tx, cfg.scenario.n_samples);
    const SolverReport cam = cam_solve(cfg.scenario, s0, cfg.omega, cfg.eta, cfg.solver);
    const double eps = similarity_tolerance(similarity_arc(cfg.omega, cfg.eta));
    const SolverReport base = continuous_baseline(cfg.scenario, s0, eps, cfg.solver);
    const double gap = base.final_sinr_db - cam.final_sinr_db;

    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& [omega, eta] : cfg.sweep.pairs) {
        const double e = similarity_tolerance(similarity_arc(omega, eta));
        const double v = continuous_baseline(cfg.scenario, s0, e, cfg.solver).final_sinr_db;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const bool ok = gap <= 2.0 && (hi - lo) <= 0.01;
    return {ok, fmt("cam=%.4f dB baseline=%.4f dB gap=%.4f dB baseline spread=%.2g dB", cam.final_sinr_db,
                    base.final_sinr_db, gap, hi - lo)};
}

Outcome convergence() {
    RunConfig cfg = reference_config();
    const Waveform s0 = chirp_reference(cfg.scenario.n_tx, cfg.scenario.n_samples);
    const SolverReport cam = cam_solve(cfg.scenario, s0, cfg.omega, cfg.eta, cfg.solver);
    const auto& trace = cam.sinr_trace_db;
    const double final_value = trace.back();
    // First outer iteration after which the trace stays within 0.1 dB of its final value.
    std::size_t settle = trace.size() - 1;
    while (settle > 0 && std::abs(trace[settle - 1] - final_value) <= 0.1) --settle;
    return {settle <= 30, fmt("settled at outer iteration %.0f of %.0f (final relaxed %.4f dB)", double(settle),
                              double(trace.size() - 1), final_value)};
}

Outcome oracle_suite() {
    Rng rng(2024);
    RunConfig base = load_config(fs::path(CAMWAVE_SOURCE_DIR) / "configs" / "oracle_tiny.cfg");
    int below = 0;
    int above = 0;
    std::vector<double> gaps;
    const int trials = 50;
    for (int t = 0; t < trials; ++t) {
        RunConfig cfg = base;
        do {
            cfg.scenario.n_tx = rng.integer(1, 3);
            cfg.scenario.n_samples = rng.integer(1, 3);
        } while (cfg.scenario.n_tx * cfg.scenario.n_samples > 6);
        cfg.scenario.n_rx = rng.integer(2, 6);
        cfg.scenario.interferers.resize(static_cast<std::size_t>(rng.integer(0, 2)), {0.0, 30.0});
        cfg.omega = 8;
        cfg.eta = 2;
        cfg.solver.seed = 1000 + static_cast<std::uint64_t>(t);
        const OracleTrial r = run_oracle_trial(cfg, t);
        if (r.cam_obj <= r.oracle_obj * (1.0 + 1e-12)) ++below;
        if (r.relaxed_obj >= r.oracle_obj * (1.0 - 1e-9)) ++above;
        gaps.push_back(r.gap_db);
    }
    const double med = median(gaps);
    const bool ok = below == trials && above == trials && med <= 0.5;
    return {ok, fmt("cam<=oracle %.0f/50, relaxed>=oracle %.0f/50, median gap %.4g dB, max gap %.4g dB", below,
                    above, med, *std::max_element(gaps.begin(), gaps.end()))};
}

Outcome hull_suite() {
    Rng rng(77);
    int failures = 0;
    double worst_projection = 0.0;
    const int draws = 10000;
    for (int d = 0; d < draws; ++d) {
        const int omega = rng.integer(3, 64);
        const int eta = 2 * rng.integer(1, omega / 2);
        const Constellation c = build_alphabet(omega, rng.integer(1, 4), rng.integer(1, 8));
        const Complex ref = d % 2 ? c.point(rng.integer(1, omega)) : std::polar(c.modulus, rng.uniform(-kPi, kPi));
        const SimilaritySet ss = build_similarity_set(ref, 0, eta, c);
        const HullRegion h = build_hull(ss);
        bool ok = true;
        for (const auto& v : h.vertices) ok = ok && hull_contains(v, h);

        const auto ccw = camwave::testing::distinct_vertices(h.vertices, 1e-12 * c.modulus);
        Complex centroid = 0.0;
        for (const auto& v : ccw) centroid += v;
        centroid /= static_cast<double>(ccw.size());
        ok = ok && h.min_slack(centroid) > 0.0;

        const bool below_pi = 2 * eta < omega;
        ok = ok && hull_contains(0.0, h) == !below_pi;

        const Complex z = std::polar(c.modulus * rng.uniform(0.0, 2.5), rng.uniform(-kPi, kPi));
        const Complex p = project_onto_hull(z, h);
        ok = ok && hull_contains(p, h) && std::abs(project_onto_hull(p, h) - p) <= 1e-15;
        if (!hull_contains(z, h)) {
            const double sampled = camwave::testing::sampled_boundary_distance(z, ccw, 10000);
            const double err = std::abs(std::abs(z - p) - sampled);
            worst_projection = std::max(worst_projection, err);
            ok = ok && err <= 1e-4;
        }
        if (!ok) ++failures;
    }
    return {failures == 0, fmt("%.0f failing draws of 10000, worst projection mismatch %.3g", failures,
                               worst_projection)};
}

Outcome sinr_identity() {
    Rng rng(99);
    double worst_identity = 0.0;
    double worst_scale = 0.0;
    for (int t = 0; t < 100; ++t) {
        const Scenario sc = camwave::testing::random_scenario(rng, 4, 8, 6, 3);
        const Waveform s = camwave::testing::random_cm_waveform(rng, sc.n_tx, sc.n_samples);
        const double via_filter = sinr(sc, s, optimal_filter(sc, s));
        const double via_y = sc.target_snr() * quadratic_form(y_matrix(sc, s), s.entries);
        worst_identity = std::max(worst_identity, std::abs(via_filter - via_y) / via_y);
        const Filter f{camwave::testing::random_vector(rng, sc.rx_length())};
        const Filter g{f.entries * Complex(rng.uniform(0.1, 10.0), rng.uniform(-10.0, 10.0))};
        const double a = sinr(sc, s, f);
        worst_scale = std::max(worst_scale, std::abs(sinr(sc, s, g) - a) / a);
    }
    return {worst_identity <= 1e-9 && worst_scale <= 1e-12,
            fmt("identity rel err %.3g, scale rel err %.3g", worst_identity, worst_scale)};
}

Outcome beampattern_check() {
    RunConfig cfg = reference_config();
    const Waveform s0 = chirp_reference(cfg.scenario.n_tx, cfg.scenario.n_samples);
    const SolverReport cam = cam_solve(cfg.scenario, s0, cfg.omega, cfg.eta, cfg.solver);
    const Beampattern bp = beampattern(cam.final_waveform, cfg.scenario, cfg.beampattern_grid);
    const double peak_deg = rad_to_deg(bp.angles_rad[bp.peak_index()]);
    const double peak = bp.power[bp.peak_index()];
    bool ok = std::abs(peak_deg - rad_to_deg(cfg.scenario.target_angle_rad)) <= 0.75;
    std::vector<double> angles;
    for (const auto& it : cfg.scenario.interferers) angles.push_back(it.angle_rad);
    const auto p = transmit_power(cam.final_waveform, cfg.scenario, angles);
    std::vector<double> rel(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        rel[i] = linear_to_db(p[i] / peak);
        ok = ok && rel[i] <= -15.0;
    }
    return {ok, fmt("peak at %.2f deg; interferers at %.2f, %.2f, %.2f dB re peak", peak_deg, rel[0], rel[1],
                    rel[2])};
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

Outcome determinism() {
    const fs::path root = fs::temp_directory_path() / "camwave_acceptance";
    fs::remove_all(root);
    std::string first;
    bool ok = true;
    for (const char* name : {"a", "b"}) {
        RunConfig cfg = reference_config();
        cfg.mode = Mode::Sweep;
        cfg.outputs.directory = root / name;
        run(cfg);
        const std::string csv = slurp(cfg.outputs.directory / "sweep.csv");
        if (first.empty())
            first = csv;
        else
            ok = !csv.empty() && csv == first;
    }
    const auto lines = std::count(first.begin(), first.end(), '\n');
    fs::remove_all(root);
    return {ok, fmt("sweep.csv %.0f bytes, %.0f lines, identical=%.0f", double(first.size()), double(lines),
                    ok ? 1.0 : 0.0)};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"epsilon formula", epsilon_formula},
        {"fixed-ratio normalization", fixed_ratio},
        {"reference-scene SINR gap", gap_reproduction},
        {"outer convergence", convergence},
        {"oracle equivalence", oracle_suite},
        {"hull geometry", hull_suite},
        {"SINR identity", sinr_identity},
        {"beampattern shape", beampattern_check},
        {"sweep determinism", determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = criteria[i].second();
        } catch (const std::exception& e) {
            out = {false, std::string("threw: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (!out.pass) ++failed;
        std::printf("%s  %zu  %-26s %s (%.2fs)\n", out.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                    out.detail.c_str(), secs);
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
