#include "camwave/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace camwave {

namespace {

constexpr double kTwoPi = 2.0 * kPi;
// Relative margin an alternative must beat to displace the incumbent.
constexpr double kImprovement = 1e-12;
constexpr int kMaxHalvings = 30;

double relative_change(double previous, double current) {
    return std::abs(current - previous) / std::max(std::abs(previous), std::numeric_limits<double>::min());
}

double largest_eigenvalue(const CMatrix& y) {
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(y, Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success) throw NumericalError("eigenvalue decomposition of Y failed");
    return eig.eigenvalues().maxCoeff();
}

double base_step(const CMatrix& y, StepRule rule) {
    const double lambda = largest_eigenvalue(y);
    const double inv = lambda > 0.0 ? 1.0 / lambda : 1.0;
    return rule == StepRule::Fixed ? inv : 16.0 * inv;
}

std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    return std::mt19937_64(seq);
}

CVector project_all(const std::vector<HullRegion>& hulls, const CVector& z) {
    CVector out(z.size());
    for (Eigen::Index k = 0; k < z.size(); ++k) {
        out(k) = project_onto_hull(z(k), hulls[static_cast<std::size_t>(k)]);
    }
    return out;
}

// Maximizes the linear minorizer 2 Re(g^H s) - const entry by entry; the
// maximum of a linear function over a polygon sits on a vertex.
CVector vertex_step(const std::vector<HullRegion>& hulls, const CVector& s, const CVector& g) {
    CVector out = s;
    for (Eigen::Index k = 0; k < s.size(); ++k) {
        const auto& verts = hulls[static_cast<std::size_t>(k)].vertices;
        const Complex gk = g(k);
        const double scale = std::abs(gk) * std::abs(verts.front());
        double best_val = (std::conj(gk) * s(k)).real();
        Complex best = s(k);
        for (const auto& v : verts) {
            const double val = (std::conj(gk) * v).real();
            if (val > best_val + kImprovement * scale) {
                best_val = val;
                best = v;
            }
        }
        out(k) = best;
    }
    return out;
}

// Exact single-entry vertex exchange: f(s + d e_k) - f(s) = 2 Re(conj(d) (Ys)_k) + Y_kk |d|^2.
// Sweeps until no entry can move to a vertex that raises the true objective.
void coordinate_polish(const CMatrix& y, const std::vector<HullRegion>& hulls, CVector& s, double& f, int max_sweeps) {
    CVector g = y * s;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        bool moved = false;
        for (Eigen::Index k = 0; k < s.size(); ++k) {
            const double ykk = y(k, k).real();
            Complex best_delta(0.0, 0.0);
            double best_gain = kImprovement * std::abs(f);
            for (const auto& v : hulls[static_cast<std::size_t>(k)].vertices) {
                const Complex d = v - s(k);
                const double gain = 2.0 * (std::conj(d) * g(k)).real() + ykk * std::norm(d);
                if (gain > best_gain) {
                    best_gain = gain;
                    best_delta = d;
                }
            }
            if (best_delta != Complex(0.0, 0.0)) {
                s(k) += best_delta;
                g += y.col(k) * best_delta;
                moved = true;
            }
        }
        if (!moved) break;
        f = quadratic_form(y, s);
        g = y * s;
    }
}

struct StartResult {
    CVector solution;
    double objective = 0.0;
    std::vector<double> trace;
    int iterations = 0;
};

StartResult ascend_from(const CMatrix& y, const std::vector<HullRegion>& hulls, CVector s, double step0,
                        const SolverConfig& cfg) {
    StartResult r;
    double f = quadratic_form(y, s);
    r.trace.push_back(f);
    for (int it = 0; it < cfg.inner_max_iters; ++it) {
        const double f_prev = f;

        CVector cand = vertex_step(hulls, s, y * s);
        double f_cand = quadratic_form(y, cand);
        if (f_cand > f) {
            s = std::move(cand);
            f = f_cand;
        }

        // Projected-gradient refinement; only improving steps are kept.
        const CVector g = y * s;
        double step = step0;
        const int trials = cfg.step_rule == StepRule::Fixed ? 1 : kMaxHalvings;
        for (int t = 0; t < trials; ++t, step *= 0.5) {
            CVector pg = project_all(hulls, s + step * g);
            const double f_pg = quadratic_form(y, pg);
            if (f_pg > f) {
                s = std::move(pg);
                f = f_pg;
                break;
            }
        }

        r.trace.push_back(f);
        ++r.iterations;
        if (relative_change(f_prev, f) < cfg.inner_tol) break;
    }
    const double f_before = f;
    coordinate_polish(y, hulls, s, f, cfg.inner_max_iters);
    if (f > f_before) r.trace.push_back(f);
    r.solution = std::move(s);
    r.objective = f;
    return r;
}

CVector principal_start(const CMatrix& y, const std::vector<HullRegion>& hulls) {
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(y);
    if (eig.info() != Eigen::Success) throw NumericalError("eigen decomposition of Y failed");
    const CVector v = eig.eigenvectors().col(y.cols() - 1);
    CVector s(v.size());
    for (Eigen::Index k = 0; k < v.size(); ++k) s(k) = hulls[static_cast<std::size_t>(k)].vertices.front();
    // Greedy vertex choice aligned with the dominant eigenvector.
    return vertex_step(hulls, s, v);
}

CVector random_vertex_start(const std::vector<HullRegion>& hulls, std::mt19937_64& rng) {
    CVector s(static_cast<Eigen::Index>(hulls.size()));
    for (std::size_t k = 0; k < hulls.size(); ++k) {
        const auto& verts = hulls[k].vertices;
        s(static_cast<Eigen::Index>(k)) = verts[rng() % verts.size()];
    }
    return s;
}

void require_square(const CMatrix& y, std::size_t n, const char* what) {
    if (y.rows() != y.cols() || static_cast<std::size_t>(y.rows()) != n) {
        throw DimensionError(std::string(what) + ": Y is " + std::to_string(y.rows()) + "x" +
                             std::to_string(y.cols()) + ", expected " + std::to_string(n) + "x" +
                             std::to_string(n));
    }
}

void require_waveform(const Scenario& sc, const Waveform& s0) {
    if (s0.entries.size() != sc.tx_length()) {
        throw DimensionError("reference waveform has length " + std::to_string(s0.entries.size()) +
                             ", expected " + std::to_string(sc.tx_length()));
    }
    if (!s0.satisfies_modulus()) throw ValidationError("reference waveform must be constant-modulus");
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

CVector project_all_arcs(const std::vector<ArcConstraint>& arcs, const CVector& z) {
    CVector out(z.size());
    for (Eigen::Index k = 0; k < z.size(); ++k) out(k) = project_onto_arc(z(k), arcs[static_cast<std::size_t>(k)]);
    return out;
}

// Projected-gradient ascent over the arcs. Projection onto a constant-modulus
// arc maximizes Re(conj(s + step*g) x), so every step is an ascent step.
StartResult arc_ascent(const CMatrix& y, const std::vector<ArcConstraint>& arcs, CVector s, const SolverConfig& cfg) {
    StartResult r;
    const double step0 = base_step(y, cfg.step_rule);
    double f = quadratic_form(y, s);
    r.trace.push_back(f);
    for (int it = 0; it < cfg.inner_max_iters; ++it) {
        const double f_prev = f;
        const CVector g = y * s;
        double step = step0;
        bool moved = false;
        const int trials = cfg.step_rule == StepRule::Fixed ? 1 : kMaxHalvings;
        for (int t = 0; t < trials; ++t, step *= 0.5) {
            CVector cand = project_all_arcs(arcs, s + step * g);
            const double f_cand = quadratic_form(y, cand);
            if (f_cand > f) {
                s = std::move(cand);
                f = f_cand;
                moved = true;
                break;
            }
        }
        r.trace.push_back(f);
        ++r.iterations;
        if (!moved || relative_change(f_prev, f) < cfg.inner_tol) break;
    }
    r.solution = std::move(s);
    r.objective = f;
    return r;
}

}  // namespace

void SolverConfig::validate() const {
    if (max_outer_iters < 1) throw ValidationError("solver.max_outer_iters must be >= 1");
    if (inner_max_iters < 1) throw ValidationError("solver.inner_max_iters must be >= 1");
    if (!(outer_tol > 0.0)) throw ValidationError("solver.outer_tol must be > 0");
    if (!(inner_tol > 0.0)) throw ValidationError("solver.inner_tol must be > 0");
    if (restarts < 0) throw ValidationError("solver.restarts must be >= 0");
}

InnerResult inner_maximize(const CMatrix& y, const std::vector<HullRegion>& hulls, const CVector& s_init,
                           const SolverConfig& cfg, std::uint64_t stream) {
    require_square(y, hulls.size(), "inner_maximize");
    if (static_cast<std::size_t>(s_init.size()) != hulls.size()) {
        throw DimensionError("inner_maximize: start has length " + std::to_string(s_init.size()) + ", expected " +
                             std::to_string(hulls.size()));
    }

    InnerResult out;
    CVector warm = s_init;
    for (Eigen::Index k = 0; k < warm.size(); ++k) {
        const auto& h = hulls[static_cast<std::size_t>(k)];
        if (!hull_contains(warm(k), h)) {
            warm(k) = project_onto_hull(warm(k), h);
            out.init_projected = true;
        }
    }

    const double step0 = base_step(y, cfg.step_rule);
    std::vector<CVector> starts;
    starts.push_back(warm);
    starts.push_back(principal_start(y, hulls));
    auto rng = make_rng(cfg.seed, stream);
    for (int i = 0; i < cfg.restarts; ++i) starts.push_back(random_vertex_start(hulls, rng));

    bool have = false;
    StartResult best;
    for (auto& start : starts) {
        StartResult r = ascend_from(y, hulls, std::move(start), step0, cfg);
        if (!have || r.objective > best.objective + kImprovement * std::abs(best.objective)) {
            best = std::move(r);
            have = true;
        }
    }
    out.solution = std::move(best.solution);
    out.objective = best.objective;
    out.objective_trace = std::move(best.trace);
    out.iterations = best.iterations;
    return out;
}

SubproblemResult cam_subproblem(const CMatrix& y, const std::vector<SimilaritySet>& sets,
                                const std::vector<HullRegion>& hulls, const CVector& s_init,
                                const SolverConfig& cfg, std::uint64_t stream) {
    if (sets.size() != hulls.size()) throw DimensionError("cam_subproblem: sets and hulls differ in length");
    SubproblemResult r;
    r.inner = inner_maximize(y, hulls, s_init, cfg, stream);
    r.relaxed = r.inner.solution;
    r.relaxed_objective = r.inner.objective;
    r.quantized.resize(r.relaxed.size());
    for (Eigen::Index k = 0; k < r.relaxed.size(); ++k) {
        r.quantized(k) = quantize_nearest(r.relaxed(k), sets[static_cast<std::size_t>(k)]);
    }
    r.quantized_objective = quadratic_form(y, r.quantized);
    return r;
}

SolverReport cam_solve(const Scenario& scenario, const Waveform& s0, int omega, int eta, const SolverConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    scenario.validate();
    cfg.validate();
    require_waveform(scenario, s0);

    const Constellation alphabet = build_alphabet(omega, scenario.n_tx, scenario.n_samples);
    const Waveform q0 = quantize_reference(s0, alphabet);
    const auto sets = build_similarity_sets(q0, eta, alphabet);
    const auto hulls = build_hulls(sets);
    const double snr = scenario.target_snr();

    SolverReport rep;
    rep.omega = omega;
    rep.eta = eta;
    rep.arc = sets.front().arc;
    rep.epsilon = sets.front().tolerance;

    CVector s = q0.entries;
    CMatrix y = y_matrix(scenario, s);
    double current = snr * quadratic_form(y, s);
    rep.sinr_trace_db.push_back(linear_to_db(current));
    for (int t = 1; t <= cfg.max_outer_iters; ++t) {
        InnerResult inner = inner_maximize(y, hulls, s, cfg, static_cast<std::uint64_t>(t));
        rep.init_projected = rep.init_projected || inner.init_projected;
        rep.objective_trace.push_back(std::move(inner.objective_trace));
        rep.inner_iterations.push_back(inner.iterations);
        s = std::move(inner.solution);
        y = y_matrix(scenario, s);
        const double next = snr * quadratic_form(y, s);
        rep.sinr_trace_db.push_back(linear_to_db(next));
        rep.outer_iterations = t;
        const double change = relative_change(current, next);
        current = next;
        if (change < cfg.outer_tol) break;
    }

    CVector q(s.size());
    for (Eigen::Index k = 0; k < s.size(); ++k) q(k) = quantize_nearest(s(k), sets[static_cast<std::size_t>(k)]);

    rep.relaxed_waveform = Waveform{s, alphabet.modulus, false};
    rep.relaxed_waveform.constant_modulus = rep.relaxed_waveform.satisfies_modulus();
    rep.final_waveform = Waveform{q, alphabet.modulus, true};
    rep.final_sinr_db = linear_to_db(optimal_sinr(scenario, q));
    for (double v : rep.sinr_trace_db) {
        if (!std::isfinite(v)) throw NumericalError("non-finite SINR in CAM trace");
    }
    rep.wall_time_s = seconds_since(t0);
    return rep;
}

std::vector<ArcConstraint> similarity_arcs(const Waveform& s0, double epsilon) {
    if (!(epsilon >= 0.0 && epsilon <= 2.0)) {
        throw ValidationError("similarity tolerance epsilon must lie in [0, 2]");
    }
    const double half_width = std::acos(1.0 - epsilon * epsilon / 2.0);
    std::vector<ArcConstraint> arcs;
    arcs.reserve(static_cast<std::size_t>(s0.entries.size()));
    for (Eigen::Index k = 0; k < s0.entries.size(); ++k) {
        const Complex ref = s0.entries(k);
        arcs.push_back({std::arg(ref) - half_width, 2.0 * half_width, ref, s0.modulus});
    }
    return arcs;
}

Complex project_onto_arc(Complex z, const ArcConstraint& arc) {
    if (arc.width <= 0.0) return arc.reference;
    if (z == Complex(0.0, 0.0)) return arc.reference;
    const double half = arc.width / 2.0;
    const double center = arc.start + half;
    if (arc.width >= kTwoPi) return std::polar(arc.modulus, std::arg(z));
    const double offset = std::remainder(std::arg(z) - center, kTwoPi);
    if (std::abs(offset) <= half) return std::polar(arc.modulus, center + offset);
    const Complex lo = std::polar(arc.modulus, arc.start);
    const Complex hi = std::polar(arc.modulus, arc.start + arc.width);
    return std::abs(z - hi) < std::abs(z - lo) ? hi : lo;
}

SolverReport continuous_baseline(const Scenario& scenario, const Waveform& s0, double epsilon,
                                 const SolverConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    scenario.validate();
    cfg.validate();
    require_waveform(scenario, s0);
    const auto arcs = similarity_arcs(s0, epsilon);
    const double snr = scenario.target_snr();

    SolverReport rep;
    rep.epsilon = epsilon;
    rep.arc = arcs.empty() ? 0.0 : arcs.front().width;

    CVector s = s0.entries;
    CMatrix y = y_matrix(scenario, s);
    double current = snr * quadratic_form(y, s);
    rep.sinr_trace_db.push_back(linear_to_db(current));
    for (int t = 1; t <= cfg.max_outer_iters; ++t) {
        StartResult inner = arc_ascent(y, arcs, s, cfg);
        rep.objective_trace.push_back(std::move(inner.trace));
        rep.inner_iterations.push_back(inner.iterations);
        s = std::move(inner.solution);
        y = y_matrix(scenario, s);
        const double next = snr * quadratic_form(y, s);
        rep.sinr_trace_db.push_back(linear_to_db(next));
        rep.outer_iterations = t;
        const double change = relative_change(current, next);
        current = next;
        if (change < cfg.outer_tol) break;
    }

    rep.final_waveform = Waveform{s, s0.modulus, true};
    rep.relaxed_waveform = rep.final_waveform;
    rep.final_sinr_db = rep.sinr_trace_db.back();
    for (double v : rep.sinr_trace_db) {
        if (!std::isfinite(v)) throw NumericalError("non-finite SINR in baseline trace");
    }
    rep.wall_time_s = seconds_since(t0);
    return rep;
}

std::uint64_t product_cardinality(const std::vector<SimilaritySet>& sets, std::uint64_t cap) {
    std::uint64_t total = 1;
    for (const auto& ss : sets) {
        const auto n = static_cast<std::uint64_t>(ss.points.size());
        if (n == 0) return 0;
        if (total > (cap + 1) / n) return cap + 1;
        total *= n;
    }
    return total;
}

OracleResult exhaustive_oracle(const CMatrix& y, const std::vector<SimilaritySet>& sets, std::uint64_t budget) {
    require_square(y, sets.size(), "exhaustive_oracle");
    const std::uint64_t card = product_cardinality(sets, budget);
    if (card > budget) throw BudgetExceeded(card, budget);

    const std::size_t dims = sets.size();
    std::vector<std::size_t> idx(dims, 0);
    CVector q(static_cast<Eigen::Index>(dims));
    for (std::size_t k = 0; k < dims; ++k) q(static_cast<Eigen::Index>(k)) = sets[k].points[0];

    OracleResult best;
    for (std::uint64_t n = 0; n < card; ++n) {
        const double obj = quadratic_form(y, q);
        if (n == 0 || obj > best.objective + kImprovement * std::abs(best.objective)) {
            best.objective = obj;
            best.indices = idx;
            best.solution = q;
        }
        // Odometer, last dimension fastest: visits index vectors in lexicographic order.
        for (std::size_t d = dims; d-- > 0;) {
            if (++idx[d] < sets[d].points.size()) {
                q(static_cast<Eigen::Index>(d)) = sets[d].points[idx[d]];
                break;
            }
            idx[d] = 0;
            q(static_cast<Eigen::Index>(d)) = sets[d].points[0];
        }
    }
    best.candidates = card;
    return best;
}

}  // namespace camwave
