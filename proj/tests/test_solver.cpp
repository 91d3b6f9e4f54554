#include "doctest.h"

#include "camwave/solver.hpp"
#include "test_support.hpp"

using namespace camwave;
using camwave::testing::Rng;

namespace {

struct Instance {
    Constellation alphabet;
    Waveform q0;
    std::vector<SimilaritySet> sets;
    std::vector<HullRegion> hulls;
};

Instance make_instance(const Waveform& s0, int n_tx, int n_samples, int omega, int eta) {
    Instance in;
    in.alphabet = build_alphabet(omega, n_tx, n_samples);
    in.q0 = quantize_reference(s0, in.alphabet);
    in.sets = build_similarity_sets(in.q0, eta, in.alphabet);
    in.hulls = build_hulls(in.sets);
    return in;
}

// Independent maximum of q^H Y q over the product of point sets (recursive scan).
double brute_max(const CMatrix& y, const std::vector<SimilaritySet>& sets) {
    CVector q(static_cast<Eigen::Index>(sets.size()));
    double best = -std::numeric_limits<double>::infinity();
    auto rec = [&](auto&& self, std::size_t k) -> void {
        if (k == sets.size()) {
            best = std::max(best, (q.adjoint() * y * q)(0, 0).real());
            return;
        }
        for (const auto& p : sets[k].points) {
            q(static_cast<Eigen::Index>(k)) = p;
            self(self, k + 1);
        }
    };
    rec(rec, 0);
    return best;
}

SolverConfig multistart(int restarts) {
    SolverConfig cfg;
    cfg.restarts = restarts;
    cfg.seed = 99;
    return cfg;
}

}  // namespace

TEST_CASE("solver config validation") {
    SolverConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.max_outer_iters = 0;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    cfg = SolverConfig{};
    cfg.outer_tol = -1.0;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    cfg = SolverConfig{};
    cfg.restarts = -1;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
}

TEST_CASE("scaled identity: every vertex is optimal") {
    const Waveform s0 = chirp_reference(2, 3);
    const Instance in = make_instance(s0, 2, 3, 16, 6);
    const CMatrix y = 2.5 * CMatrix::Identity(6, 6);
    const InnerResult res = inner_maximize(y, in.hulls, in.q0.entries, SolverConfig{});
    CHECK(res.objective == doctest::Approx(2.5).epsilon(1e-12));
    for (Eigen::Index k = 0; k < 6; ++k) CHECK(std::abs(res.solution(k)) <= in.alphabet.modulus * (1 + 1e-12));
}

TEST_CASE("one-dimensional problem matches enumeration") {
    const Constellation c = build_alphabet(16, 1, 1);
    const SimilaritySet ss = build_similarity_set(c.point(5), 0, 2, c);
    const std::vector<HullRegion> hulls{build_hull(ss)};
    CMatrix y(1, 1);
    y(0, 0) = 3.0;
    CVector start(1);
    start(0) = ss.points[1];
    const InnerResult res = inner_maximize(y, hulls, start, SolverConfig{});
    CHECK(res.objective == doctest::Approx(3.0).epsilon(1e-12));
    const OracleResult orc = exhaustive_oracle(y, {ss});
    CHECK(orc.candidates == 3);
    CHECK(orc.objective == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("relaxed optimum dominates the discrete optimum on tiny problems") {
    Rng rng(61);
    int near_optimal = 0;
    const int trials = 200;
    for (int trial = 0; trial < trials; ++trial) {
        const int nt = rng.integer(1, 2);
        const int n = rng.integer(1, 2);
        const Waveform s0 = camwave::testing::random_cm_waveform(rng, nt, n);
        const int omega = 2 * rng.integer(2, 8);
        const Instance in = make_instance(s0, nt, n, omega, 2);
        const CMatrix y = camwave::testing::random_psd(rng, nt * n, rng.integer(1, nt * n));
        const double discrete = brute_max(y, in.sets);
        const SubproblemResult sub = cam_subproblem(y, in.sets, in.hulls, in.q0.entries, multistart(8));
        CHECK(sub.relaxed_objective >= discrete * (1.0 - 1e-9));
        CHECK(sub.quantized_objective <= discrete * (1.0 + 1e-9));
        if (sub.quantized_objective >= 0.99 * discrete) ++near_optimal;
    }
    CHECK(near_optimal == trials);
}

TEST_CASE("inner solve is monotone and feasible") {
    Rng rng(67);
    for (int trial = 0; trial < 60; ++trial) {
        const int nt = rng.integer(1, 4);
        const int n = rng.integer(1, 4);
        const Waveform s0 = camwave::testing::random_cm_waveform(rng, nt, n);
        const int omega = rng.integer(3, 32);
        const int eta = 2 * rng.integer(1, omega / 2);
        const Instance in = make_instance(s0, nt, n, omega, eta);
        const CMatrix y = camwave::testing::random_psd(rng, nt * n, rng.integer(1, nt * n));
        SolverConfig cfg;
        cfg.step_rule = trial % 2 ? StepRule::Fixed : StepRule::Backtracking;
        const InnerResult res = inner_maximize(y, in.hulls, in.q0.entries, cfg);
        CHECK(res.objective >= quadratic_form(y, in.q0.entries) * (1.0 - 1e-12));
        for (std::size_t i = 1; i < res.objective_trace.size(); ++i)
            CHECK(res.objective_trace[i] >= res.objective_trace[i - 1] * (1.0 - 1e-12));
        for (Eigen::Index k = 0; k < res.solution.size(); ++k)
            CHECK(in.hulls[static_cast<std::size_t>(k)].min_slack(res.solution(k)) >= -1e-10);
        CHECK(res.objective == doctest::Approx(quadratic_form(y, res.solution)).epsilon(1e-12));
        CHECK_FALSE(res.init_projected);
    }
}

TEST_CASE("infeasible warm start is projected first") {
    const Waveform s0 = chirp_reference(2, 2);
    const Instance in = make_instance(s0, 2, 2, 16, 2);
    CVector bad = in.q0.entries;
    bad(1) = -bad(1);
    const InnerResult res = inner_maximize(CMatrix::Identity(4, 4), in.hulls, bad, SolverConfig{});
    CHECK(res.init_projected);
    for (Eigen::Index k = 0; k < 4; ++k) CHECK(hull_contains(res.solution(k), in.hulls[static_cast<std::size_t>(k)]));
}

TEST_CASE("full alphabet without clutter") {
    Scenario sc = camwave::testing::paper_scenario(2);
    sc.n_tx = 2;
    sc.n_rx = 3;
    sc.interferers.clear();
    const Waveform s0 = chirp_reference(2, 2);
    const SolverReport rep = cam_solve(sc, s0, 4, 4, SolverConfig{});
    const Constellation c = build_alphabet(4, 2, 2);
    for (Eigen::Index k = 0; k < 4; ++k)
        CHECK(std::find(c.points.begin(), c.points.end(), rep.final_waveform.entries(k)) != c.points.end());
    const CMatrix a = steering_matrix(sc, sc.target_angle_rad);
    const CVector as = a * rep.final_waveform.entries;
    CHECK(rep.final_sinr_db == doctest::Approx(linear_to_db(sc.target_snr() * as.squaredNorm())).epsilon(1e-9));
    // ||A s||^2 = N_R sum_n |a_t^T s_n|^2 <= N_R N_T for unit-energy constant modulus.
    const double bound = sc.target_snr() * sc.n_rx * sc.n_tx;
    CHECK(db_to_linear(rep.final_sinr_db) <= bound * (1 + 1e-12));
}

TEST_CASE("reference scene converges and stays feasible") {
    const auto sc = camwave::testing::paper_scenario();
    const Waveform s0 = chirp_reference(4, 8);
    const SolverReport rep = cam_solve(sc, s0, 16, 6, SolverConfig{});
    CHECK(rep.outer_iterations <= 15);
    CHECK(rep.omega == 16);
    CHECK(rep.eta == 6);
    CHECK(rep.epsilon == doctest::Approx(1.1111404660392044).epsilon(1e-12));
    CHECK(rep.sinr_trace_db.size() == static_cast<std::size_t>(rep.outer_iterations + 1));
    const Instance in = make_instance(s0, 4, 8, 16, 6);
    CHECK(rep.sinr_trace_db.front() == doctest::Approx(linear_to_db(optimal_sinr(sc, in.q0.entries))).epsilon(1e-12));
    for (Eigen::Index k = 0; k < 32; ++k) {
        const auto idx = static_cast<std::size_t>(k);
        CHECK(in.sets[idx].contains(rep.final_waveform.entries(k)));
        CHECK(in.hulls[idx].min_slack(rep.relaxed_waveform.entries(k)) >= -1e-10);
    }
    CHECK(rep.final_sinr_db == doctest::Approx(linear_to_db(optimal_sinr(sc, rep.final_waveform.entries))).epsilon(1e-12));
    CHECK(rep.final_sinr_db > rep.sinr_trace_db.front());
}

TEST_CASE("solves are deterministic for a fixed seed") {
    const auto sc = camwave::testing::paper_scenario();
    const Waveform s0 = chirp_reference(4, 8);
    SolverConfig cfg;
    cfg.restarts = 3;
    const SolverReport a = cam_solve(sc, s0, 16, 6, cfg);
    const SolverReport b = cam_solve(sc, s0, 16, 6, cfg);
    CHECK(a.sinr_trace_db == b.sinr_trace_db);
    CHECK(a.final_waveform.entries == b.final_waveform.entries);
    const SolverReport c = continuous_baseline(sc, s0, 1.1, cfg);
    const SolverReport d = continuous_baseline(sc, s0, 1.1, cfg);
    CHECK(c.sinr_trace_db == d.sinr_trace_db);
}

TEST_CASE("arc constraints") {
    const Waveform s0 = chirp_reference(4, 8);
    const auto zero = similarity_arcs(s0, 0.0);
    CHECK(zero.front().width == 0.0);
    const auto full = similarity_arcs(s0, 2.0);
    CHECK(full.front().width == doctest::Approx(2.0 * kPi).epsilon(1e-15));
    CHECK(similarity_arcs(s0, 1.1111404660392044).front().width == doctest::Approx(3.0 * kPi / 4.0).epsilon(1e-12));
    CHECK_THROWS_AS(similarity_arcs(s0, -0.1), ValidationError);
    CHECK_THROWS_AS(similarity_arcs(s0, 2.1), ValidationError);
}

TEST_CASE("arc projection matches a dense scan of the arc") {
    Rng rng(71);
    for (int trial = 0; trial < 500; ++trial) {
        const double r = rng.uniform(0.1, 1.0);
        const ArcConstraint arc{rng.uniform(-kPi, kPi), rng.uniform(0.0, 2.0 * kPi), {}, r};
        const Complex z = std::polar(rng.uniform(0.01, 2.0), rng.uniform(-kPi, kPi));
        const Complex p = project_onto_arc(z, arc);
        CHECK(std::abs(p) == doctest::Approx(r).epsilon(1e-12));
        double offset = std::fmod(std::arg(p) - arc.start, 2.0 * kPi);
        if (offset < 0.0) offset += 2.0 * kPi;
        CHECK((offset <= arc.width + 1e-12 || offset >= 2.0 * kPi - 1e-12));
        double best = std::numeric_limits<double>::infinity();
        for (int j = 0; j <= 20000; ++j) best = std::min(best, std::abs(z - std::polar(r, arc.start + arc.width * j / 20000.0)));
        CHECK(std::abs(z - p) <= best + 1e-12);
        CHECK(std::abs(z - p) >= best - 1e-3 * r);
    }
}

TEST_CASE("baseline with zero tolerance returns the reference") {
    const auto sc = camwave::testing::paper_scenario();
    const Waveform s0 = chirp_reference(4, 8);
    const SolverReport rep = continuous_baseline(sc, s0, 0.0, SolverConfig{});
    CHECK((rep.final_waveform.entries - s0.entries).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("baseline respects the similarity bound and the modulus") {
    const auto sc = camwave::testing::paper_scenario();
    const Waveform s0 = chirp_reference(4, 8);
    for (double eps : {0.3, 1.1111404660392044, 2.0}) {
        const SolverReport rep = continuous_baseline(sc, s0, eps, SolverConfig{});
        CHECK(rep.final_waveform.satisfies_modulus());
        const double dist = (rep.final_waveform.entries - s0.entries).cwiseAbs().maxCoeff() / s0.modulus;
        CHECK(dist <= eps + 1e-9);
        // Only the fixed-Y inner ascent is monotone; outer rounds change Y.
        for (const auto& round : rep.objective_trace)
            for (std::size_t i = 1; i < round.size(); ++i) CHECK(round[i] >= round[i - 1] - 1e-9);
        CHECK(rep.final_sinr_db >= rep.sinr_trace_db.front());
    }
}

TEST_CASE("oracle enumeration") {
    const Waveform s0 = chirp_reference(1, 2);
    const Instance in = make_instance(s0, 1, 2, 8, 2);
    // Y = I: every candidate ties, so the first lexicographic one wins.
    const OracleResult tie = exhaustive_oracle(CMatrix::Identity(2, 2), in.sets);
    CHECK(tie.candidates == 9);
    CHECK(tie.indices == std::vector<std::size_t>{0, 0});
    CHECK(tie.solution(0) == in.sets[0].points[0]);
    CHECK(tie.objective == doctest::Approx(1.0).epsilon(1e-12));

    Rng rng(73);
    for (int trial = 0; trial < 50; ++trial) {
        const CMatrix y = camwave::testing::random_psd(rng, 2, 2);
        const OracleResult res = exhaustive_oracle(y, in.sets);
        CHECK(res.objective == doctest::Approx(brute_max(y, in.sets)).epsilon(1e-12));
        CHECK(res.objective == doctest::Approx(quadratic_form(y, res.solution)).epsilon(1e-12));
    }
}

TEST_CASE("oracle budget") {
    const Waveform s0 = chirp_reference(4, 4);
    const Instance in = make_instance(s0, 4, 4, 16, 6);
    CHECK(product_cardinality(in.sets, 1000) > 1000);
    try {
        exhaustive_oracle(CMatrix::Identity(16, 16), in.sets, 1000);
        FAIL("expected BudgetExceeded");
    } catch (const BudgetExceeded& e) {
        CHECK(e.budget() == 1000);
        CHECK(e.cardinality() > 1000);
    }
    const Instance small = make_instance(chirp_reference(1, 3), 1, 3, 8, 4);
    CHECK(product_cardinality(small.sets, 1000) == 125);
    CHECK_THROWS_AS(exhaustive_oracle(CMatrix::Identity(3, 3), small.sets, 124), BudgetExceeded);
    CHECK_NOTHROW(exhaustive_oracle(CMatrix::Identity(3, 3), small.sets, 125));
}
