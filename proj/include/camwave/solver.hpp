#pragma once

// Sequential fixed-Y waveform optimization.
//
// Each outer round freezes Y = Y(s_t) and maximizes the quadratic s^H Y s over
// a per-entry feasible region: the Cartesian product of similarity hulls for
// the discrete design, or of circular phase arcs for the continuous baseline.
// The discrete design is finished by nearest-point quantization.

#include "camwave/constellation.hpp"
#include "camwave/model.hpp"
#include "camwave/types.hpp"

#include <cstdint>
#include <vector>

namespace camwave {

enum class StepRule { Fixed, Backtracking };

struct SolverConfig {
    int max_outer_iters = 50;
    double outer_tol = 1e-4;  // relative SINR change between outer rounds
    int inner_max_iters = 200;
    double inner_tol = 1e-10; // relative objective change between inner iterations
    StepRule step_rule = StepRule::Backtracking;
    std::uint64_t seed = 1;
    int restarts = 0;         // random vertex starts per inner solve, on top of the warm start

    void validate() const;
};

struct InnerResult {
    CVector solution;
    double objective = 0.0;
    std::vector<double> objective_trace;  // winning start, one value per inner iteration
    int iterations = 0;
    bool init_projected = false;
};

/// Maximizes s^H Y s over the product of hulls (minorize-maximize over hull
/// vertices plus projected-gradient refinement, multi-start). The returned
/// objective never falls below that of the (projected) warm start.
///
/// `stream` decorrelates the random starts of successive calls sharing a seed.
InnerResult inner_maximize(const CMatrix& y, const std::vector<HullRegion>& hulls, const CVector& s_init,
                           const SolverConfig& cfg, std::uint64_t stream = 0);

struct SubproblemResult {
    CVector relaxed;
    CVector quantized;
    double relaxed_objective = 0.0;
    double quantized_objective = 0.0;
    InnerResult inner;
};

/// One fixed-Y step of the discrete design: relax to the hulls, then quantize.
SubproblemResult cam_subproblem(const CMatrix& y, const std::vector<SimilaritySet>& sets,
                                const std::vector<HullRegion>& hulls, const CVector& s_init,
                                const SolverConfig& cfg, std::uint64_t stream = 0);

struct SolverReport {
    Waveform final_waveform;    // quantized (CAM) or arc-feasible (baseline)
    Waveform relaxed_waveform;  // last outer iterate before quantization
    std::vector<double> sinr_trace_db;                 // entry 0 is the starting point
    std::vector<std::vector<double>> objective_trace;  // per outer round
    std::vector<int> inner_iterations;                 // per outer round
    int outer_iterations = 0;
    double final_sinr_db = 0.0;
    double epsilon = 0.0;
    double arc = 0.0;
    int omega = 0;
    int eta = 0;
    bool init_projected = false;
    double wall_time_s = 0.0;
};

SolverReport cam_solve(const Scenario& scenario, const Waveform& s0, int omega, int eta, const SolverConfig& cfg);

/// Phase interval [start, start + width] for one entry; width = 2 arccos(1 - eps^2/2).
struct ArcConstraint {
    double start = 0.0;
    double width = 0.0;
    Complex reference;
    double modulus = 0.0;
};

std::vector<ArcConstraint> similarity_arcs(const Waveform& s0, double epsilon);

/// Nearest point of the circular arc {modulus * e^{j psi} : psi in [start, start + width]}.
Complex project_onto_arc(Complex z, const ArcConstraint& arc);

SolverReport continuous_baseline(const Scenario& scenario, const Waveform& s0, double epsilon,
                                 const SolverConfig& cfg);

inline constexpr std::uint64_t kDefaultOracleBudget = 1'000'000;

struct OracleResult {
    CVector solution;
    double objective = 0.0;
    std::vector<std::size_t> indices;  // 0-based point index per dimension
    std::uint64_t candidates = 0;
};

/// Number of points in the product of the sets, saturating just past `cap`.
std::uint64_t product_cardinality(const std::vector<SimilaritySet>& sets, std::uint64_t cap);

/// Global maximum of q^H Y q over the product of the point sets, by full
/// enumeration in lexicographic order (ties keep the earliest candidate).
OracleResult exhaustive_oracle(const CMatrix& y, const std::vector<SimilaritySet>& sets,
                               std::uint64_t budget = kDefaultOracleBudget);

}  // namespace camwave
