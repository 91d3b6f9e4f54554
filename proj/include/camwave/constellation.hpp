#pragma once

// Discrete phase alphabet, similarity-restricted point sets and their convex
// hulls, written as explicit half-plane lists.
//
// Indexing follows the usual 1-based constellation labels: alphabet point rho
// (1..Omega) sits at angle rho*tau, similarity point mu (1..eta+1) at angle
// gamma_k + (mu-1)*tau. Containers are 0-based, so points[mu-1] is p_mu.

#include "camwave/model.hpp"
#include "camwave/types.hpp"

#include <cstddef>
#include <vector>

namespace camwave {

struct Constellation {
    int order = 0;        // Omega
    double step = 0.0;    // tau = 2*pi/Omega
    double modulus = 0.0; // 1/sqrt(N_T*N)
    std::vector<Complex> points;  // points[rho-1] = q_rho

    /// Maps any integer label onto 1..Omega.
    int wrap_label(int rho) const;
    const Complex& point(int rho) const { return points[static_cast<std::size_t>(wrap_label(rho) - 1)]; }
};

Constellation build_alphabet(int order, int n_tx, int n_samples);

/// 1-based label of the alphabet point closest to z; ties go to the lower label.
int nearest_label(Complex z, const Constellation& c);

/// Maps every entry of a constant-modulus waveform onto its nearest alphabet point.
Waveform quantize_reference(const Waveform& s0, const Constellation& c);

/// phi = eta * tau.
double similarity_arc(int order, int eta);
/// epsilon = sqrt(2 (1 - cos(phi/2))), measured on the unit circle.
double similarity_tolerance(double arc);

struct SimilaritySet {
    int dimension_index = 0;
    int order = 0;           // Omega of the parent alphabet
    int eta = 0;
    double step = 0.0;       // tau
    double modulus = 0.0;
    double base_angle = 0.0; // gamma_k
    double arc = 0.0;        // phi
    double tolerance = 0.0;  // epsilon
    std::vector<Complex> points;      // p_1 .. p_{eta+1}
    std::vector<int> alphabet_labels; // rho of each p_mu; empty when the reference is off-grid

    bool on_grid() const { return !alphabet_labels.empty(); }
    /// Exact membership test (tol = 0) or within a Euclidean tolerance.
    bool contains(Complex z, double tol = 0.0) const;
};

SimilaritySet build_similarity_set(Complex q0_entry, int k, int eta, const Constellation& c);

/// One similarity set per entry of the quantized reference.
std::vector<SimilaritySet> build_similarity_sets(const Waveform& q0, int eta, const Constellation& c);

enum class Sense { LessEqual, GreaterEqual };

// f(s) = Re(conj(normal) * (s - midpoint)); the constraint is f(s) <= 0 or f(s) >= 0.
// For every non-degenerate edge normal == midpoint.
struct HalfPlane {
    Complex midpoint;
    Complex normal;
    Sense sense = Sense::LessEqual;

    double evaluate(Complex s) const { return (std::conj(normal) * (s - midpoint)).real(); }
    /// Signed slack, non-negative when the constraint holds.
    double slack(Complex s) const { return sense == Sense::LessEqual ? -evaluate(s) : evaluate(s); }
};

enum class ArcCase { BelowPi, AtLeastPi };

struct HullRegion {
    std::vector<HalfPlane> half_planes;
    std::vector<Complex> vertices;  // p_1 .. p_{eta+1}
    ArcCase arc_case = ArcCase::BelowPi;
    bool closing_dropped = false;   // eta == Omega: the closing edge has zero length

    double min_slack(Complex s) const;
    /// Polygon edges as vertex index pairs, in counter-clockwise order.
    std::vector<std::pair<std::size_t, std::size_t>> edges() const;
};

inline constexpr double kHullSlack = 1e-10;

HullRegion build_hull(const SimilaritySet& ss);
std::vector<HullRegion> build_hulls(const std::vector<SimilaritySet>& sets);

bool hull_contains(Complex point, const HullRegion& h);

/// Euclidean projection onto the polygon.
Complex project_onto_hull(Complex point, const HullRegion& h);

/// Index (0-based, i.e. mu-1) of the feasible point closest to z; ties go to smaller mu.
std::size_t nearest_point_index(Complex z, const SimilaritySet& ss);
Complex quantize_nearest(Complex z, const SimilaritySet& ss);

}  // namespace camwave
