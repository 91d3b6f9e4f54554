#include "camwave/constellation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace camwave {

namespace {

// Distances closer than this (relative to the modulus) count as ties.
constexpr double kTieTolerance = 1e-12;
// How far |q0(k)| may sit from the nominal modulus.
constexpr double kModulusTolerance = 1e-9;

void validate_eta(int eta, int order) {
    if (eta % 2 != 0) throw ValidationError("eta must be even (got " + std::to_string(eta) + ")");
    if (eta < 2) throw ValidationError("eta must be >= 2 (got " + std::to_string(eta) + ")");
    if (eta > order) {
        throw ValidationError("eta exceeds omega (eta=" + std::to_string(eta) +
                              ", omega=" + std::to_string(order) + ")");
    }
}

}  // namespace

int Constellation::wrap_label(int rho) const {
    const int r = ((rho - 1) % order + order) % order;
    return r + 1;
}

Constellation build_alphabet(int order, int n_tx, int n_samples) {
    if (order < 2) throw ValidationError("omega must be >= 2 (got " + std::to_string(order) + ")");
    if (n_tx < 1 || n_samples < 1) throw ValidationError("build_alphabet needs n_tx, n_samples >= 1");
    Constellation c;
    c.order = order;
    c.step = 2.0 * kPi / order;
    c.modulus = nominal_modulus(n_tx, n_samples);
    c.points.reserve(static_cast<std::size_t>(order));
    for (int rho = 1; rho <= order; ++rho) {
        // rho == Omega lands on angle 0 exactly, so q_Omega is real.
        c.points.push_back(std::polar(c.modulus, (rho % order) * c.step));
    }
    return c;
}

int nearest_label(Complex z, const Constellation& c) {
    const double tie = kTieTolerance * c.modulus;
    int best = 1;
    double best_dist = std::abs(z - c.points[0]);
    for (int rho = 2; rho <= c.order; ++rho) {
        const double d = std::abs(z - c.points[static_cast<std::size_t>(rho - 1)]);
        if (d < best_dist - tie) {
            best = rho;
            best_dist = d;
        }
    }
    return best;
}

Waveform quantize_reference(const Waveform& s0, const Constellation& c) {
    if (!s0.satisfies_modulus() || std::abs(s0.modulus - c.modulus) > kModulusTolerance) {
        throw ValidationError("quantize_reference needs a constant-modulus waveform on the alphabet circle");
    }
    Waveform q;
    q.entries.resize(s0.entries.size());
    for (Eigen::Index k = 0; k < s0.entries.size(); ++k) {
        q.entries(k) = c.point(nearest_label(s0.entries(k), c));
    }
    q.modulus = c.modulus;
    q.constant_modulus = true;
    return q;
}

double similarity_arc(int order, int eta) { return eta * (2.0 * kPi / order); }

double similarity_tolerance(double arc) { return std::sqrt(2.0 * (1.0 - std::cos(arc / 2.0))); }

bool SimilaritySet::contains(Complex z, double tol) const {
    return std::any_of(points.begin(), points.end(),
                       [&](const Complex& p) { return tol == 0.0 ? z == p : std::abs(z - p) <= tol; });
}

SimilaritySet build_similarity_set(Complex q0_entry, int k, int eta, const Constellation& c) {
    validate_eta(eta, c.order);
    if (std::abs(std::abs(q0_entry) - c.modulus) > kModulusTolerance) {
        throw ValidationError("reference entry " + std::to_string(k) + " is off the constellation circle");
    }
    SimilaritySet ss;
    ss.dimension_index = k;
    ss.order = c.order;
    ss.eta = eta;
    ss.step = c.step;
    ss.modulus = c.modulus;
    ss.arc = similarity_arc(c.order, eta);
    ss.tolerance = similarity_tolerance(ss.arc);
    ss.base_angle = std::arg(q0_entry) - eta * c.step / 2.0;

    const int half = eta / 2;
    const int label0 = nearest_label(q0_entry, c);
    const bool aligned = std::abs(q0_entry - c.point(label0)) <= kModulusTolerance * c.modulus;

    ss.points.resize(static_cast<std::size_t>(eta + 1));
    if (aligned) ss.alphabet_labels.resize(static_cast<std::size_t>(eta + 1));
    for (int mu = 1; mu <= eta + 1; ++mu) {
        const auto idx = static_cast<std::size_t>(mu - 1);
        if (aligned) {
            const int label = c.wrap_label(label0 - half + mu - 1);
            ss.alphabet_labels[idx] = label;
            ss.points[idx] = c.point(label);
        } else {
            ss.points[idx] = std::polar(c.modulus, ss.base_angle + (mu - 1) * c.step);
        }
    }
    ss.points[static_cast<std::size_t>(half)] = q0_entry;
    return ss;
}

std::vector<SimilaritySet> build_similarity_sets(const Waveform& q0, int eta, const Constellation& c) {
    std::vector<SimilaritySet> sets;
    sets.reserve(static_cast<std::size_t>(q0.entries.size()));
    for (Eigen::Index k = 0; k < q0.entries.size(); ++k) {
        sets.push_back(build_similarity_set(q0.entries(k), static_cast<int>(k), eta, c));
    }
    return sets;
}

double HullRegion::min_slack(Complex s) const {
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& hp : half_planes) worst = std::min(worst, hp.slack(s));
    return worst;
}

std::vector<std::pair<std::size_t, std::size_t>> HullRegion::edges() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    const std::size_t n = vertices.size();
    for (std::size_t i = 0; i + 1 < n; ++i) out.emplace_back(i, i + 1);
    if (!closing_dropped) out.emplace_back(n - 1, 0);
    return out;
}

HullRegion build_hull(const SimilaritySet& ss) {
    if (ss.eta < 2) throw ValidationError("build_hull needs eta >= 2");
    if (ss.order < 3) throw ValidationError("build_hull needs omega >= 3 (a two-point alphabet spans a segment)");

    HullRegion h;
    h.vertices = ss.points;
    h.arc_case = 2 * ss.eta < ss.order ? ArcCase::BelowPi : ArcCase::AtLeastPi;

    const auto& p = ss.points;
    const std::size_t eta = static_cast<std::size_t>(ss.eta);
    for (std::size_t mu = 0; mu < eta; ++mu) {
        const Complex m = (p[mu] + p[mu + 1]) / 2.0;
        h.half_planes.push_back({m, m, Sense::LessEqual});
    }

    if (ss.eta == ss.order) {
        h.closing_dropped = true;
        return h;
    }
    const Complex m = (p[eta] + p[0]) / 2.0;
    if (2 * ss.eta == ss.order) {
        // phi == pi: the closing chord is a diameter and m vanishes, so the
        // normal points along the reference direction instead.
        const Complex u = p[eta / 2] / std::abs(p[eta / 2]);
        h.half_planes.push_back({m, u, Sense::GreaterEqual});
    } else {
        const Sense closing = h.arc_case == ArcCase::BelowPi ? Sense::GreaterEqual : Sense::LessEqual;
        h.half_planes.push_back({m, m, closing});
    }
    return h;
}

std::vector<HullRegion> build_hulls(const std::vector<SimilaritySet>& sets) {
    std::vector<HullRegion> hulls;
    hulls.reserve(sets.size());
    for (const auto& ss : sets) hulls.push_back(build_hull(ss));
    return hulls;
}

bool hull_contains(Complex point, const HullRegion& h) { return h.min_slack(point) >= -kHullSlack; }

Complex project_onto_hull(Complex point, const HullRegion& h) {
    if (hull_contains(point, h)) return point;
    Complex best = h.vertices.front();
    double best_dist = std::abs(point - best);
    for (const auto& [ia, ib] : h.edges()) {
        const Complex a = h.vertices[ia];
        const Complex d = h.vertices[ib] - a;
        const double len2 = std::norm(d);
        Complex candidate = a;
        if (len2 > 0.0) {
            const double t = std::clamp((std::conj(d) * (point - a)).real() / len2, 0.0, 1.0);
            candidate = a + t * d;
        }
        const double dist = std::abs(point - candidate);
        if (dist < best_dist) {
            best = candidate;
            best_dist = dist;
        }
    }
    return best;
}

std::size_t nearest_point_index(Complex z, const SimilaritySet& ss) {
    const double tie = kTieTolerance * ss.modulus;
    std::size_t best = 0;
    double best_dist = std::abs(z - ss.points[0]);
    for (std::size_t mu = 1; mu < ss.points.size(); ++mu) {
        const double d = std::abs(z - ss.points[mu]);
        if (d < best_dist - tie) {
            best = mu;
            best_dist = d;
        }
    }
    return best;
}

Complex quantize_nearest(Complex z, const SimilaritySet& ss) { return ss.points[nearest_point_index(z, ss)]; }

}  // namespace camwave
