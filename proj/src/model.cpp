#include "camwave/model.hpp"

#include <cmath>
#include <string>

namespace camwave {

namespace {

constexpr double kHalfPi = kPi / 2.0;

void require_length(const CVector& v, int expected, const char* what) {
    if (v.size() != expected) {
        throw DimensionError(std::string(what) + ": expected length " + std::to_string(expected) +
                             ", got " + std::to_string(v.size()));
    }
}

// A(theta) s without forming A: snapshot n maps to a_r * (a_t^T s_n).
CVector apply_steering(const Scenario& sc, double angle, const CVector& s) {
    const CVector a_t = steering_vector(angle, sc.n_tx);
    const CVector a_r = steering_vector(angle, sc.n_rx);
    CVector out(sc.rx_length());
    for (int n = 0; n < sc.n_samples; ++n) {
        const Complex gain = (a_t.transpose() * s.segment(n * sc.n_tx, sc.n_tx))(0);
        out.segment(n * sc.n_rx, sc.n_rx) = gain * a_r;
    }
    return out;
}

CMatrix clutter_from_vector(const Scenario& sc, const CVector& s) {
    CMatrix t = CMatrix::Zero(sc.rx_length(), sc.rx_length());
    for (std::size_t m = 0; m < sc.interferers.size(); ++m) {
        const CVector echo = apply_steering(sc, sc.interferers[m].angle_rad, s);
        t.noalias() += sc.interferer_inr(m) * (echo * echo.adjoint());
    }
    return t;
}

Eigen::LLT<CMatrix> factor_disturbance(const Scenario& sc, const CVector& s) {
    CMatrix r = clutter_from_vector(sc, s);
    r.diagonal().array() += 1.0;
    Eigen::LLT<CMatrix> llt(r);
    if (llt.info() != Eigen::Success) {
        throw NumericalError("Cholesky factorization of T(s) + I failed");
    }
    return llt;
}

}  // namespace

double Scenario::target_snr() const { return db_to_linear(target_power_db - noise_power_db); }

double Scenario::interferer_inr(std::size_t m) const {
    return db_to_linear(interferers.at(m).power_db - noise_power_db);
}

void Scenario::validate() const {
    if (n_tx < 1) throw ValidationError("scenario.n_tx must be >= 1");
    if (n_rx < 1) throw ValidationError("scenario.n_rx must be >= 1");
    if (n_samples < 1) throw ValidationError("scenario.n_samples must be >= 1");
    auto angle_ok = [](double a) { return std::isfinite(a) && std::abs(a) <= kHalfPi + 1e-12; };
    if (!angle_ok(target_angle_rad)) {
        throw ValidationError("scenario.target_angle must lie in [-90, 90] degrees");
    }
    auto ratio_ok = [](double r) { return std::isfinite(r) && r > 0.0; };
    if (!std::isfinite(noise_power_db)) throw ValidationError("scenario.noise_power_db must be finite");
    if (!ratio_ok(target_snr())) {
        throw ValidationError("scenario.target_power_db gives a non-positive or non-finite SNR");
    }
    for (std::size_t m = 0; m < interferers.size(); ++m) {
        if (!angle_ok(interferers[m].angle_rad)) {
            throw ValidationError("scenario.interferers[" + std::to_string(m) +
                                  "] angle must lie in [-90, 90] degrees");
        }
        if (!ratio_ok(interferer_inr(m))) {
            throw ValidationError("scenario.interferers[" + std::to_string(m) +
                                  "] power gives a non-positive or non-finite ratio");
        }
    }
}

double nominal_modulus(int n_tx, int n_samples) {
    return 1.0 / std::sqrt(static_cast<double>(n_tx) * static_cast<double>(n_samples));
}

bool Waveform::satisfies_modulus(double tol) const {
    for (Eigen::Index k = 0; k < entries.size(); ++k) {
        if (std::abs(std::abs(entries(k)) - modulus) > tol) return false;
    }
    return true;
}

Waveform make_waveform(CVector entries, int n_tx, int n_samples) {
    Waveform w;
    w.entries = std::move(entries);
    w.modulus = nominal_modulus(n_tx, n_samples);
    w.constant_modulus = w.satisfies_modulus();
    return w;
}

CVector steering_vector(double angle_rad, int n_elements) {
    CVector a(n_elements);
    const double phase_step = kPi * std::sin(angle_rad);
    for (int i = 0; i < n_elements; ++i) {
        a(i) = std::polar(1.0, phase_step * i);
    }
    return a;
}

CMatrix steering_matrix(const Scenario& scenario, double angle_rad) {
    const CVector a_t = steering_vector(angle_rad, scenario.n_tx);
    const CVector a_r = steering_vector(angle_rad, scenario.n_rx);
    const CMatrix block = a_r * a_t.transpose();
    CMatrix a = CMatrix::Zero(scenario.rx_length(), scenario.tx_length());
    for (int n = 0; n < scenario.n_samples; ++n) {
        a.block(n * scenario.n_rx, n * scenario.n_tx, scenario.n_rx, scenario.n_tx) = block;
    }
    return a;
}

CMatrix clutter_matrix(const Scenario& scenario, const Waveform& s) {
    require_length(s.entries, scenario.tx_length(), "clutter_matrix waveform");
    return clutter_from_vector(scenario, s.entries);
}

double sinr(const Scenario& scenario, const Waveform& s, const Filter& f) {
    require_length(s.entries, scenario.tx_length(), "sinr waveform");
    require_length(f.entries, scenario.rx_length(), "sinr filter");
    const CVector target = apply_steering(scenario, scenario.target_angle_rad, s.entries);
    const double signal = std::norm(f.entries.dot(target));
    double disturbance = f.entries.squaredNorm();
    for (std::size_t m = 0; m < scenario.interferers.size(); ++m) {
        const CVector echo = apply_steering(scenario, scenario.interferers[m].angle_rad, s.entries);
        disturbance += scenario.interferer_inr(m) * std::norm(f.entries.dot(echo));
    }
    return scenario.target_snr() * signal / disturbance;
}

Filter optimal_filter(const Scenario& scenario, const Waveform& s) {
    require_length(s.entries, scenario.tx_length(), "optimal_filter waveform");
    const auto llt = factor_disturbance(scenario, s.entries);
    const CVector target = apply_steering(scenario, scenario.target_angle_rad, s.entries);
    return Filter{llt.solve(target)};
}

CMatrix y_matrix(const Scenario& scenario, const CVector& s) {
    require_length(s, scenario.tx_length(), "y_matrix waveform");
    const auto llt = factor_disturbance(scenario, s);
    const CMatrix a0 = steering_matrix(scenario, scenario.target_angle_rad);
    CMatrix y = a0.adjoint() * llt.solve(a0);
    // Symmetrize away rounding so downstream code sees an exactly Hermitian matrix.
    return (y + y.adjoint()) * 0.5;
}

CMatrix y_matrix(const Scenario& scenario, const Waveform& s) { return y_matrix(scenario, s.entries); }

double quadratic_form(const CMatrix& y, const CVector& s) { return s.dot(y * s).real(); }

double optimal_sinr(const Scenario& scenario, const CVector& s) {
    return scenario.target_snr() * quadratic_form(y_matrix(scenario, s), s);
}

Waveform chirp_reference(int n_tx, int n_samples) {
    if (n_tx < 1 || n_samples < 1) throw ValidationError("chirp_reference needs n_tx, n_samples >= 1");
    const double scale = nominal_modulus(n_tx, n_samples);
    const double nn = static_cast<double>(n_samples);
    CVector s(n_tx * n_samples);
    for (int n = 1; n <= n_samples; ++n) {
        const double lag = static_cast<double>(n - 1);
        for (int k = 1; k <= n_tx; ++k) {
            const double phase = 2.0 * kPi * k * lag / nn + kPi * lag * lag / nn;
            s((n - 1) * n_tx + (k - 1)) = std::polar(scale, phase);
        }
    }
    Waveform w;
    w.entries = std::move(s);
    w.modulus = scale;
    w.constant_modulus = true;
    return w;
}

}  // namespace camwave
