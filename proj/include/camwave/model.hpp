#pragma once

// Colocated MIMO radar scene: steering matrices, signal-dependent clutter,
// receive filtering and output SINR.
//
// A transmit waveform s stacks N snapshots of N_T samples each
// (s = [s_1; ...; s_N]); the receive side stacks N snapshots of N_R samples.
// A(theta) = I_N (x) a_r(theta) a_t(theta)^T maps one onto the other.

#include "camwave/types.hpp"

#include <vector>

namespace camwave {

struct Interferer {
    double angle_rad = 0.0;
    double power_db = 0.0;
};

struct Scenario {
    int n_tx = 1;
    int n_rx = 1;
    int n_samples = 1;
    double target_angle_rad = 0.0;
    double target_power_db = 0.0;
    std::vector<Interferer> interferers;
    double noise_power_db = 0.0;

    /// Length of the stacked transmit vector, N_T * N.
    int tx_length() const { return n_tx * n_samples; }
    /// Length of the stacked receive vector, N_R * N.
    int rx_length() const { return n_rx * n_samples; }

    /// Target-to-noise ratio E|alpha_0|^2 / sigma_n^2 (linear).
    double target_snr() const;
    /// Interference-to-noise ratio of interferer m (linear).
    double interferer_inr(std::size_t m) const;

    /// Throws ValidationError naming the offending field.
    void validate() const;
};

struct Waveform {
    CVector entries;
    double modulus = 0.0;
    bool constant_modulus = false;

    /// Checks the constant-modulus flag against the entries (1e-9 tolerance).
    bool satisfies_modulus(double tol = 1e-9) const;
};

/// Nominal per-entry modulus 1/sqrt(N_T * N).
double nominal_modulus(int n_tx, int n_samples);

/// Wraps an arbitrary vector; the constant-modulus flag is set when every
/// entry already has the nominal modulus.
Waveform make_waveform(CVector entries, int n_tx, int n_samples);

struct Filter {
    CVector entries;
};

/// Half-wavelength ULA steering vector, element i = exp(j*pi*i*sin(angle)).
CVector steering_vector(double angle_rad, int n_elements);

/// I_N (x) (a_r a_t^T), dense (N_R N) x (N_T N).
CMatrix steering_matrix(const Scenario& scenario, double angle_rad);

/// T(s) = sum_m I_m A(theta_m) s s^H A(theta_m)^H.
CMatrix clutter_matrix(const Scenario& scenario, const Waveform& s);

/// sigma |f^H A(theta_0) s|^2 / (f^H T(s) f + f^H f), linear.
double sinr(const Scenario& scenario, const Waveform& s, const Filter& f);

/// Max-SINR receive filter (T(s) + I)^{-1} A(theta_0) s.
Filter optimal_filter(const Scenario& scenario, const Waveform& s);

/// Y(s) = A(theta_0)^H (T(s) + I)^{-1} A(theta_0), Hermitian PSD.
CMatrix y_matrix(const Scenario& scenario, const Waveform& s);

/// Same as y_matrix for a raw stacked vector (no modulus bookkeeping).
CMatrix y_matrix(const Scenario& scenario, const CVector& s);

/// sigma * s^H Y(s) s, the SINR reached with the optimal filter.
double optimal_sinr(const Scenario& scenario, const CVector& s);

/// Real part of s^H Y s.
double quadratic_form(const CMatrix& y, const CVector& s);

/// Orthogonal chirp S0(k,n) = exp(j2pi k(n-1)/N) exp(j pi (n-1)^2/N)/sqrt(N_T N),
/// stacked column by column (snapshot by snapshot).
Waveform chirp_reference(int n_tx, int n_samples);

}  // namespace camwave
