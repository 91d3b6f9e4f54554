#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace camwave {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

inline constexpr double kPi = 3.14159265358979323846;

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double value) { return 10.0 * std::log10(value); }

// Error hierarchy. The CLI maps each family onto a distinct exit code.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

class NumericalError : public Error {
public:
    using Error::Error;
};

class BudgetExceeded : public Error {
public:
    BudgetExceeded(std::uint64_t cardinality, std::uint64_t budget)
        : Error("candidate count " + std::to_string(cardinality) + " exceeds budget " +
                std::to_string(budget)),
          cardinality_(cardinality),
          budget_(budget) {}

    std::uint64_t cardinality() const { return cardinality_; }
    std::uint64_t budget() const { return budget_; }

private:
    std::uint64_t cardinality_;
    std::uint64_t budget_;
};

}  // namespace camwave
