#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace pqchaos {

using Complex = std::complex<double>;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr Complex kI{0.0, 1.0};

// Error hierarchy. Each maps onto one failure class named by the module
// contracts; all derive from a std exception so callers can catch broadly.
struct InvalidDimension : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct RangeError : std::out_of_range {
    using std::out_of_range::out_of_range;
};
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};
struct DimensionMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct UnsupportedRegime : std::domain_error {
    using std::domain_error::domain_error;
};
struct InvalidWindow : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct InsufficientData : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct NotTracePreserving : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct EigensolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Largest absolute entry of a dense matrix expression.
template <typename Derived>
double max_norm(const Eigen::MatrixBase<Derived>& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace pqchaos
