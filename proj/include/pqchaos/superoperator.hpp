#pragma once

#include <cmath>
#include <utility>

#include <unsupported/Eigen/KroneckerProduct>

#include "pqchaos/core.hpp"
#include "pqchaos/states.hpp"

namespace pqchaos {

/// Dense d^2 x d^2 matrix of a linear map on d x d operators, acting on
/// row-major vectorized states: A rho B  ->  (A (x) B^T) |rho).
class Superoperator {
public:
    Superoperator() = default;
    explicit Superoperator(ComplexMatrix m) : m_(std::move(m)) {
        const auto n = m_.rows();
        if (n != m_.cols()) throw DimensionMismatch("Superoperator: matrix must be square");
        const auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(n))));
        if (d * d != n) throw DimensionMismatch("Superoperator: size must be a perfect square");
        dim_ = static_cast<int>(d);
    }

    /// Hilbert-space dimension d (the matrix is d^2 x d^2).
    int dim() const { return dim_; }
    const ComplexMatrix& matrix() const { return m_; }

    states::VectorizedState apply(const states::VectorizedState& v) const {
        if (v.dim() != dim_) throw DimensionMismatch("Superoperator::apply: dimension mismatch");
        return states::VectorizedState(m_ * v.vector());
    }

    states::DensityMatrix apply(const states::DensityMatrix& rho) const {
        return states::devectorize(apply(states::vectorize(rho)));
    }

    /// M^power by binary exponentiation.
    Superoperator pow(int power) const {
        if (power < 0) throw DomainError("Superoperator::pow: power must be >= 0");
        ComplexMatrix result = ComplexMatrix::Identity(m_.rows(), m_.cols());
        ComplexMatrix base = m_;
        while (power > 0) {
            if (power & 1) result = result * base;
            power >>= 1;
            if (power > 0) base = base * base;
        }
        return Superoperator(std::move(result));
    }

private:
    ComplexMatrix m_;
    int dim_ = 0;
};

inline Superoperator operator*(const Superoperator& a, const Superoperator& b) {
    if (a.dim() != b.dim()) throw DimensionMismatch("Superoperator product: dimension mismatch");
    return Superoperator(a.matrix() * b.matrix());
}

/// Kronecker product A (x) B for the row-major convention.
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    return Eigen::kroneckerProduct(a, b).eval();
}

}  // namespace pqchaos
