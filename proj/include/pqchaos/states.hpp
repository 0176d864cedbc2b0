#pragma once

// Coherent Gibbs states, density matrices in the energy eigenbasis and their
// row-major ("horizontal") Liouville-space vectorization.

#include <cmath>
#include <utility>

#include <Eigen/Eigenvalues>

#include "pqchaos/core.hpp"

namespace pqchaos::states {

/// Partition function sum_n exp(-beta E_n), evaluated as
/// exp(-beta E_min) sum_n exp(-beta (E_n - E_min)).
inline double partition_function(const RealVector& energies, double beta) {
    if (!(beta >= 0.0)) throw DomainError("partition_function: beta must be >= 0");
    if (energies.size() == 0) throw InvalidDimension("partition_function: empty spectrum");
    const double e0 = energies.minCoeff();
    double acc = 0.0;
    for (Eigen::Index n = 0; n < energies.size(); ++n) acc += std::exp(-beta * (energies(n) - e0));
    return std::exp(-beta * e0) * acc;
}

/// Boltzmann weights p_n = exp(-beta E_n) / Z(beta), computed shift-free of
/// overflow.
inline RealVector boltzmann_weights(const RealVector& energies, double beta) {
    if (!(beta >= 0.0)) throw DomainError("boltzmann_weights: beta must be >= 0");
    if (energies.size() == 0) throw InvalidDimension("boltzmann_weights: empty spectrum");
    const double e0 = energies.minCoeff();
    RealVector w = (-beta * (energies.array() - e0)).exp().matrix();
    return w / w.sum();
}

/// Z(beta + i t / hbar) = sum_n exp(-(beta + i t / hbar) E_n).
inline Complex complex_partition_function(const RealVector& energies, double beta, double t,
                                          double hbar = 1.0) {
    Complex acc = 0.0;
    for (Eigen::Index n = 0; n < energies.size(); ++n)
        acc += std::exp(Complex(-beta * energies(n), -t * energies(n) / hbar));
    return acc;
}

/// Plateau F_p = Z(2 beta) / Z(beta)^2 = sum_n p_n^2.
inline double plateau_value(const RealVector& energies, double beta) {
    return boltzmann_weights(energies, beta).squaredNorm();
}

/// |Psi_beta> = sum_n sqrt(p_n) |n>.
struct CoherentGibbsState {
    double beta = 0.0;
    RealVector amplitudes;
    RealVector energies;

    int dim() const { return static_cast<int>(amplitudes.size()); }
    RealVector weights() const { return amplitudes.array().square().matrix(); }
};

inline CoherentGibbsState make_cgs(const RealVector& energies, double beta) {
    CoherentGibbsState s;
    s.beta = beta;
    s.amplitudes = boltzmann_weights(energies, beta).array().sqrt().matrix();
    s.energies = energies;
    return s;
}

/// Density matrix rho_nm in the energy eigenbasis.
class DensityMatrix {
public:
    DensityMatrix() = default;

    /// Wraps without validation; for states produced by trusted maps.
    explicit DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {
        if (m_.rows() != m_.cols()) throw DimensionMismatch("DensityMatrix: matrix must be square");
    }

    /// Validates Hermiticity (1e-10), unit trace (1e-10) and positivity
    /// (smallest eigenvalue >= -1e-8).
    static DensityMatrix checked(ComplexMatrix m) {
        DensityMatrix rho(std::move(m));
        if (rho.hermiticity_error() > 1e-10) throw DomainError("DensityMatrix: not Hermitian");
        if (std::abs(rho.trace() - 1.0) > 1e-10) throw DomainError("DensityMatrix: trace is not 1");
        if (rho.min_eigenvalue() < -1e-8) throw DomainError("DensityMatrix: not positive semidefinite");
        return rho;
    }

    static DensityMatrix maximally_mixed(int d) {
        return DensityMatrix(ComplexMatrix::Identity(d, d) / static_cast<double>(d));
    }

    int dim() const { return static_cast<int>(m_.rows()); }
    const ComplexMatrix& matrix() const { return m_; }
    ComplexMatrix& matrix() { return m_; }
    Complex operator()(Eigen::Index n, Eigen::Index m) const { return m_(n, m); }

    double trace() const { return m_.trace().real(); }
    double hermiticity_error() const { return max_norm(m_ - m_.adjoint()); }
    double min_eigenvalue() const {
        ComplexMatrix h = 0.5 * (m_ + m_.adjoint());
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
        return es.eigenvalues().minCoeff();
    }

private:
    ComplexMatrix m_;
};

/// rho_nm(0) = sqrt(p_n p_m): the projector onto the CGS.
inline DensityMatrix cgs_density(const CoherentGibbsState& s) {
    ComplexMatrix m = (s.amplitudes * s.amplitudes.transpose()).cast<Complex>();
    return DensityMatrix(std::move(m));
}

/// |rho) with entry (n, m) at position n d + m.
class VectorizedState {
public:
    explicit VectorizedState(ComplexVector v) : v_(std::move(v)) {
        const auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(v_.size()))));
        if (d * d != v_.size()) throw DimensionMismatch("VectorizedState: length must be a square");
        dim_ = static_cast<int>(d);
    }
    int dim() const { return dim_; }
    const ComplexVector& vector() const { return v_; }

private:
    ComplexVector v_;
    int dim_ = 0;
};

inline VectorizedState vectorize(const DensityMatrix& rho) {
    const int d = rho.dim();
    ComplexVector v(static_cast<Eigen::Index>(d) * d);
    for (int n = 0; n < d; ++n)
        for (int m = 0; m < d; ++m) v(static_cast<Eigen::Index>(n) * d + m) = rho(n, m);
    return VectorizedState(std::move(v));
}

inline DensityMatrix devectorize(const VectorizedState& v) {
    const int d = v.dim();
    ComplexMatrix m(d, d);
    for (int n = 0; n < d; ++n)
        for (int k = 0; k < d; ++k) m(n, k) = v.vector()(static_cast<Eigen::Index>(n) * d + k);
    return DensityMatrix(std::move(m));
}

/// Hilbert-Schmidt product (A|B) = Tr[A^dag B].
inline Complex hs_inner(const VectorizedState& a, const VectorizedState& b) {
    return a.vector().dot(b.vector());  // Eigen's dot conjugates the left operand
}

}  // namespace pqchaos::states
