#pragma once

// Seeded random-matrix sampling (GOE Hamiltonians, CUE unitaries, Kraus sets
// from block truncation) and the energy scales derived from the GOE
// semicircle.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "pqchaos/core.hpp"
#include "pqchaos/random.hpp"

namespace pqchaos::rmt {

/// Spectrum of a sampled Hermitian Hamiltonian, energies sorted ascending.
/// When the Hamiltonian came from a matrix the matrix and its orthonormal
/// eigenvectors (columns, same order as `energies`) are kept alongside.
struct HamiltonianSpectrum {
    int dim = 0;
    double sigma = 1.0;
    std::uint64_t seed = 0;
    RealVector energies;
    std::optional<RealMatrix> matrix;
    std::optional<RealMatrix> eigenvectors;

    static HamiltonianSpectrum from_energies(RealVector energies, double sigma = 1.0,
                                             std::uint64_t seed = 0) {
        if (energies.size() < 1) throw InvalidDimension("HamiltonianSpectrum: empty spectrum");
        std::sort(energies.data(), energies.data() + energies.size());
        HamiltonianSpectrum hs;
        hs.dim = static_cast<int>(energies.size());
        hs.sigma = sigma;
        hs.seed = seed;
        hs.energies = std::move(energies);
        return hs;
    }

    static HamiltonianSpectrum from_matrix(const RealMatrix& h, double sigma = 1.0,
                                           std::uint64_t seed = 0) {
        if (h.rows() != h.cols() || h.rows() < 1)
            throw InvalidDimension("HamiltonianSpectrum: matrix must be square and non-empty");
        if (max_norm(h - h.transpose()) > 1e-12 * std::max(1.0, max_norm(h)))
            throw DomainError("HamiltonianSpectrum: matrix is not symmetric");
        Eigen::SelfAdjointEigenSolver<RealMatrix> es(h);
        if (es.info() != Eigen::Success) throw EigensolverError("HamiltonianSpectrum: eigensolve failed");
        HamiltonianSpectrum hs;
        hs.dim = static_cast<int>(h.rows());
        hs.sigma = sigma;
        hs.seed = seed;
        hs.energies = es.eigenvalues();  // ascending
        hs.matrix = h;
        hs.eigenvectors = es.eigenvectors();
        return hs;
    }

    double spectral_width() const { return energies(dim - 1) - energies(0); }
};

/// A set of Kraus-Choi operators N_r, r = 1..K, all d x d.
///
/// `checked` enforces sum_r N_r^dag N_r = 1 (max-norm tolerance 1e-12 by
/// default). `generator_only` skips that check; such sets may feed a
/// Lindblad generator but are rejected by finite-step channels.
class KrausSet {
public:
    static KrausSet checked(std::vector<ComplexMatrix> ops, std::uint64_t seed = 0,
                            double tolerance = 1e-12) {
        KrausSet ks = make(std::move(ops), seed);
        const int d = ks.dim_;
        const long max_count = std::max(1, d * d - 2);
        if (ks.count() > max_count)
            throw RangeError("KrausSet: count must lie in {1, ..., d^2 - 2}");
        const double err = ks.trace_preservation_error();
        if (!(err <= tolerance))
            throw NotTracePreserving("KrausSet: sum of N^dag N deviates from identity by " +
                                     std::to_string(err));
        return ks;
    }

    static KrausSet generator_only(std::vector<ComplexMatrix> ops, std::uint64_t seed = 0) {
        KrausSet ks = make(std::move(ops), seed);
        ks.generator_only_ = true;
        return ks;
    }

    int dim() const { return dim_; }
    int count() const { return static_cast<int>(ops_.size()); }
    std::uint64_t seed() const { return seed_; }
    bool is_generator_only() const { return generator_only_; }
    const std::vector<ComplexMatrix>& operators() const { return ops_; }
    const ComplexMatrix& operator[](std::size_t r) const { return ops_[r]; }

    double trace_preservation_error() const {
        ComplexMatrix acc = ComplexMatrix::Zero(dim_, dim_);
        for (const auto& n : ops_) acc.noalias() += n.adjoint() * n;
        return max_norm(acc - ComplexMatrix::Identity(dim_, dim_));
    }

    /// Same operators expressed in another orthonormal basis: N -> B^dag N B.
    KrausSet rotated(const ComplexMatrix& basis) const {
        if (basis.rows() != dim_ || basis.cols() != dim_)
            throw DimensionMismatch("KrausSet::rotated: basis dimension mismatch");
        KrausSet out = *this;
        for (auto& n : out.ops_) n = basis.adjoint() * n * basis;
        return out;
    }

private:
    static KrausSet make(std::vector<ComplexMatrix> ops, std::uint64_t seed) {
        if (ops.empty()) throw InvalidDimension("KrausSet: at least one operator required");
        const auto d = ops.front().rows();
        if (d < 1) throw InvalidDimension("KrausSet: empty operator");
        for (const auto& n : ops)
            if (n.rows() != d || n.cols() != d)
                throw DimensionMismatch("KrausSet: all operators must be d x d");
        KrausSet ks;
        ks.dim_ = static_cast<int>(d);
        ks.ops_ = std::move(ops);
        ks.seed_ = seed;
        return ks;
    }

    int dim_ = 0;
    std::vector<ComplexMatrix> ops_;
    std::uint64_t seed_ = 0;
    bool generator_only_ = false;
};

/// GOE(d) sample: real symmetric, off-diagonal N(0, sigma^2 / 2), diagonal
/// N(0, sigma^2), i.e. (A + A^T) / 2 with A_ij ~ N(0, sigma^2). The
/// semicircle radius is then sqrt(2 d sigma^2).
inline HamiltonianSpectrum sample_goe(int d, double sigma, std::uint64_t seed) {
    if (d < 2) throw InvalidDimension("sample_goe: d must be >= 2");
    if (!(sigma > 0.0)) throw DomainError("sample_goe: sigma must be positive");
    RandomStream rng(seed, 0, StreamPurpose::Hamiltonian);
    RealMatrix h(d, d);
    const double off_sd = sigma / std::sqrt(2.0);
    for (int j = 0; j < d; ++j) {
        h(j, j) = rng.normal(0.0, sigma);
        for (int i = j + 1; i < d; ++i) {
            const double x = rng.normal(0.0, off_sd);
            h(i, j) = x;
            h(j, i) = x;
        }
    }
    return HamiltonianSpectrum::from_matrix(h, sigma, seed);
}

/// Haar-random unitary of size n: QR of a complex Ginibre matrix with R's
/// diagonal phases folded back into Q.
inline ComplexMatrix sample_cue(int n, std::uint64_t seed) {
    if (n < 1) throw InvalidDimension("sample_cue: n must be >= 1");
    RandomStream rng(seed, 0, StreamPurpose::Kraus);
    ComplexMatrix z(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) z(i, j) = rng.complex_normal();
    Eigen::HouseholderQR<ComplexMatrix> qr(z);
    ComplexMatrix q = qr.householderQ();
    const ComplexMatrix& r = qr.matrixQR();
    for (int j = 0; j < n; ++j) {
        const Complex rjj = r(j, j);
        const double mod = std::abs(rjj);
        const Complex phase = mod > 0.0 ? rjj / mod : Complex{1.0, 0.0};
        q.col(j) *= phase;
    }
    return q;
}

/// Kraus set from K consecutive d x d row blocks of the d columns of V
/// starting after `column_offset` (1 <= offset <= d (K - 1); ignored when
/// K = 1): N_r(nu, mu) = V(r d + nu, offset + mu), zero-based.
inline KrausSet kraus_from_truncation(const ComplexMatrix& v, int d, int k, int column_offset = 1,
                                      std::uint64_t seed = 0) {
    if (d < 1 || k < 1) throw InvalidDimension("kraus_from_truncation: d and K must be >= 1");
    const long n = static_cast<long>(k) * d;
    if (v.rows() != n || v.cols() != n)
        throw DimensionMismatch("kraus_from_truncation: V must be (K d) x (K d)");
    int offset = 0;
    if (k > 1) {
        if (column_offset < 1 || column_offset > d * (k - 1))
            throw RangeError("kraus_from_truncation: column_offset must lie in [1, d (K - 1)]");
        offset = column_offset;
    }
    if (max_norm(v.adjoint() * v - ComplexMatrix::Identity(n, n)) > 1e-10)
        throw DomainError("kraus_from_truncation: V is not unitary");
    std::vector<ComplexMatrix> ops;
    ops.reserve(k);
    for (int r = 0; r < k; ++r) ops.emplace_back(v.block(static_cast<long>(r) * d, offset, d, d));
    return KrausSet::checked(std::move(ops), seed);
}

/// Kraus set from a fresh CUE(K d) element.
inline KrausSet sample_kraus(int d, int k, std::uint64_t seed, int column_offset = 1) {
    return kraus_from_truncation(sample_cue(k * d, seed), d, k, column_offset, seed);
}

/// Mean GOE level spacing sigma sqrt(8 d) / (d - 1), before unfolding.
inline double mean_level_spacing(int d, double sigma) {
    if (d < 2) throw InvalidDimension("mean_level_spacing: d must be >= 2");
    return sigma * std::sqrt(8.0 * d) / (d - 1);
}

/// t_H = pi hbar (d - 1) / (sigma sqrt(2 d)) = 2 pi hbar / Delta.
inline double heisenberg_time(int d, double sigma, double hbar = 1.0) {
    if (d < 2) throw InvalidDimension("heisenberg_time: d must be >= 2");
    return kPi * hbar * (d - 1) / (sigma * std::sqrt(2.0 * d));
}

/// tau_c = pi hbar / (sigma sqrt(2 d)); t_H = (d - 1) tau_c.
inline double critical_tau(int d, double sigma, double hbar = 1.0) {
    if (d < 2) throw InvalidDimension("critical_tau: d must be >= 2");
    return kPi * hbar / (sigma * std::sqrt(2.0 * d));
}

/// Semicircle density normalised to one, radius sqrt(2 d sigma^2).
inline double semicircle_density(double e, int d, double sigma) {
    const double r2 = 2.0 * d * sigma * sigma;
    if (e * e >= r2) return 0.0;
    return std::sqrt(r2 - e * e) / (kPi * d * sigma * sigma);
}

}  // namespace pqchaos::rmt
