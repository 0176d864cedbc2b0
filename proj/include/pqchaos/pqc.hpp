#pragma once

// Parametric quantum channels
//   Lambda[rho] = (1 - eps) U rho U^dag + eps sum_r N_r rho N_r^dag,  U = exp(-i tau H / hbar),
// their Liouville-space matrices, discrete-time evolution and the
// Markovian-limit Lindblad generator.
//
// Everything is expressed in the eigenbasis of H, where the unitary part is
// a diagonal phase map.

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "pqchaos/core.hpp"
#include "pqchaos/rmt.hpp"
#include "pqchaos/states.hpp"
#include "pqchaos/superoperator.hpp"

namespace pqchaos::pqc {

/// Basis in which a KrausSet handed to ParametricChannel is written.
enum class KrausBasis { Energy, Computational };

class ParametricChannel {
public:
    ParametricChannel(double tau, double epsilon, rmt::HamiltonianSpectrum hamiltonian, rmt::KrausSet kraus,
                      double hbar = 1.0, KrausBasis basis = KrausBasis::Energy)
        : tau_(tau), epsilon_(epsilon), hbar_(hbar), h_(std::move(hamiltonian)), kraus_(std::move(kraus)) {
        if (!(tau_ >= 0.0) || !std::isfinite(tau_)) throw DomainError("ParametricChannel: tau must be finite and >= 0");
        if (!(epsilon_ >= 0.0 && epsilon_ <= 1.0)) throw DomainError("ParametricChannel: epsilon must lie in [0, 1]");
        if (!(hbar_ > 0.0)) throw DomainError("ParametricChannel: hbar must be positive");
        if (kraus_.is_generator_only())
            throw NotTracePreserving("ParametricChannel: generator-only Kraus sets cannot define a finite-step channel");
        if (kraus_.dim() != h_.dim) throw DimensionMismatch("ParametricChannel: Kraus and Hamiltonian dimensions differ");
        if (basis == KrausBasis::Computational) {
            if (!h_.eigenvectors)
                throw DomainError("ParametricChannel: computational-basis Kraus set needs the Hamiltonian eigenvectors");
            kraus_ = kraus_.rotated(h_.eigenvectors->cast<Complex>());
        }
        const int d = h_.dim;
        phases_.resize(d, d);
        for (int n = 0; n < d; ++n)
            for (int m = 0; m < d; ++m)
                phases_(n, m) = std::exp(Complex(0.0, -tau_ * (h_.energies(n) - h_.energies(m)) / hbar_));
    }

    double tau() const { return tau_; }
    double epsilon() const { return epsilon_; }
    double hbar() const { return hbar_; }
    int dim() const { return h_.dim; }
    const rmt::HamiltonianSpectrum& hamiltonian() const { return h_; }
    /// Kraus operators in the energy eigenbasis.
    const rmt::KrausSet& kraus() const { return kraus_; }
    /// exp(-i tau (E_n - E_m) / hbar), the entrywise action of the unitary step.
    const ComplexMatrix& unitary_phases() const { return phases_; }

private:
    double tau_, epsilon_, hbar_;
    rmt::HamiltonianSpectrum h_;
    rmt::KrausSet kraus_;
    ComplexMatrix phases_;
};

inline states::DensityMatrix apply_channel(const ParametricChannel& ch, const states::DensityMatrix& rho) {
    if (rho.dim() != ch.dim()) throw DimensionMismatch("apply_channel: state and channel dimensions differ");
    const double eps = ch.epsilon();
    ComplexMatrix out = (1.0 - eps) * ch.unitary_phases().cwiseProduct(rho.matrix());
    if (eps > 0.0) {
        ComplexMatrix tmp(rho.dim(), rho.dim());
        for (const auto& n : ch.kraus().operators()) {
            tmp.noalias() = rho.matrix() * n.adjoint();
            out.noalias() += eps * (n * tmp);
        }
    }
    return states::DensityMatrix(std::move(out));
}

/// sum_r N_r (x) N_r^*.
inline ComplexMatrix kraus_superoperator(const rmt::KrausSet& kraus) {
    const Eigen::Index n2 = static_cast<Eigen::Index>(kraus.dim()) * kraus.dim();
    ComplexMatrix acc = ComplexMatrix::Zero(n2, n2);
    for (const auto& n : kraus.operators()) acc += kron(n, n.conjugate());
    return acc;
}

/// Diagonal of U_tau = exp(i tau (1 (x) H^T - H (x) 1) / hbar) in the energy basis.
inline ComplexVector unitary_superoperator_diagonal(const ParametricChannel& ch) {
    const int d = ch.dim();
    ComplexVector diag(static_cast<Eigen::Index>(d) * d);
    for (int n = 0; n < d; ++n)
        for (int m = 0; m < d; ++m) diag(static_cast<Eigen::Index>(n) * d + m) = ch.unitary_phases()(n, m);
    return diag;
}

inline Superoperator build_superoperator(const ParametricChannel& ch) {
    const double eps = ch.epsilon();
    ComplexMatrix m = eps * kraus_superoperator(ch.kraus());
    m.diagonal() += (1.0 - eps) * unitary_superoperator_diagonal(ch);
    return Superoperator(std::move(m));
}

/// W_eps U_tau with W_eps = (1 - eps) 1 + eps sum_r N_r (x) N_r^*: the unitary
/// step followed by a dissipative kick.
inline Superoperator build_wu_channel(const ParametricChannel& ch) {
    const double eps = ch.epsilon();
    const ComplexVector u = unitary_superoperator_diagonal(ch);
    ComplexMatrix m = eps * kraus_superoperator(ch.kraus());
    m.diagonal().array() += (1.0 - eps);
    m = m * u.asDiagonal();
    return Superoperator(std::move(m));
}

/// Calls observer(j, rho_j) for j = 0..steps, holding one state at a time.
template <typename Observer>
void evolve_streaming(const ParametricChannel& ch, const states::DensityMatrix& rho0, long steps, Observer&& observer) {
    if (steps < 0) throw DomainError("evolve_streaming: steps must be >= 0");
    states::DensityMatrix rho = rho0;
    observer(0L, rho);
    for (long j = 1; j <= steps; ++j) {
        rho = apply_channel(ch, rho);
        observer(j, rho);
    }
}

/// rho_0, Lambda[rho_0], ..., Lambda^steps[rho_0].
inline std::vector<states::DensityMatrix> evolve_discrete(const ParametricChannel& ch,
                                                          const states::DensityMatrix& rho0, long steps) {
    std::vector<states::DensityMatrix> out;
    out.reserve(static_cast<std::size_t>(std::max(0L, steps)) + 1);
    evolve_streaming(ch, rho0, steps, [&](long, const states::DensityMatrix& rho) { out.push_back(rho); });
    return out;
}

/// The single jump operator N_1 = H (energy basis) that turns the Lindblad
/// generator into energy dephasing. Not trace preserving, hence generator-only.
inline rmt::KrausSet hamiltonian_as_jump(const rmt::HamiltonianSpectrum& h) {
    return rmt::KrausSet::generator_only({h.energies.cast<Complex>().asDiagonal().toDenseMatrix()});
}

/// -(i/hbar)(H (x) 1 - 1 (x) H^T)
///   + 2 gamma sum_r [N_r (x) N_r^* - (N_r^dag N_r (x) 1 + 1 (x) (N_r^dag N_r)^T) / 2],
/// with H diagonal and the jump operators in the energy basis.
inline Superoperator lindblad_generator(const rmt::HamiltonianSpectrum& h, const rmt::KrausSet& jumps, double gamma,
                                        double hbar = 1.0) {
    if (jumps.dim() != h.dim) throw DimensionMismatch("lindblad_generator: dimension mismatch");
    if (!(gamma >= 0.0)) throw DomainError("lindblad_generator: gamma must be >= 0");
    if (!(hbar > 0.0)) throw DomainError("lindblad_generator: hbar must be positive");
    const int d = h.dim;
    const ComplexMatrix id = ComplexMatrix::Identity(d, d);
    const Eigen::Index n2 = static_cast<Eigen::Index>(d) * d;
    ComplexMatrix l = ComplexMatrix::Zero(n2, n2);
    for (int n = 0; n < d; ++n)
        for (int m = 0; m < d; ++m)
            l(static_cast<Eigen::Index>(n) * d + m, static_cast<Eigen::Index>(n) * d + m) =
                Complex(0.0, -(h.energies(n) - h.energies(m)) / hbar);
    for (const auto& jump : jumps.operators()) {
        const ComplexMatrix jj = jump.adjoint() * jump;
        l += 2.0 * gamma * (kron(jump, jump.conjugate()) - 0.5 * (kron(jj, id) + kron(id, jj.transpose())));
    }
    return Superoperator(std::move(l));
}

}  // namespace pqchaos::pqc
