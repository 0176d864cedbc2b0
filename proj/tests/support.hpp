#pragma once

// Independent reference implementations used as test oracles. Nothing here
// calls into the closed forms under test.

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "pqchaos/random.hpp"
#include "pqchaos/states.hpp"

namespace testsupport {

using pqchaos::Complex;
using pqchaos::ComplexMatrix;
using pqchaos::RealMatrix;
using pqchaos::RealVector;

inline ComplexMatrix random_complex(int rows, int cols, std::uint64_t seed) {
    pqchaos::RandomStream rng(seed, 7, pqchaos::StreamPurpose::Generic);
    ComplexMatrix m(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) m(i, j) = rng.complex_normal();
    return m;
}

/// Random full-rank density matrix G G^dag / Tr.
inline pqchaos::states::DensityMatrix random_density(int d, std::uint64_t seed) {
    const ComplexMatrix g = random_complex(d, d, seed);
    ComplexMatrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    return pqchaos::states::DensityMatrix::checked(rho);
}

inline pqchaos::states::DensityMatrix random_pure(int d, std::uint64_t seed) {
    pqchaos::ComplexVector psi = random_complex(d, 1, seed).col(0);
    psi.normalize();
    return pqchaos::states::DensityMatrix(psi * psi.adjoint());
}

/// Right-hand side of d rho/dt = -(i/hbar)[H, rho] - gamma [H, [H, rho]].
inline ComplexMatrix dephasing_rhs(const ComplexMatrix& h, const ComplexMatrix& rho, double gamma, double hbar) {
    const ComplexMatrix c = h * rho - rho * h;
    const ComplexMatrix cc = h * c - c * h;
    return Complex(0.0, -1.0 / hbar) * c - gamma * cc;
}

/// Classical fourth-order Runge-Kutta with fixed step.
inline ComplexMatrix rk4_dephasing(const ComplexMatrix& h, ComplexMatrix rho, double gamma, double hbar, double t,
                                   double dt) {
    const long steps = std::lround(t / dt);
    const double step = t / static_cast<double>(steps);
    for (long s = 0; s < steps; ++s) {
        const ComplexMatrix k1 = dephasing_rhs(h, rho, gamma, hbar);
        const ComplexMatrix k2 = dephasing_rhs(h, rho + 0.5 * step * k1, gamma, hbar);
        const ComplexMatrix k3 = dephasing_rhs(h, rho + 0.5 * step * k2, gamma, hbar);
        const ComplexMatrix k4 = dephasing_rhs(h, rho + step * k3, gamma, hbar);
        rho += (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return rho;
}

/// Direct double sum over all (n, m) of the isolated fidelity, no pair table.
inline double isolated_sff_double_sum(const RealVector& e, double t) {
    const double d = static_cast<double>(e.size());
    double acc = 0.0;
    for (Eigen::Index n = 0; n < e.size(); ++n)
        for (Eigen::Index m = 0; m < e.size(); ++m) acc += std::cos((e(n) - e(m)) * t);
    return acc / (d * d);
}

/// Kolmogorov-Smirnov statistic of samples against the uniform CDF on [0, 1).
inline double ks_uniform(std::vector<double> u) {
    std::sort(u.begin(), u.end());
    const double n = static_cast<double>(u.size());
    double dmax = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        dmax = std::max(dmax, (i + 1) / n - u[i]);
        dmax = std::max(dmax, u[i] - i / n);
    }
    return dmax;
}

}  // namespace testsupport
