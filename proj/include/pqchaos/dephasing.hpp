#pragma once

// Energy dephasing: d rho/dt = -(i/hbar)[H, rho] - gamma [H, [H, rho]].
//
// In the energy eigenbasis every coherence evolves independently,
//   rho_nm(t) = rho_nm(0) exp(-(i/hbar) t w_nm - gamma t w_nm^2),  w_nm = E_n - E_m,
// so the CGS diagnostics reduce to sums over level pairs.

#include <cmath>
#include <vector>

#include "pqchaos/core.hpp"
#include "pqchaos/states.hpp"
#include "pqchaos/superoperator.hpp"

namespace pqchaos::dephasing {

struct EDParams {
    double gamma = 0.0;
    double hbar = 1.0;

    void validate() const {
        if (!(gamma >= 0.0)) throw DomainError("EDParams: gamma must be >= 0");
        if (!(hbar > 0.0)) throw DomainError("EDParams: hbar must be positive");
    }
};

inline states::DensityMatrix ed_evolve(const states::DensityMatrix& rho0, const RealVector& energies,
                                       const EDParams& params, double t) {
    params.validate();
    if (!(t >= 0.0)) throw DomainError("ed_evolve: t must be >= 0");
    const int d = rho0.dim();
    if (energies.size() != d) throw DimensionMismatch("ed_evolve: energies and state differ in dimension");
    ComplexMatrix out = rho0.matrix();
    for (int n = 0; n < d; ++n) {
        for (int m = 0; m < d; ++m) {
            if (n == m) continue;
            const double w = energies(n) - energies(m);
            out(n, m) *= std::exp(Complex(-params.gamma * t * w * w, -t * w / params.hbar));
        }
    }
    return states::DensityMatrix(std::move(out));
}

/// Closed-form CGS diagnostics under ED at one instant.
struct EDObservables {
    double sff = 0.0;
    double cl1 = 0.0;
    double purity = 0.0;
    /// d C_l1 / d gamma at fixed t.
    double cl1_gamma_derivative = 0.0;
};

/// Level-pair table for a fixed spectrum and temperature; evaluating the
/// diagnostics at a time costs one pass over the d (d - 1) / 2 pairs.
class PairTable {
public:
    PairTable(const RealVector& energies, double beta) : beta_(beta), dim_(static_cast<int>(energies.size())) {
        const RealVector p = states::boltzmann_weights(energies, beta);
        plateau_ = p.squaredNorm();
        const auto pairs = static_cast<std::size_t>(dim_) * (dim_ - 1) / 2;
        gaps_.reserve(pairs);
        pp_.reserve(pairs);
        sqrt_pp_.reserve(pairs);
        for (int n = 0; n < dim_; ++n) {
            for (int m = 0; m < n; ++m) {
                gaps_.push_back(energies(n) - energies(m));
                pp_.push_back(p(n) * p(m));
                sqrt_pp_.push_back(std::sqrt(p(n) * p(m)));
            }
        }
    }

    int dim() const { return dim_; }
    double beta() const { return beta_; }
    double plateau() const { return plateau_; }

    EDObservables at(const EDParams& params, double t) const {
        params.validate();
        if (!(t >= 0.0)) throw DomainError("ED diagnostics: t must be >= 0");
        double sff = 0.0, cl1 = 0.0, pur = 0.0, dcl1 = 0.0;
        for (std::size_t k = 0; k < gaps_.size(); ++k) {
            const double w = gaps_[k];
            const double w2t = w * w * t;
            const double damp = std::exp(-params.gamma * w2t);
            sff += pp_[k] * damp * std::cos(w * t / params.hbar);
            cl1 += sqrt_pp_[k] * damp;
            pur += pp_[k] * damp * damp;
            dcl1 -= sqrt_pp_[k] * w2t * damp;
        }
        return {plateau_ + 2.0 * sff, 2.0 * cl1, plateau_ + 2.0 * pur, 2.0 * dcl1};
    }

private:
    double beta_;
    int dim_;
    double plateau_ = 0.0;
    std::vector<double> gaps_, pp_, sqrt_pp_;
};

inline double ed_sff(const RealVector& energies, double beta, const EDParams& params, double t) {
    return PairTable(energies, beta).at(params, t).sff;
}

inline double ed_cl1(const RealVector& energies, double beta, const EDParams& params, double t) {
    return PairTable(energies, beta).at(params, t).cl1;
}

inline double ed_purity(const RealVector& energies, double beta, const EDParams& params, double t) {
    return PairTable(energies, beta).at(params, t).purity;
}

/// Infinite-temperature lower bound (1/d)(1 + C_l1 + t dC_l1/dgamma / (2 hbar^2)),
/// the first two terms of the cosine expansion.
inline double lower_bound_from(const EDObservables& o, int d, double t, double hbar) {
    return (1.0 + o.cl1 + 0.5 * t * o.cl1_gamma_derivative / (hbar * hbar)) / d;
}

inline double ed_sff_lower_bound(const RealVector& energies, double beta, const EDParams& params, double t) {
    if (beta != 0.0)
        throw UnsupportedRegime("ed_sff_lower_bound: the cosine-expansion bound holds only at beta = 0");
    const PairTable table(energies, 0.0);
    return lower_bound_from(table.at(params, t), table.dim(), t, params.hbar);
}

/// Diagonal generator with entries -(i/hbar) w_nm - gamma w_nm^2 at index n d + m.
inline Superoperator ed_liouvillian(const RealVector& energies, const EDParams& params) {
    params.validate();
    const int d = static_cast<int>(energies.size());
    const Eigen::Index n2 = static_cast<Eigen::Index>(d) * d;
    ComplexMatrix l = ComplexMatrix::Zero(n2, n2);
    for (int n = 0; n < d; ++n) {
        for (int m = 0; m < d; ++m) {
            const double w = energies(n) - energies(m);
            const Eigen::Index k = static_cast<Eigen::Index>(n) * d + m;
            l(k, k) = Complex(-params.gamma * w * w, -w / params.hbar);
        }
    }
    return Superoperator(std::move(l));
}

}  // namespace pqchaos::dephasing
