#pragma once

// State-based observables of an evolving coherent Gibbs state: spectral form
// factor (fidelity with the initial state), l1-norm of coherence, purity,
// the coherence bounds on the SFF, the effective depth of the correlation
// hole, and ensemble averaging of diagnostic time series.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "pqchaos/core.hpp"
#include "pqchaos/dephasing.hpp"
#include "pqchaos/pqc.hpp"
#include "pqchaos/states.hpp"

namespace pqchaos::diagnostics {

/// <Psi_beta| rho |Psi_beta>. The imaginary part vanishes for Hermitian rho
/// and is dropped.
inline double sff_fidelity(const states::CoherentGibbsState& cgs, const states::DensityMatrix& rho) {
    if (cgs.dim() != rho.dim()) throw DimensionMismatch("sff_fidelity: dimension mismatch");
    const ComplexVector a = cgs.amplitudes.cast<Complex>();
    return a.dot(rho.matrix() * a).real();
}

/// C_l1 = 2 sum_{n<m} |rho_nm|.
inline double cl1_norm(const states::DensityMatrix& rho) {
    const int d = rho.dim();
    double acc = 0.0;
    for (int n = 0; n < d; ++n)
        for (int m = n + 1; m < d; ++m) acc += std::abs(rho(n, m));
    return 2.0 * acc;
}

/// Tr[rho^2] = sum_nm |rho_nm|^2 for Hermitian rho.
inline double purity(const states::DensityMatrix& rho) { return rho.matrix().squaredNorm(); }

/// sum_n |rho_nn|^2, the purity of the dephased state.
inline double diagonal_purity(const states::DensityMatrix& rho) { return rho.matrix().diagonal().squaredNorm(); }

/// Time series of CGS diagnostics. For discrete-time channels `steps` holds
/// the step index j of each sample and `tau` the period, with t = j tau.
///
/// Bound columns: `upper_bound` is (1 + C_l1) / d; `lower_bound` is
/// (1 - C_l1) / d for general channels and the cosine-expansion bound for
/// energy dephasing. Both are NaN away from beta = 0.
struct DiagnosticSeries {
    int dim = 0;
    double beta = 0.0;
    double plateau = 0.0;
    double hbar = 1.0;
    std::optional<double> tau;
    std::vector<double> times;
    std::vector<long> steps;
    std::vector<double> sff, sff_stderr, cl1, purity, lower_bound, upper_bound;
    nlohmann::json metadata = nlohmann::json::object();

    std::size_t size() const { return times.size(); }

    void resize(std::size_t n) {
        times.resize(n);
        sff.resize(n);
        sff_stderr.assign(n, 0.0);
        cl1.resize(n);
        purity.resize(n);
        lower_bound.resize(n);
        upper_bound.resize(n);
    }

    /// Empty string when all invariants hold, otherwise the first violation.
    std::string invariant_violation(double tol = 1e-10) const {
        const std::size_t n = times.size();
        for (const auto* v : {&sff, &sff_stderr, &cl1, &purity, &lower_bound, &upper_bound})
            if (v->size() != n) return "column lengths differ";
        if (!steps.empty() && steps.size() != n) return "steps length differs";
        for (std::size_t i = 0; i < n; ++i) {
            if (!(sff[i] >= -tol && sff[i] <= 1.0 + tol)) return "sff outside [0, 1] at index " + std::to_string(i);
            if (!(purity[i] >= -tol && purity[i] <= 1.0 + tol))
                return "purity outside [0, 1] at index " + std::to_string(i);
            if (!(cl1[i] >= -tol && cl1[i] <= dim - 1 + tol))
                return "cl1 outside [0, d - 1] at index " + std::to_string(i);
        }
        return {};
    }
};

/// Closed-form ED series of one Hamiltonian.
inline DiagnosticSeries ed_series(const RealVector& energies, double beta, const dephasing::EDParams& params,
                                  const std::vector<double>& times) {
    const dephasing::PairTable table(energies, beta);
    DiagnosticSeries s;
    s.dim = table.dim();
    s.beta = beta;
    s.plateau = table.plateau();
    s.hbar = params.hbar;
    s.resize(times.size());
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 0; i < times.size(); ++i) {
        const auto o = table.at(params, times[i]);
        s.times[i] = times[i];
        s.sff[i] = o.sff;
        s.cl1[i] = o.cl1;
        s.purity[i] = o.purity;
        if (beta == 0.0) {
            s.lower_bound[i] = dephasing::lower_bound_from(o, s.dim, times[i], params.hbar);
            s.upper_bound[i] = (1.0 + o.cl1) / s.dim;
        } else {
            s.lower_bound[i] = nan;
            s.upper_bound[i] = nan;
        }
    }
    s.metadata["dynamics"] = "energy-dephasing";
    s.metadata["gamma"] = params.gamma;
    return s;
}

/// Fills sample i of `s` from the state rho.
inline void record_state(DiagnosticSeries& s, std::size_t i, const states::CoherentGibbsState& cgs,
                         const states::DensityMatrix& rho) {
    s.sff[i] = sff_fidelity(cgs, rho);
    s.cl1[i] = cl1_norm(rho);
    s.purity[i] = purity(rho);
    if (s.beta == 0.0) {
        s.lower_bound[i] = (1.0 - s.cl1[i]) / s.dim;
        s.upper_bound[i] = (1.0 + s.cl1[i]) / s.dim;
    } else {
        s.lower_bound[i] = s.upper_bound[i] = std::numeric_limits<double>::quiet_NaN();
    }
}

/// Series of the CGS evolved by j applications of a channel, sampled at the
/// ascending step indices `steps` (j = 0 allowed).
inline DiagnosticSeries pqc_series(const pqc::ParametricChannel& ch, double beta, const std::vector<long>& steps) {
    if (!std::is_sorted(steps.begin(), steps.end()) || std::adjacent_find(steps.begin(), steps.end()) != steps.end())
        throw DomainError("pqc_series: steps must be strictly ascending");
    const auto cgs = states::make_cgs(ch.hamiltonian().energies, beta);
    DiagnosticSeries s;
    s.dim = ch.dim();
    s.beta = beta;
    s.plateau = states::plateau_value(ch.hamiltonian().energies, beta);
    s.hbar = ch.hbar();
    s.tau = ch.tau();
    s.steps = steps;
    s.resize(steps.size());
    for (std::size_t i = 0; i < steps.size(); ++i) s.times[i] = steps[i] * ch.tau();
    if (steps.empty()) return s;
    std::size_t next = 0;
    pqc::evolve_streaming(ch, states::cgs_density(cgs), steps.back(), [&](long j, const states::DensityMatrix& rho) {
        if (next < steps.size() && steps[next] == j) record_state(s, next++, cgs, rho);
    });
    s.metadata["dynamics"] = "pqc";
    s.metadata["tau"] = ch.tau();
    s.metadata["epsilon"] = ch.epsilon();
    s.metadata["K"] = ch.kraus().count();
    return s;
}

/// SFF at every step j = 0..last_step (no coherence or purity bookkeeping).
inline std::vector<double> pqc_sff_all_steps(const pqc::ParametricChannel& ch, double beta, long last_step) {
    const auto cgs = states::make_cgs(ch.hamiltonian().energies, beta);
    std::vector<double> out(static_cast<std::size_t>(last_step) + 1);
    pqc::evolve_streaming(ch, states::cgs_density(cgs), last_step,
                          [&](long j, const states::DensityMatrix& rho) { out[j] = sff_fidelity(cgs, rho); });
    return out;
}

/// |Z(beta + i t / hbar) / Z(beta)|^2, the unitary SFF.
inline double isolated_sff(const RealVector& energies, double beta, double t, double hbar = 1.0) {
    const RealVector p = states::boltzmann_weights(energies, beta);
    Complex acc = 0.0;
    for (Eigen::Index n = 0; n < energies.size(); ++n) acc += p(n) * std::exp(Complex(0.0, -energies(n) * t / hbar));
    return std::norm(acc);
}

// ---------------------------------------------------------------------------

struct SandwichReport {
    std::size_t violations = 0;
    /// Largest amount by which SFF leaves [(1 - C)/d, (1 + C)/d]; negative
    /// values are the smallest slack.
    double max_violation = -std::numeric_limits<double>::infinity();
    std::size_t worst_index = 0;
    double worst_time = 0.0;

    bool ok() const { return violations == 0; }
};

/// Checks (1 - C_l1)/d <= SFF <= (1 + C_l1)/d pointwise, recomputing the
/// bounds from the cl1 column.
inline SandwichReport sff_cl1_sandwich(const DiagnosticSeries& s, double tol = 1e-10) {
    if (s.beta != 0.0) throw UnsupportedRegime("sff_cl1_sandwich: the coherence bound holds only at beta = 0");
    SandwichReport r;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double lo = (1.0 - s.cl1[i]) / s.dim;
        const double hi = (1.0 + s.cl1[i]) / s.dim;
        const double v = std::max(lo - s.sff[i], s.sff[i] - hi);
        if (v > tol) ++r.violations;
        if (v > r.max_violation) {
            r.max_violation = v;
            r.worst_index = i;
            r.worst_time = s.times[i];
        }
    }
    return r;
}

// ---------------------------------------------------------------------------

struct DepthWindow {
    long j_thouless = 0;
    long j_heisenberg = 0;
};

/// j_Th = ceil(t_Th / tau), j_H = ceil(t_H / tau).
inline DepthWindow depth_window(double t_thouless, double t_heisenberg, double tau) {
    if (!(tau > 0.0)) throw DomainError("depth_window: tau must be positive");
    DepthWindow w{static_cast<long>(std::ceil(t_thouless / tau)), static_cast<long>(std::ceil(t_heisenberg / tau))};
    if (w.j_thouless > w.j_heisenberg) throw InvalidWindow("effective depth: j_Th exceeds j_H");
    if (w.j_thouless < 0) throw InvalidWindow("effective depth: negative Thouless step");
    return w;
}

/// D_eff = sqrt(max(0, sum_{j=j_Th}^{j_H} ln(F_p / SFF(j tau)))) on a series
/// sampled at every step of the window.
inline double effective_depth(const DiagnosticSeries& s, double t_thouless, double t_heisenberg, double tau) {
    const DepthWindow w = depth_window(t_thouless, t_heisenberg, tau);
    if (s.steps.size() != s.size()) throw InsufficientData("effective_depth: series carries no step indices");
    double acc = 0.0;
    for (long j = w.j_thouless; j <= w.j_heisenberg; ++j) {
        const auto it = std::lower_bound(s.steps.begin(), s.steps.end(), j);
        if (it == s.steps.end() || *it != j)
            throw InsufficientData("effective_depth: step " + std::to_string(j) + " missing from series");
        const double f = s.sff[static_cast<std::size_t>(it - s.steps.begin())];
        if (!(f > 0.0)) throw DomainError("effective_depth: non-positive SFF inside window");
        acc += std::log(s.plateau / f);
    }
    return std::sqrt(std::max(0.0, acc));
}

inline double relative_effective_depth(const DiagnosticSeries& s, const DiagnosticSeries& isolated,
                                       double t_thouless, double t_heisenberg, double tau) {
    const double ref = effective_depth(isolated, t_thouless, t_heisenberg, tau);
    if (!(ref > 0.0)) throw DomainError("relative_effective_depth: isolated series has no correlation hole");
    return effective_depth(s, t_thouless, t_heisenberg, tau) / ref;
}

/// Centered moving average, window shrunk symmetrically at the ends.
inline std::vector<double> moving_average(const std::vector<double>& v, int window = 5) {
    const int half = window / 2;
    const int n = static_cast<int>(v.size());
    std::vector<double> out(v.size());
    for (int i = 0; i < n; ++i) {
        const int h = std::min({half, i, n - 1 - i});
        double acc = 0.0;
        for (int k = i - h; k <= i + h; ++k) acc += v[k];
        out[i] = acc / (2 * h + 1);
    }
    return out;
}

/// Thouless time, taken as the argmin of the 5-point smoothed SFF among the
/// samples with t < t_H.
inline double estimate_thouless(const DiagnosticSeries& s, double t_heisenberg) {
    const auto smooth = moving_average(s.sff, 5);
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (!(s.times[i] < t_heisenberg)) continue;
        if (!best || smooth[i] < smooth[*best]) best = i;
    }
    if (!best) throw InsufficientData("estimate_thouless: no samples before the Heisenberg time");
    return s.times[*best];
}

// ---------------------------------------------------------------------------

/// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    void merge(const CompensatedSum& o) {
        add(o.sum_);
        add(o.comp_);
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// Pointwise ensemble mean of diagnostic series sharing one time grid.
/// Holds (count, sum, sum of squares) per column so partial accumulators
/// from parallel workers can be merged in any order.
class SeriesAccumulator {
public:
    void add(const DiagnosticSeries& s) {
        if (count_ == 0) init(s);
        if (s.size() != template_.size() || s.dim != template_.dim)
            throw DimensionMismatch("SeriesAccumulator: series shapes differ");
        ++count_;
        plateau_.add(s.plateau);
        for (std::size_t i = 0; i < s.size(); ++i) {
            sff_[i].add(s.sff[i]);
            sff2_[i].add(s.sff[i] * s.sff[i]);
            cl1_[i].add(s.cl1[i]);
            pur_[i].add(s.purity[i]);
            lo_[i].add(s.lower_bound[i]);
            hi_[i].add(s.upper_bound[i]);
        }
    }

    void merge(const SeriesAccumulator& o) {
        if (o.count_ == 0) return;
        if (count_ == 0) {
            *this = o;
            return;
        }
        if (o.template_.size() != template_.size()) throw DimensionMismatch("SeriesAccumulator: shapes differ");
        count_ += o.count_;
        plateau_.merge(o.plateau_);
        for (std::size_t i = 0; i < template_.size(); ++i) {
            sff_[i].merge(o.sff_[i]);
            sff2_[i].merge(o.sff2_[i]);
            cl1_[i].merge(o.cl1_[i]);
            pur_[i].merge(o.pur_[i]);
            lo_[i].merge(o.lo_[i]);
            hi_[i].merge(o.hi_[i]);
        }
    }

    std::size_t count() const { return count_; }

    /// Mean series; sff_stderr is the standard error of the mean.
    DiagnosticSeries result() const {
        if (count_ == 0) throw InsufficientData("SeriesAccumulator: no realizations");
        DiagnosticSeries out = template_;
        const double n = static_cast<double>(count_);
        out.plateau = plateau_.value() / n;
        for (std::size_t i = 0; i < out.size(); ++i) {
            const double mean = sff_[i].value() / n;
            out.sff[i] = mean;
            if (count_ > 1) {
                const double var = std::max(0.0, (sff2_[i].value() - n * mean * mean) / (n - 1.0));
                out.sff_stderr[i] = std::sqrt(var / n);
            } else {
                out.sff_stderr[i] = 0.0;
            }
            out.cl1[i] = cl1_[i].value() / n;
            out.purity[i] = pur_[i].value() / n;
            out.lower_bound[i] = lo_[i].value() / n;
            out.upper_bound[i] = hi_[i].value() / n;
        }
        out.metadata["realizations"] = count_;
        return out;
    }

private:
    void init(const DiagnosticSeries& s) {
        template_ = s;
        const std::size_t n = s.size();
        sff_.assign(n, {});
        sff2_.assign(n, {});
        cl1_.assign(n, {});
        pur_.assign(n, {});
        lo_.assign(n, {});
        hi_.assign(n, {});
    }

    std::size_t count_ = 0;
    DiagnosticSeries template_;
    CompensatedSum plateau_;
    std::vector<CompensatedSum> sff_, sff2_, cl1_, pur_, lo_, hi_;
};

inline DiagnosticSeries ensemble_average(const std::vector<DiagnosticSeries>& realizations) {
    SeriesAccumulator acc;
    for (const auto& s : realizations) acc.add(s);
    return acc.result();
}

// ---------------------------------------------------------------------------

inline std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

/// CSV with header `t,sff,sff_stderr,cl1,purity,lower_bound,upper_bound`.
inline void write_series_csv(std::ostream& os, const DiagnosticSeries& s) {
    os << "t,sff,sff_stderr,cl1,purity,lower_bound,upper_bound\n";
    for (std::size_t i = 0; i < s.size(); ++i) {
        os << format_number(s.times[i]) << ',' << format_number(s.sff[i]) << ',' << format_number(s.sff_stderr[i])
           << ',' << format_number(s.cl1[i]) << ',' << format_number(s.purity[i]) << ','
           << format_number(s.lower_bound[i]) << ',' << format_number(s.upper_bound[i]) << '\n';
    }
}

inline nlohmann::json series_to_json(const DiagnosticSeries& s) {
    auto nullable = [](const std::vector<double>& v) {
        nlohmann::json a = nlohmann::json::array();
        for (double x : v) a.push_back(std::isnan(x) ? nlohmann::json(nullptr) : nlohmann::json(x));
        return a;
    };
    nlohmann::json j;
    j["dim"] = s.dim;
    j["beta"] = s.beta;
    j["plateau"] = s.plateau;
    j["hbar"] = s.hbar;
    j["tau"] = s.tau ? nlohmann::json(*s.tau) : nlohmann::json(nullptr);
    j["t"] = s.times;
    if (!s.steps.empty()) j["steps"] = s.steps;
    j["sff"] = s.sff;
    j["sff_stderr"] = s.sff_stderr;
    j["cl1"] = s.cl1;
    j["purity"] = s.purity;
    j["lower_bound"] = nullable(s.lower_bound);
    j["upper_bound"] = nullable(s.upper_bound);
    j["metadata"] = s.metadata;
    return j;
}

}  // namespace pqchaos::diagnostics
