#pragma once

// Eigenvalue clouds of channel superoperators: dense non-Hermitian
// eigensolves, the analytic phase boundaries (annulus, disk, shifted disk,
// crescent sector), phase classification, complex spacing ratios and the
// evolution of boundaries under channel powers.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#ifndef lapack_complex_float
#define lapack_complex_float std::complex<float>
#endif
#ifndef lapack_complex_double
#define lapack_complex_double std::complex<double>
#endif
#include <lapacke.h>

#include "json.hpp"
#include "pqchaos/core.hpp"
#include "pqchaos/superoperator.hpp"

namespace pqchaos::spectral {

/// Parameter point of a channel, carried by reports and error messages.
struct ChannelParameters {
    double tau = 0.0;
    double epsilon = 0.0;
    int kraus_count = 1;
    int dim = 0;
    double sigma = 1.0;
    double hbar = 1.0;

    std::string describe() const {
        return "tau=" + std::to_string(tau) + " eps=" + std::to_string(epsilon) + " K=" + std::to_string(kraus_count) +
               " d=" + std::to_string(dim);
    }
};

struct EigenDecomposition {
    ComplexVector values;
    ComplexMatrix right_vectors;  // unit 2-norm columns
};

namespace detail {

inline void check_geev(lapack_int info, const std::string& context) {
    if (info > 0)
        throw EigensolverError("eigensolver did not converge (QR failed at index " + std::to_string(info) + ")" +
                               (context.empty() ? "" : " at " + context));
    if (info < 0) throw EigensolverError("eigensolver: illegal argument " + std::to_string(-info));
}

}  // namespace detail

/// All eigenvalues of a general complex matrix (LAPACK zgeev).
inline ComplexVector eigenvalues(const ComplexMatrix& m, const std::string& context = {}) {
    if (m.rows() != m.cols()) throw DimensionMismatch("eigenvalues: matrix must be square");
    const auto n = static_cast<lapack_int>(m.rows());
    ComplexMatrix a = m;
    ComplexVector w(n);
    if (n == 0) return w;
    const lapack_int info =
        LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', n, a.data(), n, w.data(), nullptr, 1, nullptr, 1);
    detail::check_geev(info, context);
    return w;
}

inline ComplexVector eigenvalues(const Superoperator& s, const std::string& context = {}) {
    return eigenvalues(s.matrix(), context);
}

inline EigenDecomposition eigen_decomposition(const ComplexMatrix& m, const std::string& context = {}) {
    if (m.rows() != m.cols()) throw DimensionMismatch("eigen_decomposition: matrix must be square");
    const auto n = static_cast<lapack_int>(m.rows());
    ComplexMatrix a = m;
    EigenDecomposition out;
    out.values.resize(n);
    out.right_vectors.resize(n, n);
    if (n == 0) return out;
    const lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'V', n, a.data(), n, out.values.data(), nullptr, 1,
                                          out.right_vectors.data(), n);
    detail::check_geev(info, context);
    return out;
}

/// max_k ||M v_k - lambda_k v_k||_2 / ||M||_F.
inline double backward_error(const ComplexMatrix& m, const EigenDecomposition& e) {
    const double scale = std::max(m.norm(), std::numeric_limits<double>::min());
    double worst = 0.0;
    for (Eigen::Index k = 0; k < e.values.size(); ++k) {
        const ComplexVector r = m * e.right_vectors.col(k) - e.values(k) * e.right_vectors.col(k);
        worst = std::max(worst, r.norm() / scale);
    }
    return worst;
}

/// Index of the eigenvalue closest to 1; ties go to the larger modulus, then
/// to the lower index.
inline Eigen::Index fixed_point_index(const ComplexVector& eigs) {
    if (eigs.size() == 0) throw InsufficientData("fixed_point_index: empty spectrum");
    Eigen::Index best = 0;
    for (Eigen::Index k = 1; k < eigs.size(); ++k) {
        const double dk = std::abs(eigs(k) - 1.0), db = std::abs(eigs(best) - 1.0);
        if (dk < db || (dk == db && std::abs(eigs(k)) > std::abs(eigs(best)))) best = k;
    }
    return best;
}

/// Eigenvalues with the fixed point removed, order preserved.
inline std::vector<Complex> spectral_bulk(const ComplexVector& eigs) {
    const Eigen::Index fp = fixed_point_index(eigs);
    std::vector<Complex> bulk;
    bulk.reserve(static_cast<std::size_t>(eigs.size()) - 1);
    for (Eigen::Index k = 0; k < eigs.size(); ++k)
        if (k != fp) bulk.push_back(eigs(k));
    return bulk;
}

// ---------------------------------------------------------------------------
// Analytic boundaries

enum class Phase { Annular, Disk, Crescent, ShiftedDisk };

inline std::string to_string(Phase p) {
    switch (p) {
        case Phase::Annular: return "annular";
        case Phase::Disk: return "disk";
        case Phase::Crescent: return "crescent";
        case Phase::ShiftedDisk: return "shifted-disk";
    }
    return "unknown";
}

inline void check_eps_k(double eps, int k, const char* who) {
    if (!(eps >= 0.0 && eps <= 1.0)) throw DomainError(std::string(who) + ": epsilon must lie in [0, 1]");
    if (k < 1) throw RangeError(std::string(who) + ": K must be >= 1");
}

struct AnnularRadii {
    double outer = 1.0;
    std::optional<double> inner;
};

/// sqrt((1 - eps)^2 +- eps^2 / K). The inner radius is absent once the
/// radicand turns negative; within 1e-14 of zero it is reported as exactly 0.
inline AnnularRadii annular_boundaries(double eps, int k) {
    check_eps_k(eps, k, "annular_boundaries");
    const double a = (1.0 - eps) * (1.0 - eps);
    const double b = eps * eps / k;
    AnnularRadii r;
    r.outer = std::sqrt(a + b);
    const double inner2 = a - b;
    if (std::abs(inner2) <= 1e-14)
        r.inner = 0.0;
    else if (inner2 > 0.0)
        r.inner = std::sqrt(inner2);
    return r;
}

inline double disk_boundary(double eps, int k) { return annular_boundaries(eps, k).outer; }

struct ShiftedDisk {
    double center = 1.0;
    double radius = 0.0;
};

inline ShiftedDisk shifted_disk_boundary(double eps, int k) {
    check_eps_k(eps, k, "shifted_disk_boundary");
    return {1.0 - eps, eps / std::sqrt(static_cast<double>(k))};
}

/// eps_c = 1 / (1 + 1 / sqrt(K)), where the inner annular radius vanishes.
inline double critical_epsilon(int k) {
    if (k < 1) throw RangeError("critical_epsilon: K must be >= 1");
    return 1.0 / (1.0 + 1.0 / std::sqrt(static_cast<double>(k)));
}

/// Half-angle of the eps = 0 sector from the semicircle width: tau sigma sqrt(8 d) / hbar.
inline double phi_max(double tau, int d, double sigma, double hbar = 1.0) {
    if (!(tau >= 0.0)) throw DomainError("phi_max: tau must be >= 0");
    if (d < 1) throw InvalidDimension("phi_max: d must be >= 1");
    if (!(hbar > 0.0)) throw DomainError("phi_max: hbar must be positive");
    return tau * sigma * std::sqrt(8.0 * d) / hbar;
}

/// Half-angle from a realised spectrum: tau (E_max - E_min) / hbar.
inline double phi_max_from_energies(const RealVector& energies, double tau, double hbar = 1.0) {
    if (energies.size() == 0) throw InvalidDimension("phi_max_from_energies: empty spectrum");
    return tau * (energies.maxCoeff() - energies.minCoeff()) / hbar;
}

/// Smallest eps of the shifted-disk phase below tau_c:
/// 1 / (1 + 1 / (sqrt(K) sin(min(phi_max, pi/2)))).
inline double shifted_disk_threshold(double phi, int k) {
    const double s = std::sin(std::min(phi, kPi / 2.0));
    if (!(s > 0.0)) return 0.0;
    return 1.0 / (1.0 + 1.0 / (std::sqrt(static_cast<double>(k)) * s));
}

inline Phase classify_phase(double eps, double tau, int k, int d, double sigma, double hbar = 1.0) {
    check_eps_k(eps, k, "classify_phase");
    const double tau_c = kPi * hbar / (sigma * std::sqrt(2.0 * d));
    if (tau >= tau_c) return eps < critical_epsilon(k) ? Phase::Annular : Phase::Disk;
    return eps >= shifted_disk_threshold(phi_max(tau, d, sigma, hbar), k) ? Phase::ShiftedDisk : Phase::Crescent;
}

inline Phase classify_phase(const ChannelParameters& p) {
    return classify_phase(p.epsilon, p.tau, p.kraus_count, p.dim, p.sigma, p.hbar);
}

// ---------------------------------------------------------------------------
// Boundary curves

/// Closed polygonal loops; the region is where the summed winding number is
/// non-zero, so an annulus is an outer counter-clockwise loop plus an inner
/// clockwise one.
struct BoundaryCurve {
    std::vector<std::vector<Complex>> loops;

    std::size_t point_count() const {
        std::size_t n = 0;
        for (const auto& l : loops) n += l.size();
        return n;
    }
};

inline constexpr int kDefaultCurveSamples = 8192;

inline std::vector<Complex> circle_loop(Complex center, double radius, int samples, bool clockwise = false) {
    if (samples < 3) throw InvalidDimension("circle_loop: need at least 3 samples");
    std::vector<Complex> pts(samples);
    for (int i = 0; i < samples; ++i) {
        const double a = 2.0 * kPi * i / samples * (clockwise ? -1.0 : 1.0);
        pts[i] = center + radius * Complex(std::cos(a), std::sin(a));
    }
    return pts;
}

inline BoundaryCurve circle_boundary(Complex center, double radius, int samples = kDefaultCurveSamples) {
    return {{circle_loop(center, radius, samples)}};
}

inline BoundaryCurve annulus_boundary(double outer, std::optional<double> inner, int samples = kDefaultCurveSamples) {
    BoundaryCurve c{{circle_loop(0.0, outer, samples)}};
    if (inner && *inner > 0.0) c.loops.push_back(circle_loop(0.0, *inner, samples, true));
    return c;
}

/// {|z| <= radius, |arg z| <= phi}; the full disk once phi >= pi.
inline BoundaryCurve sector_disk_boundary(double radius, double phi, int samples = kDefaultCurveSamples) {
    if (phi >= kPi) return circle_boundary(0.0, radius, samples);
    std::vector<Complex> pts;
    pts.reserve(static_cast<std::size_t>(samples) + 2);
    const int arc = std::max(3, samples - 2);
    const int radial = std::max(1, samples / 64);
    for (int i = 0; i < radial; ++i) pts.push_back(std::polar(radius * i / radial, -phi));
    for (int i = 0; i <= arc; ++i) pts.push_back(std::polar(radius, -phi + 2.0 * phi * i / arc));
    for (int i = radial - 1; i >= 1; --i) pts.push_back(std::polar(radius * i / radial, phi));
    return {{std::move(pts)}};
}

/// Analytic boundary for a phase:
///  Annular -> circles of the annular radii, Disk -> circle of the outer
///  radius, ShiftedDisk -> circle of centre 1 - eps and radius eps/sqrt(K),
///  Crescent -> unit disk cut to the sector |arg z| <= phi_max.
/// `phi` overrides the semicircle estimate of phi_max (e.g. a realised width).
inline BoundaryCurve boundary_for_phase(Phase phase, const ChannelParameters& p, std::optional<double> phi = {},
                                        int samples = kDefaultCurveSamples) {
    const AnnularRadii r = annular_boundaries(p.epsilon, p.kraus_count);
    switch (phase) {
        case Phase::Annular: return annulus_boundary(r.outer, r.inner, samples);
        case Phase::Disk: return circle_boundary(0.0, r.outer, samples);
        case Phase::ShiftedDisk: {
            const ShiftedDisk s = shifted_disk_boundary(p.epsilon, p.kraus_count);
            return circle_boundary(s.center, s.radius, samples);
        }
        case Phase::Crescent:
            // Only the angle is bounded; the radius is capped by contractivity.
            return sector_disk_boundary(1.0, phi.value_or(phi_max(p.tau, p.dim, p.sigma, p.hbar)), samples);
    }
    throw DomainError("boundary_for_phase: unknown phase");
}

/// Pointwise kappa-th power of every loop.
inline BoundaryCurve boundary_power(const BoundaryCurve& c, int kappa) {
    if (kappa < 1) throw DomainError("boundary_power: kappa must be >= 1");
    BoundaryCurve out = c;
    if (kappa == 1) return out;
    for (auto& loop : out.loops)
        for (auto& z : loop) z = std::pow(z, kappa);
    return out;
}

namespace detail {

inline double cross(Complex a, Complex b, Complex p) {
    return (b.real() - a.real()) * (p.imag() - a.imag()) - (p.real() - a.real()) * (b.imag() - a.imag());
}

inline double segment_distance(Complex a, Complex b, Complex p) {
    const Complex ab = b - a;
    const double len2 = std::norm(ab);
    double t = len2 > 0.0 ? ((p - a) * std::conj(ab)).real() / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return std::abs(p - (a + t * ab));
}

}  // namespace detail

/// Winding number of the closed polygon around p (crossing-rule form).
inline int winding_number(const std::vector<Complex>& loop, Complex p) {
    int w = 0;
    const std::size_t n = loop.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Complex a = loop[i], b = loop[(i + 1) % n];
        if (a.imag() <= p.imag()) {
            if (b.imag() > p.imag() && detail::cross(a, b, p) > 0.0) ++w;
        } else if (b.imag() <= p.imag() && detail::cross(a, b, p) < 0.0) {
            --w;
        }
    }
    return w;
}

inline double distance_to_curve(const BoundaryCurve& c, Complex p) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& loop : c.loops)
        for (std::size_t i = 0; i < loop.size(); ++i)
            best = std::min(best, detail::segment_distance(loop[i], loop[(i + 1) % loop.size()], p));
    return best;
}

/// p lies in the enclosed region or within `margin` of the curve.
inline bool inside(const BoundaryCurve& c, Complex p, double margin = 0.0) {
    int w = 0;
    for (const auto& loop : c.loops) w += winding_number(loop, p);
    if (w != 0) return true;
    return margin > 0.0 && distance_to_curve(c, p) <= margin;
}

inline double containment_fraction(const std::vector<Complex>& bulk, const BoundaryCurve& c, double margin) {
    if (bulk.empty()) throw InsufficientData("containment_fraction: empty bulk");
    std::size_t hits = 0;
    for (const auto& z : bulk)
        if (inside(c, z, margin)) ++hits;
    return static_cast<double>(hits) / static_cast<double>(bulk.size());
}

// ---------------------------------------------------------------------------
// Report

struct SpectralReport {
    ChannelParameters parameters;
    ComplexVector eigenvalues;
    Eigen::Index fixed_point = 0;
    Phase phase = Phase::Annular;
    BoundaryCurve boundary;

    std::vector<Complex> bulk() const {
        std::vector<Complex> b;
        b.reserve(static_cast<std::size_t>(eigenvalues.size()));
        for (Eigen::Index k = 0; k < eigenvalues.size(); ++k)
            if (k != fixed_point) b.push_back(eigenvalues(k));
        return b;
    }

    double max_modulus() const { return eigenvalues.size() ? eigenvalues.cwiseAbs().maxCoeff() : 0.0; }

    /// Empty string when |lambda| <= 1 + 1e-8 throughout.
    std::string invariant_violation() const {
        if (fixed_point < 0 || fixed_point >= eigenvalues.size()) return "fixed point index out of range";
        if (max_modulus() > 1.0 + 1e-8) return "eigenvalue outside the unit disk";
        return {};
    }
};

inline SpectralReport make_report(const ComplexVector& eigs, const ChannelParameters& p,
                                  std::optional<double> phi = {}, int samples = kDefaultCurveSamples) {
    SpectralReport r;
    r.parameters = p;
    r.eigenvalues = eigs;
    r.fixed_point = fixed_point_index(eigs);
    r.phase = classify_phase(p);
    r.boundary = boundary_for_phase(r.phase, p, phi, samples);
    return r;
}

// ---------------------------------------------------------------------------
// Complex spacing ratios

struct SpacingRatioSet {
    std::vector<Complex> ratios;
    /// (source, nearest, next-nearest) indices into the input cloud.
    std::vector<std::array<std::size_t, 3>> indices;
};

namespace detail {

inline double sq_dist(Complex a, Complex b) {
    const double dx = a.real() - b.real();
    const double dy = a.imag() - b.imag();
    return dx * dx + dy * dy;
}

struct Neighbor {
    double d2 = std::numeric_limits<double>::infinity();
    std::size_t index = std::numeric_limits<std::size_t>::max();

    bool operator<(const Neighbor& o) const { return d2 < o.d2 || (d2 == o.d2 && index < o.index); }
};

struct TwoNearest {
    Neighbor first, second;

    void offer(Neighbor c) {
        if (c < first) {
            second = first;
            first = c;
        } else if (c < second) {
            second = c;
        }
    }
};

inline void emit(const std::vector<Complex>& pts, std::size_t i, const TwoNearest& nn, SpacingRatioSet& out) {
    if (!(nn.second.d2 > 0.0)) return;  // degenerate: next-nearest coincides with the point
    out.ratios.push_back((pts[nn.first.index] - pts[i]) / (pts[nn.second.index] - pts[i]));
    out.indices.push_back({i, nn.first.index, nn.second.index});
}

}  // namespace detail

/// O(n^2) reference. Points whose next-nearest neighbour coincides with them
/// are skipped.
inline SpacingRatioSet complex_spacing_ratios_brute(const std::vector<Complex>& pts) {
    if (pts.size() < 3) throw InsufficientData("complex_spacing_ratios: need at least 3 eigenvalues");
    SpacingRatioSet out;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        detail::TwoNearest nn;
        for (std::size_t j = 0; j < pts.size(); ++j)
            if (j != i) nn.offer({detail::sq_dist(pts[j], pts[i]), j});
        detail::emit(pts, i, nn, out);
    }
    return out;
}

/// Uniform-grid search with the same ordering as the reference, so both
/// produce identical output.
inline SpacingRatioSet complex_spacing_ratios(const std::vector<Complex>& pts) {
    if (pts.size() < 3) throw InsufficientData("complex_spacing_ratios: need at least 3 eigenvalues");
    const std::size_t n = pts.size();
    double x0 = pts[0].real(), x1 = x0, y0 = pts[0].imag(), y1 = y0;
    for (const auto& p : pts) {
        x0 = std::min(x0, p.real());
        x1 = std::max(x1, p.real());
        y0 = std::min(y0, p.imag());
        y1 = std::max(y1, p.imag());
    }
    const double w = x1 - x0, h = y1 - y0;
    const double extent = std::max(w, h);
    if (!(extent > 0.0) || !std::isfinite(extent)) return complex_spacing_ratios_brute(pts);
    double cell = std::sqrt(std::max(w * h, extent * extent / static_cast<double>(n)) / static_cast<double>(n));
    cell = std::max(cell, extent / 4096.0);
    const int nx = static_cast<int>(std::floor(w / cell)) + 1;
    const int ny = static_cast<int>(std::floor(h / cell)) + 1;
    auto cell_x = [&](double x) { return std::clamp(static_cast<int>(std::floor((x - x0) / cell)), 0, nx - 1); };
    auto cell_y = [&](double y) { return std::clamp(static_cast<int>(std::floor((y - y0) / cell)), 0, ny - 1); };

    // Counting sort of point indices by cell.
    std::vector<std::size_t> start(static_cast<std::size_t>(nx) * ny + 1, 0);
    std::vector<std::size_t> cell_of(n);
    for (std::size_t i = 0; i < n; ++i) {
        cell_of[i] = static_cast<std::size_t>(cell_y(pts[i].imag())) * nx + cell_x(pts[i].real());
        ++start[cell_of[i] + 1];
    }
    for (std::size_t c = 1; c < start.size(); ++c) start[c] += start[c - 1];
    std::vector<std::size_t> order(n);
    {
        std::vector<std::size_t> fill(start.begin(), start.end() - 1);
        for (std::size_t i = 0; i < n; ++i) order[fill[cell_of[i]]++] = i;
    }

    SpacingRatioSet out;
    const int max_ring = std::max(nx, ny);
    for (std::size_t i = 0; i < n; ++i) {
        const Complex p = pts[i];
        const int cx = cell_x(p.real()), cy = cell_y(p.imag());
        detail::TwoNearest nn;
        auto scan = [&](int gx, int gy) {
            if (gx < 0 || gy < 0 || gx >= nx || gy >= ny) return;
            const std::size_t c = static_cast<std::size_t>(gy) * nx + gx;
            for (std::size_t k = start[c]; k < start[c + 1]; ++k) {
                const std::size_t j = order[k];
                if (j != i) nn.offer({detail::sq_dist(pts[j], p), j});
            }
        };
        for (int ring = 0; ring <= max_ring; ++ring) {
            if (ring == 0) {
                scan(cx, cy);
            } else {
                for (int gx = cx - ring; gx <= cx + ring; ++gx) {
                    scan(gx, cy - ring);
                    scan(gx, cy + ring);
                }
                for (int gy = cy - ring + 1; gy <= cy + ring - 1; ++gy) {
                    scan(cx - ring, gy);
                    scan(cx + ring, gy);
                }
            }
            // Every unscanned point is at least this far away.
            const double bx = std::min(p.real() - (x0 + (cx - ring) * cell), (x0 + (cx + ring + 1) * cell) - p.real());
            const double by = std::min(p.imag() - (y0 + (cy - ring) * cell), (y0 + (cy + ring + 1) * cell) - p.imag());
            const double bound = std::min(bx, by) - 1e-12 * cell;  // slack for cell-assignment rounding
            if (bound > 0.0 && nn.second.d2 < bound * bound) break;
        }
        detail::emit(pts, i, nn, out);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Density histograms

struct Histogram2D {
    int bins = 256;
    double lo = -1.05;
    double hi = 1.05;
    std::vector<std::uint64_t> counts;  // row-major, [imag bin][real bin]
    std::uint64_t outside = 0;

    std::uint64_t at(int real_bin, int imag_bin) const {
        return counts[static_cast<std::size_t>(imag_bin) * bins + real_bin];
    }

    void add(Complex z) {
        if (counts.empty()) counts.assign(static_cast<std::size_t>(bins) * bins, 0);
        const double span = hi - lo;
        const double fx = (z.real() - lo) / span * bins, fy = (z.imag() - lo) / span * bins;
        if (!(fx >= 0.0 && fx < bins && fy >= 0.0 && fy < bins)) {
            ++outside;
            return;
        }
        ++counts[static_cast<std::size_t>(fy) * bins + static_cast<std::size_t>(fx)];
    }

    nlohmann::json to_json() const {
        return {{"bins", bins}, {"range", {lo, hi}}, {"layout", "row-major [imag][real]"},
                {"outside", outside}, {"counts", counts}};
    }
};

inline Histogram2D histogram(const std::vector<Complex>& pts, int bins = 256, double lo = -1.05, double hi = 1.05) {
    if (bins < 1) throw InvalidDimension("histogram: bins must be >= 1");
    if (!(hi > lo)) throw DomainError("histogram: empty range");
    Histogram2D h;
    h.bins = bins;
    h.lo = lo;
    h.hi = hi;
    h.counts.assign(static_cast<std::size_t>(bins) * bins, 0);
    for (const auto& z : pts) h.add(z);
    return h;
}

/// Count of ratios with |z| < radius against the flat-disk expectation
/// n radius^2; `deficit_sigmas` is (expected - observed) / sd.
struct SmallRatioDepletion {
    std::size_t observed = 0;
    double expected = 0.0;
    double sd = 0.0;
    double deficit_sigmas = 0.0;
};

inline SmallRatioDepletion small_ratio_depletion(const SpacingRatioSet& s, double radius = 0.05) {
    const double n = static_cast<double>(s.ratios.size());
    const double p = radius * radius;
    SmallRatioDepletion r;
    for (const auto& z : s.ratios)
        if (std::abs(z) < radius) ++r.observed;
    r.expected = n * p;
    r.sd = std::sqrt(n * p * (1.0 - p));
    r.deficit_sigmas = r.sd > 0.0 ? (r.expected - static_cast<double>(r.observed)) / r.sd : 0.0;
    return r;
}

}  // namespace pqchaos::spectral
