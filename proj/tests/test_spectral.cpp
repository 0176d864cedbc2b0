#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "pqchaos/pqc.hpp"
#include "pqchaos/rmt.hpp"
#include "pqchaos/spectral.hpp"
#include "support.hpp"

using namespace pqchaos;
using namespace pqchaos::spectral;

namespace {

pqc::ParametricChannel make_channel(int d, int k, double tau, double eps, std::uint64_t seed) {
    return pqc::ParametricChannel(tau, eps, rmt::sample_goe(d, 1.0, seed), rmt::sample_kraus(d, k, seed + 1), 1.0);
}

std::vector<Complex> random_cloud(std::size_t n, std::uint64_t seed) {
    RandomStream rng(seed);
    std::vector<Complex> pts(n);
    for (auto& z : pts) z = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
    return pts;
}

}  // namespace

TEST(Eigensolver, MatchesKnownSpectrumAndBackwardError) {
    const ComplexMatrix a = testsupport::random_complex(40, 40, 1);
    const auto dec = eigen_decomposition(a);
    EXPECT_LT(backward_error(a, dec), 1e-13);
    const auto vals = eigenvalues(a);
    EXPECT_LT(max_norm(vals - dec.values), 1e-12);
    // Triangular matrix: eigenvalues are the diagonal.
    ComplexMatrix t = ComplexMatrix(a.triangularView<Eigen::Upper>());
    const auto tv = eigenvalues(t);
    for (int i = 0; i < 40; ++i) {
        double best = 1e300;
        for (int j = 0; j < 40; ++j) best = std::min(best, std::abs(tv(j) - t(i, i)));
        EXPECT_LT(best, 1e-10);
    }
    EXPECT_THROW(eigenvalues(ComplexMatrix::Zero(2, 3)), DimensionMismatch);
}

TEST(Eigensolver, SuperoperatorBackwardError) {
    const auto ch = make_channel(8, 3, 0.3, 0.5, 2);
    const ComplexMatrix m = pqc::build_superoperator(ch).matrix();
    EXPECT_LT(backward_error(m, eigen_decomposition(m)), 1e-9);
}

TEST(Eigensolver, UnitaryLimitPhasesExact) {
    const auto ch = make_channel(8, 3, 0.2, 0.0, 3);
    const auto eig = eigenvalues(pqc::build_superoperator(ch));
    const auto& e = ch.hamiltonian().energies;
    std::vector<bool> used(64, false);
    for (int n = 0; n < 8; ++n) {
        for (int m = 0; m < 8; ++m) {
            const Complex target = std::polar(1.0, 0.2 * (e(m) - e(n)));
            int best = -1;
            double bd = 1e300;
            for (int k = 0; k < 64; ++k)
                if (!used[k] && std::abs(eig(k) - target) < bd) bd = std::abs(eig(k) - target), best = k;
            used[best] = true;
            EXPECT_LT(bd, 1e-10);
        }
    }
}

TEST(FixedPoint, ClosestToOneWithModulusTieBreak) {
    ComplexVector v(4);
    v << Complex(0.25, 0), Complex(1.5, 0), Complex(0.5, 0), Complex(1.5, 0);
    // v1, v2, v3 are all 0.5 from 1; v1 and v3 share the larger modulus and the
    // lower index wins.
    EXPECT_EQ(fixed_point_index(v), 1);
    EXPECT_EQ(spectral_bulk(v).size(), 3u);
    EXPECT_THROW(fixed_point_index(ComplexVector()), InsufficientData);
}

TEST(Boundaries, AnnularRadii) {
    const auto r = annular_boundaries(0.2, 3);
    EXPECT_NEAR(r.outer, std::sqrt(0.64 + 0.04 / 3), 1e-15);
    EXPECT_NEAR(r.outer, 0.80829, 1e-5);
    ASSERT_TRUE(r.inner.has_value());
    EXPECT_NEAR(*r.inner, std::sqrt(0.64 - 0.04 / 3), 1e-15);
    EXPECT_NEAR(*r.inner, 0.79162, 1e-5);
    const auto r0 = annular_boundaries(0.0, 3);
    EXPECT_EQ(r0.outer, 1.0);
    EXPECT_EQ(*r0.inner, 1.0);
}

TEST(Boundaries, InnerRadiusVanishesAtCriticalEpsilon) {
    const double ec = critical_epsilon(3);
    EXPECT_NEAR(ec, 0.634, 5e-4);
    const auto r = annular_boundaries(ec, 3);
    ASSERT_TRUE(r.inner.has_value());
    EXPECT_EQ(*r.inner, 0.0);
    EXPECT_FALSE(annular_boundaries(0.634, 3).inner.has_value());
    EXPECT_FALSE(annular_boundaries(0.7, 3).inner.has_value());
    EXPECT_TRUE(annular_boundaries(0.633, 3).inner.has_value());
    for (int k : {1, 2, 4, 9}) EXPECT_EQ(*annular_boundaries(critical_epsilon(k), k).inner, 0.0);
}

TEST(Boundaries, DiskAndShiftedDisk) {
    EXPECT_DOUBLE_EQ(disk_boundary(1.0, 4), 0.5);
    EXPECT_DOUBLE_EQ(disk_boundary(0.0, 4), 1.0);
    for (double e = 0.0; e <= 1.0; e += 0.05) EXPECT_EQ(disk_boundary(e, 3), annular_boundaries(e, 3).outer);
    const auto sd = shifted_disk_boundary(0.7, 3);
    EXPECT_NEAR(sd.center, 0.3, 1e-15);
    EXPECT_NEAR(sd.radius, 0.40415, 1e-5);
    const auto s0 = shifted_disk_boundary(0.0, 3);
    EXPECT_EQ(s0.center, 1.0);
    EXPECT_EQ(s0.radius, 0.0);
    const auto s1 = shifted_disk_boundary(1.0, 5);
    EXPECT_EQ(s1.center, 0.0);
    EXPECT_NEAR(s1.radius, disk_boundary(1.0, 5), 1e-15);
    EXPECT_THROW(annular_boundaries(1.5, 3), DomainError);
    EXPECT_THROW(shifted_disk_boundary(0.5, 0), RangeError);
}

TEST(Boundaries, PhiMax) {
    EXPECT_NEAR(phi_max(1.0, 64, 1.0), std::sqrt(512.0), 1e-12);
    EXPECT_NEAR(phi_max(1.0, 64, 1.0), 22.63, 5e-3);
    for (int d : {8, 32, 64}) EXPECT_NEAR(phi_max(rmt::critical_tau(d, 1.0), d, 1.0), 2 * kPi, 1e-12);
    EXPECT_EQ(phi_max(0.0, 64, 1.0), 0.0);
    const auto e = rmt::sample_goe(16, 1.0, 4).energies;
    EXPECT_NEAR(phi_max_from_energies(e, 0.1), 0.1 * (e(15) - e(0)), 1e-15);
}

TEST(Classification, PublishedRegimes) {
    EXPECT_EQ(classify_phase(0.7, 1.0, 3, 64, 1.0), Phase::Disk);
    EXPECT_EQ(classify_phase(0.2, 1.0, 3, 64, 1.0), Phase::Annular);
    EXPECT_EQ(classify_phase(0.7, 1e-4, 3, 64, 1.0), Phase::ShiftedDisk);
    EXPECT_EQ(classify_phase(0.2, 0.1, 3, 32, 1.0), Phase::Crescent);
    EXPECT_EQ(classify_phase(0.0, 1e-4, 3, 32, 1.0), Phase::Crescent);
}

TEST(Classification, ContinuousWithInnerRadius) {
    // Above tau_c the annulus-disk switch happens exactly where the inner
    // radius disappears.
    for (int k : {2, 3, 5}) {
        for (double e = 0.0; e <= 1.0; e += 0.001) {
            const bool annular = classify_phase(e, 1.0, k, 32, 1.0) == Phase::Annular;
            const auto r = annular_boundaries(e, k);
            const bool has_ring = r.inner.has_value() && *r.inner > 0.0;
            EXPECT_EQ(annular, has_ring) << "K=" << k << " eps=" << e;
        }
    }
}

TEST(Classification, ClampedSineReducesToCriticalEpsilon) {
    // For phi_max >= pi/2 the shifted-disk threshold equals eps_c.
    EXPECT_NEAR(shifted_disk_threshold(kPi / 2, 3), critical_epsilon(3), 1e-15);
    EXPECT_NEAR(shifted_disk_threshold(5.0, 3), critical_epsilon(3), 1e-15);
    EXPECT_EQ(shifted_disk_threshold(0.0, 3), 0.0);
    double prev = 0.0;
    for (double phi = 0.01; phi < 7.0; phi += 0.01) {
        const double t = shifted_disk_threshold(phi, 3);
        EXPECT_GE(t, prev);
        prev = t;
    }
}

TEST(Curves, InsideTestWithWinding) {
    const auto annulus = annulus_boundary(1.0, 0.5);
    EXPECT_TRUE(inside(annulus, {0.75, 0.0}));
    EXPECT_FALSE(inside(annulus, {0.2, 0.1}));
    EXPECT_FALSE(inside(annulus, {1.2, 0.0}));
    EXPECT_TRUE(inside(annulus, {1.01, 0.0}, 0.02));
    EXPECT_TRUE(inside(annulus, {0.49, 0.0}, 0.02));
    const auto sector = sector_disk_boundary(1.0, 0.5);
    EXPECT_TRUE(inside(sector, std::polar(0.9, 0.45)));
    EXPECT_FALSE(inside(sector, std::polar(0.9, 0.6)));
    EXPECT_TRUE(inside(sector, std::polar(0.9, -0.45)));
    EXPECT_FALSE(inside(sector, {-0.1, 0.0}));
    EXPECT_TRUE(inside(sector_disk_boundary(1.0, 4.0), {-0.5, 0.0}));
}

TEST(Curves, ContainmentFraction) {
    const auto c = circle_boundary(0.0, 1.0);
    EXPECT_EQ(containment_fraction({{0.1, 0.1}, {0.5, -0.2}}, c, 0.0), 1.0);
    EXPECT_EQ(containment_fraction({{0.1, 0.1}, {2.0, 0.0}}, c, 0.0), 0.5);
    EXPECT_THROW(containment_fraction({}, c, 0.0), InsufficientData);
}

TEST(Curves, PowerIdentityAndUnitCircle) {
    const auto c = circle_boundary({0.3, 0.1}, 0.4, 512);
    const auto same = boundary_power(c, 1);
    EXPECT_EQ(same.loops, c.loops);
    const auto unit = boundary_power(circle_boundary(0.0, 1.0, 256), 7);
    for (const auto& z : unit.loops[0]) EXPECT_NEAR(std::abs(z), 1.0, 1e-13);
    EXPECT_THROW(boundary_power(c, 0), DomainError);
}

TEST(Curves, PoweredShiftedDiskContainsPoweredSpectrum) {
    // Shifted-disk channel (tau = 1e-4, eps = 0.2, K = 2): the spectrum of L^25
    // lies inside the 25th power of the shifted-disk boundary. At d = 8 a single
    // finite-size outlier among 63 eigenvalues already breaks 99%, so the check
    // pools four realizations at d = 32.
    const auto sd = shifted_disk_boundary(0.2, 2);
    const auto curve = boundary_power(circle_boundary(sd.center, sd.radius), 25);
    std::vector<Complex> pooled;
    for (std::uint64_t seed : {10u, 20u, 30u, 40u}) {
        const auto l = pqc::build_superoperator(make_channel(32, 2, 1e-4, 0.2, seed));
        const auto bulk = spectral_bulk(eigenvalues(l.pow(25)));
        pooled.insert(pooled.end(), bulk.begin(), bulk.end());
    }
    EXPECT_GE(containment_fraction(pooled, curve, 1e-3), 0.99);
}

TEST(Curves, PoweredSpectrumEqualsPoweredEigenvalues) {
    const auto l = pqc::build_superoperator(make_channel(8, 2, 1e-4, 0.2, 10));
    const auto base = eigenvalues(l);
    const auto powered = eigenvalues(l.pow(25));
    std::vector<bool> used(64, false);
    for (int i = 0; i < 64; ++i) {
        const Complex target = std::pow(base(i), 25);
        int best = -1;
        double bd = 1e300;
        for (int k = 0; k < 64; ++k)
            if (!used[k] && std::abs(powered(k) - target) < bd) bd = std::abs(powered(k) - target), best = k;
        used[best] = true;
        EXPECT_LT(bd, 1e-8);
    }
}

TEST(SpacingRatios, CollinearPoints) {
    const std::vector<Complex> pts{{0, 0}, {1, 0}, {2, 0}};
    const auto r = complex_spacing_ratios_brute(pts);
    ASSERT_EQ(r.ratios.size(), 3u);
    // Middle point: neighbours at equal distance, lower index first: z = (0-1)/(2-1) = -1.
    EXPECT_NEAR(std::abs(r.ratios[1] - Complex(-1, 0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(r.ratios[0]), 0.5, 1e-15);
    EXPECT_NEAR(std::abs(r.ratios[2]), 0.5, 1e-15);
    EXPECT_NEAR(r.ratios[0].real(), 0.5, 1e-15);
    EXPECT_THROW(complex_spacing_ratios({{0, 0}, {1, 0}}), InsufficientData);
}

TEST(SpacingRatios, BoundedByOne) {
    const auto r = complex_spacing_ratios(random_cloud(3000, 5));
    for (const auto& z : r.ratios) EXPECT_LE(std::abs(z), 1.0 + 1e-15);
}

TEST(SpacingRatios, GridMatchesBruteForceExactly) {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto pts = random_cloud(4096, seed);
        const auto a = complex_spacing_ratios_brute(pts);
        const auto b = complex_spacing_ratios(pts);
        ASSERT_EQ(a.ratios.size(), b.ratios.size());
        for (std::size_t i = 0; i < a.ratios.size(); ++i) {
            ASSERT_EQ(a.ratios[i], b.ratios[i]) << i;
            ASSERT_EQ(a.indices[i], b.indices[i]) << i;
        }
    }
}

TEST(SpacingRatios, GridHandlesLatticeTiesAndDuplicates) {
    // Integer lattice: many equidistant neighbours; ties resolve by index.
    std::vector<Complex> pts;
    for (int i = 0; i < 20; ++i)
        for (int j = 0; j < 20; ++j) pts.emplace_back(i, j);
    pts.emplace_back(3, 3);  // exact duplicate
    pts.emplace_back(7.5, 0);
    const auto a = complex_spacing_ratios_brute(pts);
    const auto b = complex_spacing_ratios(pts);
    ASSERT_EQ(a.ratios.size(), b.ratios.size());
    for (std::size_t i = 0; i < a.ratios.size(); ++i) {
        EXPECT_EQ(a.ratios[i], b.ratios[i]);
        EXPECT_EQ(a.indices[i], b.indices[i]);
    }
    // Collinear cloud degenerates the grid to one row.
    std::vector<Complex> line;
    for (int i = 0; i < 50; ++i) line.emplace_back(0.37 * i * i, 0.0);
    const auto la = complex_spacing_ratios_brute(line), lb = complex_spacing_ratios(line);
    EXPECT_EQ(la.ratios, lb.ratios);
}

TEST(SpacingRatios, DegeneratePointsExcluded) {
    const std::vector<Complex> pts{{0, 0}, {0, 0}, {0, 0}, {1, 0}};
    const auto r = complex_spacing_ratios_brute(pts);
    // The three coincident points have a coincident next-nearest neighbour.
    ASSERT_EQ(r.ratios.size(), 1u);
    EXPECT_EQ(r.indices[0][0], 3u);
}

TEST(SpacingRatios, PoissonCloudHasNoDepletion) {
    const auto r = complex_spacing_ratios(random_cloud(4000, 9));
    const auto dep = small_ratio_depletion(r);
    // Uncorrelated points: small ratios appear at roughly the flat rate.
    EXPECT_LT(dep.deficit_sigmas, 3.0);
    EXPECT_GT(dep.observed, 0u);
}

TEST(Histogram, CountsAndRange) {
    const auto h = histogram({{0.0, 0.0}, {1.04, -1.04}, {2.0, 0.0}}, 4);
    std::uint64_t total = 0;
    for (auto c : h.counts) total += c;
    EXPECT_EQ(total, 2u);
    EXPECT_EQ(h.outside, 1u);
    EXPECT_EQ(h.at(2, 2), 1u);
    EXPECT_EQ(h.at(3, 0), 1u);
    EXPECT_EQ(h.to_json()["bins"], 4);
}

TEST(Report, InvariantsAndPhase) {
    const auto ch = make_channel(8, 3, 1.0, 0.2, 20);
    const auto eig = eigenvalues(pqc::build_superoperator(ch));
    const auto rep = make_report(eig, {1.0, 0.2, 3, 8, 1.0, 1.0});
    EXPECT_TRUE(rep.invariant_violation().empty());
    EXPECT_EQ(rep.bulk().size(), 63u);
    EXPECT_EQ(rep.phase, Phase::Annular);
    EXPECT_EQ(rep.boundary.loops.size(), 2u);
    EXPECT_LT(std::abs(rep.eigenvalues(rep.fixed_point) - 1.0), 1e-8);
}
