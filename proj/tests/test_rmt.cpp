#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "pqchaos/rmt.hpp"
#include "support.hpp"

using namespace pqchaos;

TEST(Goe, SymmetricWithRealSortedSpectrum) {
    const auto h = rmt::sample_goe(2, 1.0, 11);
    ASSERT_TRUE(h.matrix.has_value());
    EXPECT_EQ((*h.matrix - h.matrix->transpose()).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ(h.energies.size(), 2);
    EXPECT_LE(h.energies(0), h.energies(1));
}

TEST(Goe, EigenvaluesMatchMatrix) {
    const auto h = rmt::sample_goe(16, 1.3, 5);
    const RealMatrix& v = *h.eigenvectors;
    const RealMatrix recon = v * h.energies.asDiagonal() * v.transpose();
    EXPECT_LT(max_norm(recon - *h.matrix), 1e-10 * max_norm(*h.matrix));
    for (int i = 1; i < h.dim; ++i) EXPECT_LE(h.energies(i - 1), h.energies(i));
}

TEST(Goe, DeterministicInSeed) {
    const auto a = rmt::sample_goe(64, 1.0, 1234);
    const auto b = rmt::sample_goe(64, 1.0, 1234);
    const auto c = rmt::sample_goe(64, 1.0, 1235);
    EXPECT_EQ(*a.matrix, *b.matrix);
    EXPECT_NE(*a.matrix, *c.matrix);
}

TEST(Goe, RejectsTinyDimension) {
    EXPECT_THROW(rmt::sample_goe(1, 1.0, 0), InvalidDimension);
    EXPECT_THROW(rmt::sample_goe(4, 0.0, 0), DomainError);
}

TEST(Goe, EntryVariances) {
    // Off-diagonal variance sigma^2 / 2, diagonal sigma^2.
    const double sigma = 1.5;
    double off = 0.0, diag = 0.0;
    long n_off = 0, n_diag = 0;
    for (int s = 0; s < 400; ++s) {
        const auto h = rmt::sample_goe(16, sigma, 900 + s);
        for (int i = 0; i < 16; ++i) {
            diag += std::pow((*h.matrix)(i, i), 2);
            ++n_diag;
            for (int j = i + 1; j < 16; ++j) {
                off += std::pow((*h.matrix)(i, j), 2);
                ++n_off;
            }
        }
    }
    EXPECT_NEAR(off / n_off, 0.5 * sigma * sigma, 0.03 * sigma * sigma);
    EXPECT_NEAR(diag / n_diag, sigma * sigma, 0.06 * sigma * sigma);
}

TEST(Goe, SemicircleHistogram) {
    // Bin-by-bin comparison of the pooled spectrum of 10^4 GOE(64) draws with the
    // semicircle of radius sqrt(2 d sigma^2). Finite-d edge tails are lumped
    // into the outermost bins.
    const int d = 64, draws = 10000, bins = 32;
    const double radius = std::sqrt(2.0 * d);
    EXPECT_NEAR(radius, std::sqrt(128.0), 1e-12);
    std::vector<double> counts(bins, 0.0);
    for (int s = 0; s < draws; ++s) {
        const auto h = rmt::sample_goe(d, 1.0, 50000 + s);
        for (int i = 0; i < d; ++i) {
            int b = static_cast<int>(std::floor((h.energies(i) + radius) / (2 * radius) * bins));
            counts[std::clamp(b, 0, bins - 1)] += 1;
        }
    }
    const double total = static_cast<double>(draws) * d;
    // Expected bin masses from the analytic CDF of the semicircle.
    auto cdf = [&](double x) {
        const double u = std::clamp(x / radius, -1.0, 1.0);
        return 0.5 + (u * std::sqrt(1 - u * u) + std::asin(u)) / kPi;
    };
    double max_rel = 0.0;
    for (int b = 4; b < bins - 4; ++b) {
        const double lo = -radius + 2 * radius * b / bins, hi = lo + 2 * radius / bins;
        const double expected = total * (cdf(hi) - cdf(lo));
        max_rel = std::max(max_rel, std::abs(counts[b] - expected) / expected);
    }
    // Bulk bins agree to a few percent; 1/d corrections dominate the residual.
    EXPECT_LT(max_rel, 0.04);
    // Semicircle density integrates to one.
    double integral = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        const double x = -radius + (i + 0.5) * 2 * radius / n;
        integral += rmt::semicircle_density(x, d, 1.0) * 2 * radius / n;
    }
    EXPECT_NEAR(integral, 1.0, 1e-6);
}

TEST(Cue, UnitaryAndScalarCase) {
    const auto u1 = rmt::sample_cue(1, 3);
    EXPECT_NEAR(std::abs(u1(0, 0)), 1.0, 1e-14);
    const auto u = rmt::sample_cue(192, 4);
    EXPECT_LT(max_norm(u.adjoint() * u - ComplexMatrix::Identity(192, 192)), 1e-12);
}

TEST(Cue, EigenphasesUniform) {
    std::vector<double> phases;
    for (int s = 0; s < 60; ++s) {
        Eigen::ComplexEigenSolver<ComplexMatrix> es(rmt::sample_cue(64, 700 + s), false);
        for (int i = 0; i < 64; ++i) {
            double a = std::arg(es.eigenvalues()(i));
            if (a < 0) a += 2 * kPi;
            phases.push_back(a / (2 * kPi));
        }
    }
    // Eigenphases repel, so the KS statistic is far smaller than for i.i.d.
    // samples; the i.i.d. 1% critical value is a loose upper bound.
    const double n = static_cast<double>(phases.size());
    EXPECT_LT(testsupport::ks_uniform(phases), 1.63 / std::sqrt(n));
}

TEST(Cue, LeftInvariance) {
    // Mean of |U_00|^2 is 1/n; left-multiplying by a fixed unitary keeps it.
    const int n = 8, draws = 4000;
    const ComplexMatrix w = rmt::sample_cue(n, 99);
    double a = 0.0, b = 0.0;
    for (int s = 0; s < draws; ++s) {
        const auto u = rmt::sample_cue(n, 10000 + s);
        a += std::norm(u(0, 0));
        b += std::norm((w * u)(0, 0));
    }
    // Var |U_00|^2 = (n-1)/(n^2 (n+1)).
    const double se = std::sqrt((n - 1.0) / (n * n * (n + 1.0)) / draws);
    EXPECT_NEAR(a / draws, 1.0 / n, 4 * se);
    EXPECT_NEAR(b / draws, 1.0 / n, 4 * se);
}

TEST(Kraus, SingleOperatorIsUnitary) {
    const auto v = rmt::sample_cue(6, 1);
    const auto ks = rmt::kraus_from_truncation(v, 6, 1, 5);
    EXPECT_EQ(ks.count(), 1);
    EXPECT_LT(max_norm(ks[0].adjoint() * ks[0] - ComplexMatrix::Identity(6, 6)), 1e-12);
}

TEST(Kraus, TracePreservingAcrossOffsets) {
    const auto v = rmt::sample_cue(192, 8);
    for (int offset : {1, 2, 17, 64, 128}) {
        const auto ks = rmt::kraus_from_truncation(v, 64, 3, offset);
        EXPECT_LE(ks.trace_preservation_error(), 1e-12) << "offset " << offset;
    }
    for (int d : {2, 5, 8}) {
        for (int k = 1; k <= std::min(4, d * d - 2); ++k) {
            const auto ks = rmt::sample_kraus(d, k, 31 * d + k, 1);
            EXPECT_LE(ks.trace_preservation_error(), 1e-12);
        }
    }
}

TEST(Kraus, BlockLayout) {
    const auto v = rmt::sample_cue(12, 21);
    const auto ks = rmt::kraus_from_truncation(v, 4, 3, 2);
    for (int r = 0; r < 3; ++r)
        for (int nu = 0; nu < 4; ++nu)
            for (int mu = 0; mu < 4; ++mu) EXPECT_EQ(ks[r](nu, mu), v(4 * r + nu, 2 + mu));
}

TEST(Kraus, Errors) {
    const auto v = rmt::sample_cue(12, 21);
    EXPECT_THROW(rmt::kraus_from_truncation(v, 4, 3, 0), RangeError);
    EXPECT_THROW(rmt::kraus_from_truncation(v, 4, 3, 9), RangeError);
    EXPECT_THROW(rmt::kraus_from_truncation(ComplexMatrix::Ones(12, 12), 4, 3, 1), DomainError);
    EXPECT_THROW(rmt::KrausSet::checked({ComplexMatrix::Identity(2, 2) * 2.0}), NotTracePreserving);
    std::vector<ComplexMatrix> many(3, ComplexMatrix::Identity(2, 2) / std::sqrt(3.0));
    EXPECT_THROW(rmt::KrausSet::checked(many), RangeError);  // K > d^2 - 2 = 2
}

TEST(Scales, Formulas) {
    EXPECT_NEAR(rmt::mean_level_spacing(64, 1.0), std::sqrt(512.0) / 63.0, 1e-15);
    EXPECT_NEAR(rmt::mean_level_spacing(64, 1.0), 0.35916, 1e-5);
    EXPECT_DOUBLE_EQ(rmt::mean_level_spacing(2, 1.0), 4.0);
    EXPECT_DOUBLE_EQ(rmt::mean_level_spacing(10, 3.0), 3.0 * rmt::mean_level_spacing(10, 1.0));
    EXPECT_NEAR(rmt::heisenberg_time(64, 1.0, 1.0), 63.0 * kPi / std::sqrt(128.0), 1e-12);
    EXPECT_NEAR(rmt::heisenberg_time(64, 1.0, 1.0), 17.494, 1e-3);
    EXPECT_NEAR(rmt::critical_tau(64, 1.0, 1.0), 0.27768, 1e-5);
    EXPECT_NEAR(rmt::critical_tau(2, 1.0, 1.0), kPi / 2, 1e-15);
    EXPECT_DOUBLE_EQ(rmt::heisenberg_time(64, 1, 2), 2 * rmt::heisenberg_time(64, 1, 1));
}

TEST(Scales, Consistency) {
    for (int d : {2, 8, 32, 64, 100}) {
        for (double sigma : {0.5, 1.0, 2.0}) {
            EXPECT_NEAR(rmt::heisenberg_time(d, sigma) / rmt::critical_tau(d, sigma), d - 1, 1e-12 * d);
            EXPECT_NEAR(rmt::heisenberg_time(d, sigma), 2 * kPi / rmt::mean_level_spacing(d, sigma),
                        1e-12 * rmt::heisenberg_time(d, sigma));
        }
    }
}
