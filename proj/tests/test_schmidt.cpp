#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "schmidt_lab/schmidt.hpp"

using namespace schmidt;

namespace {

Grid index_grid(std::size_t n) { return make_grid(0.0, double(n - 1), 0.0, double(n - 1), n); }

AmplitudeMatrix normalized(const Matrix &m) { return normalize(AmplitudeMatrix(index_grid(std::size_t(m.rows())), m)); }

Vector unit(std::mt19937_64 &rng, Eigen::Index n) {
  Vector v = oracle::random_complex(rng, n, 1);
  return v / v.norm();
}

/// Random normalized n x n matrix of the given rank.
Matrix random_rank(std::mt19937_64 &rng, Eigen::Index n, Eigen::Index rank) {
  Matrix m = oracle::random_complex(rng, n, rank) * oracle::random_complex(rng, rank, n);
  return m / m.norm();
}

Matrix term(const SchmidtResult &r, std::size_t k) {
  return r.singular_values[k] * r.mode_p(k) * r.mode_q(k).transpose();
}

} // namespace

TEST(SchmidtDecompose, RankOne) {
  std::mt19937_64 rng(1);
  const Vector u = unit(rng, 5), v = unit(rng, 5);
  const auto r = schmidt_decompose(normalized(u * v.transpose()));
  ASSERT_EQ(r.rank(), 1u);
  EXPECT_NEAR(r.lambdas[0], 1.0, 1e-15);
  EXPECT_NEAR(r.schmidt_number, 1.0, 1e-14);
  EXPECT_NEAR(r.entropy, 0.0, 1e-14);
  EXPECT_NEAR(std::abs(mode_overlap(u, r.mode_p(0))), 1.0, 1e-12);
  EXPECT_NEAR(std::abs(mode_overlap(v, r.mode_q(0))), 1.0, 1e-12);
}

TEST(SchmidtDecompose, MaximallyEntangledTwoMode) {
  std::mt19937_64 rng(2);
  const Matrix uu = oracle::random_unitary(rng, 4), vv = oracle::random_unitary(rng, 4);
  const Matrix a = (uu.col(0) * vv.col(0).transpose() + uu.col(1) * vv.col(1).transpose()) / std::sqrt(2.0);
  const auto r = schmidt_decompose(normalized(a));
  ASSERT_EQ(r.rank(), 2u);
  EXPECT_NEAR(r.lambdas[0], 0.5, 1e-14);
  EXPECT_NEAR(r.lambdas[1], 0.5, 1e-14);
  EXPECT_NEAR(r.schmidt_number, 2.0, 1e-12);
  EXPECT_NEAR(r.entropy, 1.0, 1e-12);
}

TEST(SchmidtDecompose, MatchesOracleOnRandomMatrices) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 40; ++t) {
    const Eigen::Index n = 2 + t % 7;
    const auto a = normalized(oracle::random_complex(rng, n, n));
    DecompositionOptions full;
    full.truncation_relative_threshold = 0.0;
    const auto r = schmidt_decompose(a, full);
    const auto ref = oracle::schmidt_weights(a.entries(), rng);
    ASSERT_EQ(r.rank(), std::size_t(n));
    for (std::size_t k = 0; k < r.rank(); ++k) EXPECT_NEAR(r.lambdas[k], ref[k], 1e-8);
    EXPECT_LE(r.reconstruction_error, 1e-10);
  }
}

TEST(SchmidtDecompose, ResultInvariants) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 60; ++t) {
    const Eigen::Index n = 2 + t % 9;
    const Eigen::Index rank = 1 + t % n;
    const auto r = schmidt_decompose(normalized(random_rank(rng, n, rank)));
    double sum = 0.0;
    for (std::size_t k = 0; k < r.rank(); ++k) {
      sum += r.lambdas[k];
      EXPECT_GE(r.lambdas[k], 0.0);
      if (k) EXPECT_GE(r.lambdas[k - 1], r.lambdas[k]);
    }
    EXPECT_NEAR(sum, 1.0, 1e-10);
    EXPECT_EQ(r.rank(), std::size_t(rank));
    const auto ri = Eigen::Index(r.rank());
    EXPECT_LE((r.modes_p.adjoint() * r.modes_p - Matrix::Identity(ri, ri)).cwiseAbs().maxCoeff(), 1e-8);
    EXPECT_LE((r.modes_q.adjoint() * r.modes_q - Matrix::Identity(ri, ri)).cwiseAbs().maxCoeff(), 1e-8);
    EXPECT_GE(r.schmidt_number, 1.0 - 1e-12);
    EXPECT_LE(r.schmidt_number, double(r.rank()) + 1e-9);
    EXPECT_GE(r.entropy, -1e-12);
    EXPECT_LE(r.entropy, std::log2(double(r.rank())) + 1e-9);
    if (r.rank() == 1) {
      EXPECT_NEAR(r.schmidt_number, 1.0, 1e-12);
      EXPECT_NEAR(r.entropy, 0.0, 1e-12);
    } else {
      EXPECT_GT(r.schmidt_number, 1.0);
      EXPECT_GT(r.entropy, 0.0);
    }
  }
}

TEST(SchmidtDecompose, GaugeFixesLargestComponent) {
  std::mt19937_64 rng(5);
  const auto r = schmidt_decompose(normalized(oracle::random_complex(rng, 6, 6)));
  for (std::size_t k = 0; k < r.rank(); ++k) {
    Eigen::Index idx;
    r.mode_p(k).cwiseAbs().maxCoeff(&idx);
    EXPECT_GT(r.mode_p(k)(idx).real(), 0.0);
    EXPECT_EQ(r.mode_p(k)(idx).imag(), 0.0);
  }
}

TEST(SchmidtDecompose, GaugeInvariance) {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 20; ++t) {
    const auto a = normalized(oracle::random_complex(rng, 7, 7));
    DecompositionOptions none;
    none.gauge = Gauge::none;
    const auto fixed = schmidt_decompose(a);
    const auto raw = schmidt_decompose(a, none);
    ASSERT_EQ(fixed.rank(), raw.rank());
    EXPECT_NEAR(fixed.schmidt_number, raw.schmidt_number, 1e-12);
    EXPECT_NEAR(fixed.entropy, raw.entropy, 1e-12);
    for (std::size_t k = 0; k < fixed.rank(); ++k) {
      EXPECT_NEAR(fixed.lambdas[k], raw.lambdas[k], 1e-12);
      EXPECT_LE((term(fixed, k) - term(raw, k)).cwiseAbs().maxCoeff(), 1e-12);
    }
  }
}

TEST(SchmidtDecompose, UnitaryInvariance) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 20; ++t) {
    const Eigen::Index n = 3 + t % 6;
    const Matrix a = oracle::random_complex(rng, n, n);
    const Matrix b = oracle::random_unitary(rng, n) * a * oracle::random_unitary(rng, n);
    const auto ra = schmidt_decompose(normalized(a));
    const auto rb = schmidt_decompose(normalized(b));
    ASSERT_EQ(ra.rank(), rb.rank());
    for (std::size_t k = 0; k < ra.rank(); ++k) EXPECT_NEAR(ra.lambdas[k], rb.lambdas[k], 1e-9);
  }
}

TEST(SchmidtDecompose, TransposeSwapsModeFamilies) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 20; ++t) {
    const Matrix a = oracle::random_complex(rng, 6, 6);
    const auto r = schmidt_decompose(normalized(a));
    const auto rt = schmidt_decompose(normalized(Matrix(a.transpose())));
    ASSERT_EQ(r.rank(), rt.rank());
    for (std::size_t k = 0; k < r.rank(); ++k) {
      EXPECT_NEAR(r.lambdas[k], rt.lambdas[k], 1e-12);
      EXPECT_NEAR(std::abs(mode_overlap(r.mode_q(k), rt.mode_p(k))), 1.0, 1e-8);
      EXPECT_NEAR(std::abs(mode_overlap(r.mode_p(k), rt.mode_q(k))), 1.0, 1e-8);
    }
  }
}

TEST(SchmidtDecompose, GramRouteAgreesWithDirect) {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 20; ++t) {
    const Eigen::Index n = 2 + t % 7;
    const auto a = normalized(oracle::random_complex(rng, n, n));
    DecompositionOptions gram;
    gram.route = Route::gram_eigen;
    gram.truncation_relative_threshold = 1e-12;
    const auto d = schmidt_decompose(a);
    const auto g = schmidt_decompose(a, gram);
    ASSERT_EQ(d.rank(), g.rank());
    for (std::size_t k = 0; k < d.rank(); ++k) {
      EXPECT_NEAR(d.lambdas[k], g.lambdas[k], 1e-8);
      EXPECT_LE((term(d, k) - term(g, k)).cwiseAbs().maxCoeff(), 1e-6);
    }
    EXPECT_LE(g.reconstruction_error, 1e-6);
  }
}

TEST(SchmidtDecompose, GramRouteRegularizesZeroWeights) {
  std::mt19937_64 rng(10);
  const auto a = normalized(random_rank(rng, 8, 3));
  DecompositionOptions gram;
  gram.route = Route::gram_eigen;
  gram.truncation_relative_threshold = 1e-12;
  const auto r = schmidt_decompose(a, gram);
  EXPECT_EQ(r.rank(), 3u);
  EXPECT_TRUE(r.modes_q.allFinite());
  EXPECT_LE(r.reconstruction_error, 1e-6);
}

TEST(SchmidtDecompose, TruncationRecordsDiscardedWeight) {
  // Known spectrum: singular values sqrt(0.6), sqrt(0.3), sqrt(0.09), sqrt(0.01).
  std::mt19937_64 rng(11);
  const Matrix u = oracle::random_unitary(rng, 4), v = oracle::random_unitary(rng, 4);
  RealVector s(4);
  s << std::sqrt(0.6), std::sqrt(0.3), std::sqrt(0.09), std::sqrt(0.01);
  const auto a = normalized(u * s.cast<cplx>().asDiagonal() * v);
  DecompositionOptions opts;
  opts.truncation_relative_threshold = 0.1; // keeps lambda / lambda_1 >= 0.1: 0.6, 0.3, 0.09
  const auto r = schmidt_decompose(a, opts);
  ASSERT_EQ(r.rank(), 3u);
  EXPECT_NEAR(r.discarded_weight, 0.01, 1e-12);
  EXPECT_NEAR(r.lambdas[0], 0.6 / 0.99, 1e-12);
  EXPECT_NEAR(r.reconstruction_error, std::sqrt(0.01), 1e-12);
  EXPECT_NEAR(r.untruncated_schmidt_number, 1.0 / (0.36 + 0.09 + 0.0081 + 0.0001), 1e-10);
  // Discarded mass is bounded by the threshold: err^2 <= (n - r) * threshold * lambda_1.
  EXPECT_LE(r.reconstruction_error * r.reconstruction_error, (4 - 3) * 0.1 * 0.6);

  opts.max_rank = 1;
  EXPECT_EQ(schmidt_decompose(a, opts).rank(), 1u);
}

TEST(SchmidtDecompose, DefaultThresholdKeepsTinyErrors) {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 20; ++t) {
    const Eigen::Index n = 4 + t % 5;
    const auto a = normalized(random_rank(rng, n, 2));
    const auto r = schmidt_decompose(a);
    const double bound = std::sqrt(double(n - r.rank()) * 1e-14 * r.singular_values[0] * r.singular_values[0]);
    EXPECT_LE(r.reconstruction_error, std::max(bound, 1e-10));
  }
}

TEST(SchmidtDecompose, Errors) {
  const Grid g = index_grid(2);
  EXPECT_THROW(schmidt_decompose(AmplitudeMatrix(g, Matrix::Identity(2, 2))), DomainError);
  DecompositionOptions bad;
  bad.truncation_relative_threshold = 1.0;
  EXPECT_THROW(schmidt_decompose(normalize(AmplitudeMatrix(g, Matrix::Identity(2, 2))), bad), DomainError);
  bad = {};
  bad.regularization_epsilon = 1e-9;
  EXPECT_THROW(bad.validate(), DomainError);
  bad.regularization_epsilon = 1e-17;
  EXPECT_THROW(bad.validate(), DomainError);
}

TEST(SchmidtNumber, Examples) {
  EXPECT_DOUBLE_EQ(schmidt_number(std::vector<double>{1.0}), 1.0);
  EXPECT_DOUBLE_EQ(schmidt_number(std::vector<double>{0.5, 0.5}), 2.0);
  EXPECT_NEAR(schmidt_number(std::vector<double>{0.7, 0.3}), 1.0 / 0.58, 1e-14);
  EXPECT_NEAR(schmidt_number(std::vector<double>{0.7, 0.3}), 1.72414, 1e-5);
  EXPECT_THROW(schmidt_number(std::vector<double>{0.0, 0.0}), DomainError);
  EXPECT_THROW(schmidt_number(std::vector<double>{}), DomainError);
  EXPECT_THROW(schmidt_number(std::vector<double>{0.5, 0.4}), DomainError);
}

TEST(EntanglementEntropy, Examples) {
  EXPECT_DOUBLE_EQ(entanglement_entropy(std::vector<double>{1.0}), 0.0);
  EXPECT_DOUBLE_EQ(entanglement_entropy(std::vector<double>{0.5, 0.5}), 1.0);
  EXPECT_DOUBLE_EQ(entanglement_entropy(std::vector<double>{0.25, 0.25, 0.25, 0.25}), 2.0);
  EXPECT_DOUBLE_EQ(entanglement_entropy(std::vector<double>{1.0, 0.0}), 0.0);
  EXPECT_THROW(entanglement_entropy(std::vector<double>{1.2, -0.2}), DomainError);
}

TEST(Reconstruct, RoundTrip) {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 10; ++t) {
    const auto a = normalized(oracle::random_complex(rng, 6, 6));
    const auto r = schmidt_decompose(a);
    const auto back = reconstruct(r, a.grid());
    EXPECT_LE(relative_frobenius_error(back.entries(), a.entries()), r.reconstruction_error + 1e-14);
    EXPECT_LE(r.reconstruction_error, 1e-10);
  }
}

TEST(Reconstruct, EckartYoungOnKnownSpectrum) {
  std::mt19937_64 rng(14);
  const Matrix uu = oracle::random_unitary(rng, 3), vv = oracle::random_unitary(rng, 3);
  const Matrix a = (uu.col(0) * vv.col(0).transpose() + uu.col(1) * vv.col(1).transpose()) / std::sqrt(2.0);
  const auto na = normalized(a);
  const auto r = schmidt_decompose(na);
  const auto one = reconstruct(r, na.grid(), 1);
  EXPECT_NEAR((one.entries() - na.entries()).norm(), std::sqrt(0.5), 1e-12);
  EXPECT_NEAR(captured_weight(r, 1), 0.5, 1e-12);
}

TEST(Reconstruct, Errors) {
  std::mt19937_64 rng(15);
  const auto a = normalized(oracle::random_complex(rng, 4, 4));
  const auto r = schmidt_decompose(a);
  EXPECT_THROW(reconstruct(r, index_grid(5)), DomainError);
  EXPECT_THROW(reconstruct(r, a.grid(), 0), DomainError);
  EXPECT_THROW(reconstruct(r, a.grid(), 5), DomainError);
}

TEST(ModeOverlap, Examples) {
  std::mt19937_64 rng(16);
  const Matrix q = oracle::random_unitary(rng, 5);
  const Vector a = q.col(0), b = q.col(1);
  EXPECT_NEAR(std::abs(mode_overlap(a, a)), 1.0, 1e-14);
  EXPECT_NEAR(std::abs(mode_overlap(a, b)), 0.0, 1e-14);
  for (double phi : {0.1, 1.0, 2.5, -3.0})
    EXPECT_NEAR(std::abs(mode_overlap(a, Vector(a * std::polar(1.0, phi)))), 1.0, 1e-14);
  for (int t = 0; t < 100; ++t) {
    const Vector x = unit(rng, 5), y = unit(rng, 5);
    EXPECT_LE(std::abs(mode_overlap(x, y)), 1.0 + 1e-12);
  }
  EXPECT_THROW(mode_overlap(a, Vector::Zero(5)), DomainError);
  EXPECT_THROW(mode_overlap(a, Vector::Ones(4)), DomainError);
}
