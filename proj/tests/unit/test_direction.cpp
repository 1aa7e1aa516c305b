#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mslab/direction.hpp"
#include "mslab/error.hpp"

using namespace mslab;

TEST(Direction, AlphaValues) {
  EXPECT_NEAR(ensemble_alpha(2, 2), std::sin(M_PI / 4.0), 1e-14);
  EXPECT_NEAR(ensemble_alpha(2, 3), std::sin(0.5), 1e-14);
  EXPECT_DOUBLE_EQ(ensemble_alpha(5, 1), 1.0);
  EXPECT_GT(direction_alpha_bound(3, 2), ensemble_alpha(3, 2));
  for (int N = 2; N < 8; ++N) EXPECT_GT(ensemble_alpha(N, 3), ensemble_alpha(N + 1, 3));
}

TEST(Direction, ScoreOfCollinearVelocities) {
  const std::vector<Vec> v{{0.0, 0.0}, {1.0, 0.0}, {3.0, 0.0}};
  EXPECT_DOUBLE_EQ(separation_score(v, {1.0, 0.0}), 1.0);
  EXPECT_NEAR(separation_score(v, {0.0, 1.0}), 0.0, 1e-15);
  const DirectionResult r = select_direction(v, 0.5);
  EXPECT_NEAR(r.basis[0][0], 1.0, 1e-6);
  EXPECT_NEAR(r.score, 1.0, 1e-9);
}

TEST(Direction, OneDimension) {
  const DirectionResult r = select_direction({{1.0}, {-2.0}}, 1.0);
  EXPECT_EQ(r.basis.size(), 1u);
  EXPECT_DOUBLE_EQ(r.basis[0][0], 1.0);
}

TEST(Direction, BeatsEnsembleAlphaAndBasisIsOrthonormal) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> n;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Vec> v(4, Vec(3));
    for (auto& x : v)
      for (double& c : x) c = n(rng);
    const double alpha = ensemble_alpha(4, 3);
    const DirectionResult r = select_direction(v, alpha);
    EXPECT_GE(r.score, alpha);
    EXPECT_NEAR(r.score, separation_score(v, r.basis[0]), 1e-12);
    ASSERT_EQ(r.basis.size(), 3u);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) {
        double dot = 0.0;
        for (int k = 0; k < 3; ++k) dot += r.basis[i][k] * r.basis[j][k];
        EXPECT_NEAR(dot, i == j ? 1.0 : 0.0, 1e-12);
      }
    const auto& e = r.basis[0];
    const double lead = std::abs(e[0]) > 1e-14 ? e[0] : std::abs(e[1]) > 1e-14 ? e[1] : e[2];
    EXPECT_GT(lead, 0.0);
  }
}

TEST(Direction, CompleteBasis) {
  const Vec e1{0.0, 0.6, 0.8};
  const auto b = complete_basis(e1);
  ASSERT_EQ(b.size(), 3u);
  EXPECT_EQ(b[0], e1);
  for (std::size_t i = 1; i < 3; ++i) {
    double dot = 0.0, nn = 0.0;
    for (int k = 0; k < 3; ++k) {
      dot += b[i][k] * e1[k];
      nn += b[i][k] * b[i][k];
    }
    EXPECT_NEAR(dot, 0.0, 1e-14);
    EXPECT_NEAR(nn, 1.0, 1e-14);
  }
}

TEST(Direction, ThrowsWhenAlphaTooLarge) {
  const std::vector<Vec> v{{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};
  try {
    select_direction(v, 0.99);
    FAIL() << "expected AlphaTooLarge";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::AlphaTooLarge);
  }
}
