#include <gtest/gtest.h>

#include <Eigen/Dense>

#include "fbmou/cholesky.hpp"

using namespace fbmou;

TEST(PivotedCholesky, IdentityIsFullRank) {
    const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(3, 3);
    const PivotedCholesky chol = pivoted_cholesky(eye, 1e-12);
    EXPECT_EQ(chol.rank, 3);
    EXPECT_LT((chol.factor * chol.factor.transpose() - eye).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(PivotedCholesky, AllOnesIsRankOne) {
    const Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(2, 2);
    const PivotedCholesky chol = pivoted_cholesky(ones, 1e-12);
    EXPECT_EQ(chol.rank, 1);
    EXPECT_NEAR(chol.factor(0, 0), 1.0, 1e-14);
    EXPECT_NEAR(chol.factor(1, 0), 1.0, 1e-14);
}

TEST(PivotedCholesky, RecoversLowRankStructure) {
    Eigen::MatrixXd g(5, 2);
    g << 1.0, 0.5, -0.3, 2.0, 0.7, -1.1, 0.0, 0.9, 1.4, 0.2;
    const Eigen::MatrixXd a = g * g.transpose();
    const PivotedCholesky chol = pivoted_cholesky(a, 1e-12);
    EXPECT_EQ(chol.rank, 2);
    EXPECT_LE((chol.factor * chol.factor.transpose() - a).cwiseAbs().maxCoeff(),
              1e-12 * a.trace());
}

TEST(PivotedCholesky, RejectsIndefiniteInput) {
    Eigen::MatrixXd a(2, 2);
    a << 1.0, 2.0, 2.0, 1.0;  // eigenvalues 3 and -1
    EXPECT_THROW(pivoted_cholesky(a, 1e-12), numerical_failure);
}

TEST(PivotedCholesky, ForcedFirstPivot) {
    Eigen::MatrixXd a(3, 3);
    a << 4.0, 1.0, 0.5, 1.0, 9.0, 0.2, 0.5, 0.2, 1.0;
    const PivotedCholesky chol = pivoted_cholesky(a, 1e-12, /*first_pivot=*/2);
    EXPECT_EQ(chol.pivots.front(), 2);
    // Forced pivot row carries weight only in column 0.
    EXPECT_NEAR(chol.factor(2, 0), 1.0, 1e-14);
    EXPECT_NEAR(chol.factor(2, 1), 0.0, 1e-14);
    EXPECT_NEAR(chol.factor(2, 2), 0.0, 1e-14);
    EXPECT_LE((chol.factor * chol.factor.transpose() - a).cwiseAbs().maxCoeff(),
              1e-12 * a.trace());
}

TEST(PivotedCholesky, RejectsNonSquare) {
    EXPECT_THROW(pivoted_cholesky(Eigen::MatrixXd::Zero(2, 3), 1e-12), std::invalid_argument);
    EXPECT_THROW(pivoted_cholesky(Eigen::MatrixXd::Identity(2, 2), -1.0), std::invalid_argument);
}
