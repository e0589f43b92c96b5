#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "fbmou/errors.hpp"

namespace fbmou {

/// Rank-revealing factor of a symmetric PSD matrix: A ~= L L^T with L
/// (dim x rank) in the original row indexing; `pivots` records the
/// elimination order.
struct PivotedCholesky {
    Eigen::MatrixXd factor;
    std::vector<int> pivots;
    int rank = 0;
};

/// Outer-product pivoted Cholesky, stopping when the largest remaining
/// diagonal pivot drops to tol * trace(A). A pivot below -tol * trace(A)
/// means the input is not PSD. `first_pivot` forces the initial pivot row
/// (used to keep the Brownian increment on a fixed stream slot).
inline PivotedCholesky pivoted_cholesky(const Eigen::MatrixXd& matrix, double tol,
                                        int first_pivot = -1) {
    const int dim = int(matrix.rows());
    if (matrix.cols() != dim)
        throw std::invalid_argument("pivoted_cholesky requires a square matrix");
    if (tol < 0.0)
        throw std::invalid_argument("pivoted_cholesky requires tol >= 0");

    const double trace = matrix.trace();
    const double stop = tol * trace;

    Eigen::VectorXd diag = matrix.diagonal();
    Eigen::MatrixXd factor = Eigen::MatrixXd::Zero(dim, dim);
    std::vector<bool> used(dim, false);
    std::vector<int> pivots;
    pivots.reserve(dim);

    for (int k = 0; k < dim; ++k) {
        int piv = -1;
        double best = -1.0;
        for (int i = 0; i < dim; ++i) {
            if (!used[i] && diag(i) > best) {
                best = diag(i);
                piv = i;
            }
        }
        if (k == 0 && first_pivot >= 0)
            piv = first_pivot;
        for (int i = 0; i < dim; ++i)
            if (!used[i] && diag(i) < -stop)
                throw numerical_failure("pivoted_cholesky: input is not PSD (pivot " +
                                        std::to_string(diag(i)) + ")");
        if (piv < 0 || diag(piv) <= stop)
            break;

        const double root = std::sqrt(diag(piv));
        factor(piv, k) = root;
        for (int i = 0; i < dim; ++i) {
            if (used[i] || i == piv)
                continue;
            double v = matrix(i, piv);
            for (int j = 0; j < k; ++j)
                v -= factor(i, j) * factor(piv, j);
            factor(i, k) = v / root;
            diag(i) -= factor(i, k) * factor(i, k);
        }
        used[piv] = true;
        diag(piv) = 0.0;
        pivots.push_back(piv);
    }

    PivotedCholesky result;
    result.rank = int(pivots.size());
    result.factor = factor.leftCols(result.rank);
    result.pivots = std::move(pivots);
    return result;
}

}  // namespace fbmou
