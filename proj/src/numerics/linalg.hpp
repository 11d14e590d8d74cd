// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dmimo Authors. Licensed under the Apache License, Version 2.0.

#pragma once

// Small dense complex linear algebra for MIMO processing. Matrices are
// Eigen::MatrixXcd (column-major); Eigen is used for storage and products
// only, the decompositions are implemented here.

#include <Eigen/Core>

#include <complex>

namespace dmimo
{

using ComplexMatrix = Eigen::MatrixXcd;

// Singular values at or below sigma_max * rank_tolerance count as zero.
inline constexpr double rank_tolerance = 1e-12;

// Thin SVD: a = left * diag(singular) * right^H with r = min(rows, cols),
// singular values descending and non-negative.
struct Svd
{
    ComplexMatrix left;       // rows x r, orthonormal columns
    Eigen::VectorXd singular; // r
    ComplexMatrix right;      // cols x r, orthonormal columns
};

// One-sided (Hestenes) Jacobi. Converges when every pairwise column
// correlation is below 1e-14; throws ConvergenceError after 100 sweeps.
Svd svd(const ComplexMatrix &a);

// Number of singular values above sigma_max * rank_tolerance.
int numerical_rank(const Eigen::VectorXd &singular);

struct PseudoInverse
{
    ComplexMatrix matrix;
    int rank = 0;
    bool rank_deficient = false;
};

// Moore-Penrose pseudo-inverse through the SVD; rank_deficient flags a
// tolerance-based rank below min(rows, cols).
PseudoInverse pseudo_inverse(const ComplexMatrix &a);
ComplexMatrix pinv(const ComplexMatrix &a);

// diag((H^H H)^-1) through a Cholesky factorization of the Gram matrix.
// Throws SingularGram unless H has full column rank.
Eigen::VectorXd gram_inverse_diagonal(const ComplexMatrix &h);

} // namespace dmimo
