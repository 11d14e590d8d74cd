// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dmimo Authors. Licensed under the Apache License, Version 2.0.

#include "numerics/linalg.hpp"

#include "common/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace dmimo
{

namespace
{

constexpr int max_sweeps = 100;
constexpr double rotation_tolerance = 1e-14;

// Appends orthonormal columns to q (rows x k with orthonormal columns) until
// it has `target` columns, by Gram-Schmidt over the canonical basis.
void complete_basis(ComplexMatrix &q, Eigen::Index filled, Eigen::Index target)
{
    const Eigen::Index m = q.rows();
    for (Eigen::Index e = 0; e < m && filled < target; ++e)
    {
        Eigen::VectorXcd v = Eigen::VectorXcd::Unit(m, e);
        for (int pass = 0; pass < 2; ++pass)
            for (Eigen::Index j = 0; j < filled; ++j)
                v -= q.col(j) * q.col(j).dot(v);
        const double n = v.norm();
        if (n > 1e-6)
            q.col(filled++) = v / n;
    }
}

// Jacobi on the columns of a tall-or-square matrix.
Svd svd_tall(const ComplexMatrix &a)
{
    using cd = std::complex<double>;
    const Eigen::Index m = a.rows();
    const Eigen::Index n = a.cols();
    ComplexMatrix u = a;
    ComplexMatrix v = ComplexMatrix::Identity(n, n);

    const double scale = a.norm();
    const double tiny = std::pow(std::numeric_limits<double>::epsilon() * scale, 2);

    bool converged = (n < 2) || scale == 0.0;
    for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep)
    {
        converged = true;
        for (Eigen::Index p = 0; p < n - 1; ++p)
        {
            for (Eigen::Index q = p + 1; q < n; ++q)
            {
                const double alpha = u.col(p).squaredNorm();
                const double beta = u.col(q).squaredNorm();
                if (alpha <= tiny || beta <= tiny)
                    continue;
                const cd gamma = u.col(p).dot(u.col(q)); // a_p^H a_q
                const double g = std::abs(gamma);
                if (g <= rotation_tolerance * std::sqrt(alpha * beta))
                    continue;
                converged = false;

                const cd phase = gamma / g;
                const double zeta = (beta - alpha) / (2.0 * g);
                const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;

                const Eigen::VectorXcd up = u.col(p);
                const Eigen::VectorXcd uq = u.col(q) * std::conj(phase);
                u.col(p) = c * up - s * uq;
                u.col(q) = s * up + c * uq;

                const Eigen::VectorXcd vp = v.col(p);
                const Eigen::VectorXcd vq = v.col(q) * std::conj(phase);
                v.col(p) = c * vp - s * vq;
                v.col(q) = s * vp + c * vq;
            }
        }
    }
    if (!converged)
        throw ConvergenceError("Jacobi SVD did not converge within " + std::to_string(max_sweeps) + " sweeps");

    Eigen::VectorXd sigma(n);
    for (Eigen::Index j = 0; j < n; ++j)
        sigma[j] = u.col(j).norm();
    std::vector<Eigen::Index> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto i, auto j) { return sigma[i] > sigma[j]; });

    Svd out;
    out.singular.resize(n);
    out.left = ComplexMatrix::Zero(m, n);
    out.right.resize(n, n);
    const double cutoff = (n > 0 ? sigma[order[0]] : 0.0) * std::numeric_limits<double>::epsilon() * 4;
    Eigen::Index filled = 0;
    for (Eigen::Index k = 0; k < n; ++k)
    {
        const Eigen::Index j = order[k];
        out.singular[k] = sigma[j];
        out.right.col(k) = v.col(j);
        if (sigma[j] > cutoff && sigma[j] > 0.0)
        {
            out.left.col(k) = u.col(j) / sigma[j];
            filled = k + 1;
        }
    }
    // Columns for (numerically) zero singular values are an arbitrary
    // orthonormal completion.
    if (filled < n)
        complete_basis(out.left, filled, n);
    return out;
}

} // namespace

Svd svd(const ComplexMatrix &a)
{
    if (!a.allFinite())
        throw ConvergenceError("SVD input contains non-finite entries");
    if (a.rows() >= a.cols())
        return svd_tall(a);
    Svd t = svd_tall(a.adjoint());
    return {std::move(t.right), std::move(t.singular), std::move(t.left)};
}

int numerical_rank(const Eigen::VectorXd &singular)
{
    if (singular.size() == 0 || singular[0] <= 0.0)
        return 0;
    const double tol = singular[0] * rank_tolerance;
    int r = 0;
    for (Eigen::Index i = 0; i < singular.size(); ++i)
        if (singular[i] > tol)
            ++r;
    return r;
}

PseudoInverse pseudo_inverse(const ComplexMatrix &a)
{
    const Svd d = svd(a);
    PseudoInverse out;
    out.rank = numerical_rank(d.singular);
    out.rank_deficient = out.rank < std::min(a.rows(), a.cols());
    out.matrix = ComplexMatrix::Zero(a.cols(), a.rows());
    for (int i = 0; i < out.rank; ++i)
        out.matrix += d.right.col(i) * (1.0 / d.singular[i]) * d.left.col(i).adjoint();
    return out;
}

ComplexMatrix pinv(const ComplexMatrix &a) { return pseudo_inverse(a).matrix; }

Eigen::VectorXd gram_inverse_diagonal(const ComplexMatrix &h)
{
    using cd = std::complex<double>;
    const Eigen::Index n = h.cols();
    if (n == 0)
        return {};
    if (h.rows() < n || numerical_rank(svd(h).singular) < n)
        throw SingularGram("channel does not have full column rank");

    const ComplexMatrix g = h.adjoint() * h;
    // Lower Cholesky factor, g = l l^H.
    ComplexMatrix l = ComplexMatrix::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
    {
        double d = g(j, j).real();
        for (Eigen::Index k = 0; k < j; ++k)
            d -= std::norm(l(j, k));
        if (!(d > 0.0))
            throw SingularGram("Gram matrix is not positive definite");
        l(j, j) = std::sqrt(d);
        for (Eigen::Index i = j + 1; i < n; ++i)
        {
            cd s = g(i, j);
            for (Eigen::Index k = 0; k < j; ++k)
                s -= l(i, k) * std::conj(l(j, k));
            l(i, j) = s / l(j, j).real();
        }
    }
    // (l l^H)^-1 = l^-H l^-1, so the i-th diagonal entry is the squared norm
    // of column i of l^-1.
    ComplexMatrix linv = ComplexMatrix::Zero(n, n);
    for (Eigen::Index c = 0; c < n; ++c)
    {
        for (Eigen::Index i = c; i < n; ++i)
        {
            cd s = (i == c) ? cd(1.0) : cd(0.0);
            for (Eigen::Index k = c; k < i; ++k)
                s -= l(i, k) * linv(k, c);
            linv(i, c) = s / l(i, i).real();
        }
    }
    Eigen::VectorXd diag(n);
    for (Eigen::Index i = 0; i < n; ++i)
        diag[i] = linv.col(i).squaredNorm();
    return diag;
}

} // namespace dmimo
