#pragma once

// Symmetric-matrix spectral primitives. Every matrix function (square root,
// pseudoinverse, real powers) goes through a single eigendecomposition path
// and re-symmetrizes its output.

#include "bwflow/types.hpp"

#include <cstddef>
#include <functional>

namespace bwflow::linalg {

/// Decides which eigenvalues count as zero: λ ≤ max(abs_tol, rel_tol·λ_max).
struct RankTolerance {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;

    [[nodiscard]] double threshold(double lambda_max) const;
};

/// Eigenvalues in ascending order with orthonormal eigenvectors as columns.
struct Spectrum {
    Vector eigenvalues;
    Matrix eigenvectors;

    [[nodiscard]] Matrix reconstruct() const;
};

/// Largest asymmetry |m_ij − m_ji| tolerated by eig_sym, scaled by max(1, max|m_ij|).
inline constexpr double kSymmetryTolerance = 1e-12;

[[nodiscard]] bool is_symmetric(const Matrix& m, double tol = kSymmetryTolerance);
[[nodiscard]] Matrix symmetrize(const Matrix& m);

/// Throws SymmetryViolation when `m` is not symmetric within tolerance.
Spectrum eig_sym(const Matrix& m);

/// Number of eigenvalues at or below the rank threshold.
[[nodiscard]] std::size_t null_dimension(const Matrix& m, RankTolerance tol = {});

// The PSD functions below clamp eigenvalues in [−abs_tol, 0) to zero and throw
// NotPSD for anything more negative.
[[nodiscard]] Matrix psd_sqrt(const Matrix& m, RankTolerance tol = {});
[[nodiscard]] Matrix psd_pinv(const Matrix& m, RankTolerance tol = {});

/// λ → λ^p on eigenvalues above the rank threshold, 0 elsewhere. For p > 0 the
/// sub-threshold eigenvalues are kept as λ^p as well, so psd_power(m, 0.5) == psd_sqrt(m).
[[nodiscard]] Matrix psd_power(const Matrix& m, double p, RankTolerance tol = {});

using LinearOperator = std::function<Vector(const Vector&)>;

struct LsqrResult {
    Vector x;
    bool converged = false;
    std::size_t iterations = 0;
    std::size_t operator_applications = 0;
    double residual_norm = 0.0;
};

/// Paige–Saunders LSQR for a symmetric operator, started from x = 0, so for a
/// consistent singular system it returns the minimum-norm solution. Only
/// operator–vector products are used. Non-convergence is reported through
/// `converged`; the last (lowest-residual) iterate is returned.
LsqrResult lsqr_solve(const LinearOperator& apply, const Vector& b, std::size_t max_iter,
                      double atol);

struct PinvResult {
    Matrix pinv;
    bool converged = false;
    std::size_t operator_applications = 0;
    std::size_t max_iterations = 0;
};

/// Pseudoinverse of a Laplacian-like symmetric matrix, one LSQR solve per
/// column. When the constant vector spans part of the null space the unit
/// right-hand sides are mean-centred first. Columns are solved in parallel.
PinvResult pinv_via_lsqr(const Matrix& l, std::size_t max_iter, double atol);

namespace serial {
/// Single-threaded reference for pinv_via_lsqr; results are bit-identical.
PinvResult pinv_via_lsqr(const Matrix& l, std::size_t max_iter, double atol);
}  // namespace serial

}  // namespace bwflow::linalg
