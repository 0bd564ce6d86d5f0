#include "bwflow/linalg.hpp"

#include "bwflow/errors.hpp"
#include "bwflow/parallel.hpp"

#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

namespace bwflow::linalg {

double RankTolerance::threshold(double lambda_max) const {
    return std::max(abs_tol, rel_tol * std::max(lambda_max, 0.0));
}

Matrix Spectrum::reconstruct() const {
    return eigenvectors * eigenvalues.asDiagonal() * eigenvectors.transpose();
}

bool is_symmetric(const Matrix& m, double tol) {
    if (m.rows() != m.cols()) return false;
    if (!m.allFinite()) return false;
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    return (m - m.transpose()).cwiseAbs().maxCoeff() <= tol * scale;
}

Matrix symmetrize(const Matrix& m) {
    return 0.5 * (m + m.transpose());
}

Spectrum eig_sym(const Matrix& m) {
    if (m.rows() != m.cols()) {
        throw SymmetryViolation("eig_sym: matrix is not square");
    }
    if (m.size() == 0) return {};
    if (!is_symmetric(m)) {
        std::ostringstream msg;
        msg << "eig_sym: matrix is not symmetric (max asymmetry "
            << (m - m.transpose()).cwiseAbs().maxCoeff() << ")";
        throw SymmetryViolation(msg.str());
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetrize(m));
    if (solver.info() != Eigen::Success) {
        throw MathError("eig_sym: eigensolver did not converge");
    }
    return {solver.eigenvalues(), solver.eigenvectors()};
}

std::size_t null_dimension(const Matrix& m, RankTolerance tol) {
    const Spectrum s = eig_sym(m);
    if (s.eigenvalues.size() == 0) return 0;
    const double cut = tol.threshold(s.eigenvalues.maxCoeff());
    return static_cast<std::size_t>((s.eigenvalues.array().abs() <= cut).count());
}

namespace {

// Applies f to the spectrum of a PSD matrix after clamping round-off negatives.
template <class F>
Matrix psd_apply(const Matrix& m, RankTolerance tol, const char* who, F&& f) {
    const Spectrum s = eig_sym(m);
    if (s.eigenvalues.size() == 0) return m;
    const double lambda_max = s.eigenvalues.maxCoeff();
    const double lambda_min = s.eigenvalues.minCoeff();
    if (lambda_min < -tol.abs_tol && lambda_min < -tol.rel_tol * std::abs(lambda_max)) {
        std::ostringstream msg;
        msg << who << ": matrix is not PSD (min eigenvalue " << lambda_min << ")";
        throw NotPSD(msg.str());
    }
    const double cut = tol.threshold(lambda_max);
    Vector mapped(s.eigenvalues.size());
    for (Index i = 0; i < mapped.size(); ++i) {
        mapped[i] = f(std::max(s.eigenvalues[i], 0.0), cut);
    }
    return symmetrize(s.eigenvectors * mapped.asDiagonal() * s.eigenvectors.transpose());
}

}  // namespace

Matrix psd_sqrt(const Matrix& m, RankTolerance tol) {
    return psd_apply(m, tol, "psd_sqrt", [](double l, double) { return std::sqrt(l); });
}

Matrix psd_pinv(const Matrix& m, RankTolerance tol) {
    return psd_apply(m, tol, "psd_pinv", [](double l, double cut) { return l <= cut ? 0.0 : 1.0 / l; });
}

Matrix psd_power(const Matrix& m, double p, RankTolerance tol) {
    if (p > 0.0) {
        return psd_apply(m, tol, "psd_power", [p](double l, double) { return std::pow(l, p); });
    }
    return psd_apply(m, tol, "psd_power",
                     [p](double l, double cut) { return l <= cut ? 0.0 : std::pow(l, p); });
}

LsqrResult lsqr_solve(const LinearOperator& apply, const Vector& b, std::size_t max_iter,
                      double atol) {
    if (max_iter < 1) throw InputError("lsqr_solve: max_iter must be at least 1");
    LsqrResult out;
    out.x = Vector::Zero(b.size());

    const double bnorm = b.norm();
    if (bnorm == 0.0) {
        out.converged = true;
        return out;
    }

    Vector u = b / bnorm;
    Vector v = apply(u);
    ++out.operator_applications;
    double alpha = v.norm();
    if (alpha == 0.0) {
        // b is orthogonal to the range; x = 0 is the least-squares solution.
        out.converged = true;
        out.residual_norm = bnorm;
        return out;
    }
    v /= alpha;
    Vector w = v;

    double phibar = bnorm;
    double rhobar = alpha;
    double anorm_sq = 0.0;
    double xnorm = 0.0;

    for (std::size_t it = 1; it <= max_iter; ++it) {
        u = apply(v) - alpha * u;
        ++out.operator_applications;
        const double beta = u.norm();
        if (beta > 0.0) u /= beta;
        anorm_sq += alpha * alpha + beta * beta;

        v = apply(u) - beta * v;
        ++out.operator_applications;
        alpha = v.norm();
        if (alpha > 0.0) v /= alpha;

        const double rho = std::hypot(rhobar, beta);
        const double c = rhobar / rho;
        const double s = beta / rho;
        const double theta = s * alpha;
        rhobar = -c * alpha;
        const double phi = c * phibar;
        phibar = s * phibar;

        out.x += (phi / rho) * w;
        w = v - (theta / rho) * w;
        xnorm = out.x.norm();
        out.iterations = it;

        const double anorm = std::sqrt(anorm_sq);
        const double rnorm = phibar;
        const double arnorm = phibar * alpha * std::abs(c);
        const bool small_residual = rnorm <= atol * (anorm * xnorm + bnorm);
        const bool small_normal = arnorm <= atol * anorm * rnorm;
        if (small_residual || small_normal || alpha == 0.0) {
            out.converged = true;
            break;
        }
    }
    out.residual_norm = (apply(out.x) - b).norm();
    ++out.operator_applications;
    return out;
}

namespace {

struct ColumnSolver {
    Eigen::SparseMatrix<double> op;
    bool center = false;
    std::size_t max_iter;
    double atol;

    ColumnSolver(const Matrix& l, std::size_t max_iter_, double atol_)
        : op(l.sparseView()), max_iter(max_iter_), atol(atol_) {
        const Index n = l.rows();
        if (n > 0) {
            const double scale = std::max(1.0, l.cwiseAbs().maxCoeff());
            center = (l * Vector::Ones(n)).cwiseAbs().maxCoeff() <= 1e-10 * scale * n;
        }
    }

    LsqrResult solve(Index j) const {
        const Index n = op.rows();
        Vector b = Vector::Unit(n, j);
        if (center) b.array() -= 1.0 / static_cast<double>(n);
        LinearOperator apply = [this](const Vector& x) -> Vector { return op * x; };
        LsqrResult r = lsqr_solve(apply, b, max_iter, atol);
        if (center) r.x.array() -= r.x.mean();
        return r;
    }
};

PinvResult assemble(const Matrix& l, std::vector<LsqrResult>& cols) {
    PinvResult out;
    out.pinv = Matrix(l.rows(), l.cols());
    out.converged = true;
    for (Index j = 0; j < l.cols(); ++j) {
        LsqrResult& r = cols[static_cast<std::size_t>(j)];
        out.pinv.col(j) = r.x;
        out.converged = out.converged && r.converged;
        out.operator_applications += r.operator_applications;
        out.max_iterations = std::max(out.max_iterations, r.iterations);
    }
    out.pinv = symmetrize(out.pinv);
    return out;
}

void check_square(const Matrix& l) {
    if (l.rows() != l.cols()) throw DimensionMismatch("pinv_via_lsqr: matrix is not square");
    if (!is_symmetric(l)) throw SymmetryViolation("pinv_via_lsqr: matrix is not symmetric");
}

}  // namespace

PinvResult pinv_via_lsqr(const Matrix& l, std::size_t max_iter, double atol) {
    check_square(l);
    const ColumnSolver solver(l, max_iter, atol);
    const Index n = l.rows();
    std::vector<LsqrResult> cols(static_cast<std::size_t>(n));
    parallel_for(static_cast<std::size_t>(n),
                 [&](std::size_t j) { cols[j] = solver.solve(static_cast<Index>(j)); });
    return assemble(l, cols);
}

namespace serial {

PinvResult pinv_via_lsqr(const Matrix& l, std::size_t max_iter, double atol) {
    check_square(l);
    const ColumnSolver solver(l, max_iter, atol);
    const Index n = l.rows();
    std::vector<LsqrResult> cols(static_cast<std::size_t>(n));
    for (Index j = 0; j < n; ++j) {
        cols[static_cast<std::size_t>(j)] = solver.solve(j);
    }
    return assemble(l, cols);
}

}  // namespace serial

}  // namespace bwflow::linalg
