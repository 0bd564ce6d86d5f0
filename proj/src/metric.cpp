#include "bwflow/metric.hpp"

#include "bwflow/errors.hpp"

#include <algorithm>

namespace bwflow {

double bures_trace(const Matrix& s0, const Matrix& s1, linalg::RankTolerance tol) {
    if (s0.rows() != s1.rows() || s0.cols() != s1.cols()) {
        throw DimensionMismatch("bures_trace: covariance sizes differ");
    }
    const Matrix root0 = linalg::psd_sqrt(s0, tol);
    const Matrix cross = linalg::psd_sqrt(linalg::symmetrize(root0 * s1 * root0), tol);
    return std::max(0.0, s0.trace() + s1.trace() - 2.0 * cross.trace());
}

double gaussian_w2_sq(const GaussianMeasure& a, const GaussianMeasure& b, linalg::RankTolerance tol) {
    if (a.mean.size() != b.mean.size() || a.cov.rows() != a.mean.size() ||
        b.cov.rows() != b.mean.size()) {
        throw DimensionMismatch("gaussian_w2_sq: dimension mismatch");
    }
    return (a.mean - b.mean).squaredNorm() + bures_trace(a.cov, b.cov, tol);
}

double bures_psd(const Matrix& s0, const Matrix& s1, linalg::RankTolerance tol) {
    if (s0.rows() != s1.rows() || s0.cols() != s1.cols()) {
        throw DimensionMismatch("bures_psd: matrix sizes differ");
    }
    return (linalg::psd_sqrt(s0, tol) - linalg::psd_sqrt(s1, tol)).squaredNorm();
}

Matrix mrf_covariance(const GraphMRF& g, linalg::RankTolerance tol) {
    if (g.nu == 0.0) {
        const std::size_t zeros = linalg::null_dimension(g.laplacian, tol);
        if (zeros != 1) {
            throw DisconnectedGraph("graph Laplacian has " + std::to_string(zeros) +
                                    " zero eigenvalues; set nu > 0 to regularize");
        }
        return linalg::psd_pinv(g.laplacian, tol);
    }
    Matrix precision = g.laplacian;
    precision.diagonal().array() += g.nu;
    return linalg::psd_pinv(precision, tol);
}

void require_compatible(const GraphMRF& g0, const GraphMRF& g1, linalg::RankTolerance tol) {
    if (g0.n() != g1.n()) throw DimensionMismatch("graphs have different node counts");
    if (g0.mean.rows() != g0.n() || g1.mean.rows() != g1.n() || g0.mean.cols() != g1.mean.cols()) {
        throw DimensionMismatch("feature matrices have different shapes");
    }
    if (g0.nu != g1.nu) throw InputError("graphs use different nu regularizers");
    if (g0.nu == 0.0) {
        for (const GraphMRF* g : {&g0, &g1}) {
            const std::size_t zeros = linalg::null_dimension(g->laplacian, tol);
            if (zeros != 1) {
                throw DisconnectedGraph("graph Laplacian has " + std::to_string(zeros) +
                                        " zero eigenvalues; set nu > 0 to regularize");
            }
        }
    }
}

BwDistance graph_bw_distance(const GraphMRF& g0, const GraphMRF& g1, linalg::RankTolerance tol) {
    require_compatible(g0, g1, tol);
    if (g0.beta != g1.beta) throw InputError("graph_bw_distance: graphs use different beta");
    BwDistance d;
    d.mean_term = (g0.mean - g1.mean).squaredNorm();
    d.covariance_term = g0.beta * bures_trace(mrf_covariance(g0, tol), mrf_covariance(g1, tol), tol);
    d.total = std::max(0.0, d.mean_term + d.covariance_term);
    return d;
}

}  // namespace bwflow
