#include "bwflow/velocity.hpp"

#include "bwflow/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace bwflow {

namespace {

// The BW path in long double. Central differences at h ~ 1e-4 are otherwise
// limited by double round-off in W(t ± h) on nearly-linear paths.
using XMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using XVector = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

XMatrix x_symmetrize(const XMatrix& m) { return (m + m.transpose()) / 2.0L; }

template <class F>
XMatrix x_psd_apply(const XMatrix& m, const linalg::RankTolerance& tol, F&& f) {
    const Eigen::SelfAdjointEigenSolver<XMatrix> es(x_symmetrize(m));
    const XVector& lambda = es.eigenvalues();
    if (lambda.size() == 0) return m;
    const long double cut = tol.threshold(static_cast<double>(lambda.maxCoeff()));
    XVector mapped(lambda.size());
    for (Index i = 0; i < lambda.size(); ++i) mapped[i] = f(std::max(lambda[i], 0.0L), cut);
    return x_symmetrize(es.eigenvectors() * mapped.asDiagonal() * es.eigenvectors().transpose());
}

XMatrix x_sqrt(const XMatrix& m, const linalg::RankTolerance& tol) {
    return x_psd_apply(m, tol, [](long double l, long double) { return std::sqrt(l); });
}

XMatrix x_pinv(const XMatrix& m, const linalg::RankTolerance& tol) {
    return x_psd_apply(m, tol, [](long double l, long double cut) { return l > cut ? 1.0L / l : 0.0L; });
}

class ExtendedBwPath {
public:
    ExtendedBwPath(const GraphMRF& g0, const GraphMRF& g1) : nu_(g0.nu) {
        const Index n = g0.n();
        XMatrix p0 = g0.laplacian.cast<long double>();
        XMatrix p1 = g1.laplacian.cast<long double>();
        p0.diagonal().array() += static_cast<long double>(g0.nu);
        p1.diagonal().array() += static_cast<long double>(g1.nu);
        if (nu_ == 0.0) {
            const XMatrix c = XMatrix::Identity(n, n) - XMatrix::Constant(n, n, 1.0L / static_cast<long double>(n));
            center_ = c;
        }
        p0_sqrt_ = x_sqrt(p0, tol_);
        cov0_ = project(x_pinv(p0, tol_));
        const XMatrix cov1 = project(x_pinv(p1, tol_));
        const XMatrix s0 = x_sqrt(cov0_, tol_);
        cross_ = project(x_sqrt(project(s0 * cov1 * s0), tol_));
    }

    [[nodiscard]] XMatrix weights(long double t) const {
        const XMatrix inner = (1.0L - t) * cov0_ + t * cross_;
        XMatrix l = project(x_pinv(project(p0_sqrt_ * inner * inner * p0_sqrt_), tol_));
        XMatrix w = -l;
        w.diagonal().setZero();
        return w;
    }

private:
    [[nodiscard]] XMatrix project(const XMatrix& m) const {
        return nu_ == 0.0 ? x_symmetrize(center_ * m * center_) : x_symmetrize(m);
    }

    double nu_;
    linalg::RankTolerance tol_{};
    XMatrix center_;
    XMatrix p0_sqrt_;
    XMatrix cov0_;
    XMatrix cross_;
};

void check_velocity_time(double t) {
    if (!(t >= 0.0)) throw InputError("velocity time must be nonnegative");
    if (t > kMaxVelocityTime) throw TimeSingularity("velocity requested too close to t = 1");
}

}  // namespace

GraphVelocity bw_velocity(const BwGeodesic& geodesic, double t, BwVelocityForm form) {
    check_velocity_time(t);
    const Matrix precision = geodesic.precision_at(t);
    const Index n = precision.rows();
    Matrix rate;
    if (form == BwVelocityForm::exact) {
        rate = geodesic.tangent(t);
    } else {
        rate = geodesic.transport_map() - Matrix::Identity(n, n);
    }
    // ν is constant along the path, so L̇_t = Ṗ_t = −(P_t A + A P_t).
    const Matrix l_dot = geodesic.project(-(precision * rate + rate * precision));

    GraphVelocity v;
    v.w_dot = adjacency_from_laplacian(l_dot);
    const Matrix x_t = (1.0 - t) * geodesic.source().mean + t * geodesic.target().mean;
    v.x_dot = (geodesic.target().mean - x_t) / (1.0 - t);
    return v;
}

GraphVelocity bw_velocity(const GraphMRF& g0, const GraphMRF& g1, double t, BwVelocityForm form) {
    check_velocity_time(t);
    return bw_velocity(BwGeodesic(g0, g1), t, form);
}

Matrix discrete_edge_velocity(const Matrix& e_t, const Matrix& w_t, const Matrix& w_dot,
                              double clamp_eps, EdgeRateForm form) {
    if (e_t.rows() != w_t.rows() || e_t.cols() != w_t.cols() || w_dot.rows() != w_t.rows() ||
        w_dot.cols() != w_t.cols()) {
        throw DimensionMismatch("discrete_edge_velocity: matrix shapes differ");
    }
    if (!(clamp_eps > 0.0 && clamp_eps < 0.5)) throw InputError("clamp_eps must lie in (0, 0.5)");
    const Index n = w_t.rows();
    Matrix rates = Matrix::Zero(n, n);
    for (Index j = 0; j < n; ++j) {
        for (Index i = 0; i < n; ++i) {
            if (i == j) continue;
            const double w = std::clamp(w_t(i, j), clamp_eps, 1.0 - clamp_eps);
            const double wd = w_dot(i, j);
            const bool on = e_t(i, j) > 0.5;
            if (form == EdgeRateForm::signed_ratio) {
                rates(i, j) = (on ? -1.0 : 1.0) * wd / (w * (1.0 - w));
            } else if (on) {
                rates(i, j) = std::max(-wd, 0.0) / w;
            } else {
                rates(i, j) = std::max(wd, 0.0) / (1.0 - w);
            }
        }
    }
    return rates;
}

Matrix discrete_node_velocity(const Matrix& x_t, const Matrix& x1, double t) {
    if (x_t.rows() != x1.rows() || x_t.cols() != x1.cols()) {
        throw DimensionMismatch("discrete_node_velocity: feature shapes differ");
    }
    check_velocity_time(t);
    return (x1 - x_t) / (1.0 - t);
}

GraphVelocity numerical_velocity(const GraphMRF& g0, const GraphMRF& g1, double t, double h,
                                 InterpScheme scheme) {
    if (!(h > 0.0)) throw InputError("numerical_velocity: step must be positive");
    if (t - h < 0.0 || t + h > 1.0) throw InputError("numerical_velocity: step leaves [0, 1]");
    PathPoint ahead;
    PathPoint behind;
    if (scheme.kind == SchemeKind::bw) {
        static_cast<void>(BwGeodesic(g0, g1));  // compatibility checks
        const ExtendedBwPath path(g0, g1);
        const long double step = h;
        GraphVelocity v;
        v.w_dot = ((path.weights(t + step) - path.weights(t - step)) / (2.0L * step)).cast<double>();
        v.x_dot = (g1.mean - g0.mean);
        return v;
    }
    ahead = baseline_interpolate(g0, g1, t + h, scheme);
    behind = baseline_interpolate(g0, g1, t - h, scheme);
    GraphVelocity v;
    v.w_dot = (ahead.w - behind.w) / (2.0 * h);
    v.x_dot = (ahead.x - behind.x) / (2.0 * h);
    return v;
}

}  // namespace bwflow
