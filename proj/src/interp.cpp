#include "bwflow/interp.hpp"

#include "bwflow/errors.hpp"
#include "bwflow/metric.hpp"
#include "bwflow/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace bwflow {

std::string to_string(SchemeKind kind) {
    switch (kind) {
        case SchemeKind::bw: return "bw";
        case SchemeKind::linear: return "linear";
        case SchemeKind::geometric: return "geometric";
        case SchemeKind::harmonic: return "harmonic";
    }
    return "bw";
}

SchemeKind parse_scheme(std::string_view name) {
    if (name == "bw") return SchemeKind::bw;
    if (name == "linear") return SchemeKind::linear;
    if (name == "geometric") return SchemeKind::geometric;
    if (name == "harmonic") return SchemeKind::harmonic;
    throw InputError("unknown interpolation scheme '" + std::string(name) + "'");
}

namespace {

void check_time(double t) {
    if (!(t >= 0.0 && t <= 1.0)) throw InputError("interpolation time must lie in [0, 1]");
}

Matrix center(const Matrix& m) {
    const Vector rows = m.rowwise().mean();
    const Vector cols = m.colwise().mean().transpose();
    Matrix out = m;
    out.colwise() -= rows;
    out.rowwise() -= cols.transpose();
    out.array() += m.mean();
    return linalg::symmetrize(out);
}

Matrix precision_of(const GraphMRF& g) {
    Matrix p = g.laplacian;
    p.diagonal().array() += g.nu;
    return p;
}

}  // namespace

BwGeodesic::BwGeodesic(const GraphMRF& source, const GraphMRF& target, linalg::RankTolerance tol)
    : source_(source), target_(target), tol_(tol) {
    require_compatible(source_, target_, tol_);
    const Matrix p0 = precision_of(source_);
    precision0_sqrt_ = linalg::psd_sqrt(p0, tol_);
    covariance0_ = project(linalg::psd_pinv(p0, tol_));
    const Matrix covariance1 = project(linalg::psd_pinv(precision_of(target_), tol_));
    const Matrix cov0_sqrt = linalg::psd_sqrt(covariance0_, tol_);
    cross_sqrt_ = project(linalg::psd_sqrt(project(cov0_sqrt * covariance1 * cov0_sqrt), tol_));
    transport_ = project(precision0_sqrt_ * cross_sqrt_ * precision0_sqrt_);
    transport_spectrum_ = linalg::eig_sym(transport_);
}

Matrix BwGeodesic::project(const Matrix& m) const {
    return source_.nu == 0.0 ? center(m) : linalg::symmetrize(m);
}

Matrix BwGeodesic::covariance_at(double t) const {
    check_time(t);
    const Matrix inner = (1.0 - t) * covariance0_ + t * cross_sqrt_;
    return project(precision0_sqrt_ * inner * inner * precision0_sqrt_);
}

Matrix BwGeodesic::precision_at(double t) const {
    return project(linalg::psd_pinv(covariance_at(t), tol_));
}

PathPoint BwGeodesic::at(double t) const {
    PathPoint p;
    p.t = t;
    p.x = (1.0 - t) * source_.mean + t * target_.mean;
    p.l = precision_at(t);
    p.l.diagonal().array() -= nu();
    p.w = adjacency_from_laplacian(p.l);
    return p;
}

Matrix BwGeodesic::tangent(double t) const {
    check_time(t);
    const Vector& mu = transport_spectrum_.eigenvalues;
    Vector rate(mu.size());
    for (Index i = 0; i < mu.size(); ++i) {
        const double denom = (1.0 - t) + t * mu[i];
        rate[i] = denom > 0.0 ? (mu[i] - 1.0) / denom : 0.0;
    }
    const Matrix& u = transport_spectrum_.eigenvectors;
    return linalg::symmetrize(u * rate.asDiagonal() * u.transpose());
}

Matrix transport_map(const Matrix& l0, const Matrix& l1, double nu, linalg::RankTolerance tol) {
    const Index n = l0.rows();
    const GraphMRF g0{Matrix::Zero(n, 0), l0, nu, 1.0};
    const GraphMRF g1{Matrix::Zero(l1.rows(), 0), l1, nu, 1.0};
    return BwGeodesic(g0, g1, tol).transport_map();
}

PathPoint bw_interpolate(const GraphMRF& g0, const GraphMRF& g1, double t, linalg::RankTolerance tol) {
    check_time(t);
    return BwGeodesic(g0, g1, tol).at(t);
}

Matrix spectral_floor(const Matrix& a, double eps) {
    const linalg::Spectrum s = linalg::eig_sym(a);
    const Vector floored = s.eigenvalues.cwiseMax(eps);
    return linalg::symmetrize(s.eigenvectors * floored.asDiagonal() * s.eigenvectors.transpose());
}

namespace {

// Floored matrices are positive definite, so no eigenvalue should be cut.
constexpr linalg::RankTolerance kExact{0.0, 0.0};

}  // namespace

Matrix geometric_mean(const Matrix& a, const Matrix& b, double t, double eps) {
    const Matrix af = spectral_floor(a, eps);
    const Matrix bf = spectral_floor(b, eps);
    const Matrix root = linalg::psd_sqrt(af, kExact);
    const Matrix inv_root = linalg::psd_power(af, -0.5, kExact);
    const Matrix inner = linalg::psd_power(linalg::symmetrize(inv_root * bf * inv_root), t, kExact);
    return linalg::symmetrize(root * inner * root);
}

Matrix harmonic_mean(const Matrix& a, const Matrix& b, double t, double eps) {
    const Matrix ainv = linalg::psd_pinv(spectral_floor(a, eps), kExact);
    const Matrix binv = linalg::psd_pinv(spectral_floor(b, eps), kExact);
    return linalg::psd_pinv(linalg::symmetrize((1.0 - t) * ainv + t * binv), kExact);
}

PathPoint baseline_interpolate(const GraphMRF& g0, const GraphMRF& g1, double t, InterpScheme scheme) {
    check_time(t);
    if (g0.n() != g1.n()) throw DimensionMismatch("graphs have different node counts");
    if (g0.mean.cols() != g1.mean.cols()) throw DimensionMismatch("feature widths differ");
    if (!(scheme.eps > 0.0)) throw InputError("interpolation eps must be positive");

    const Matrix w0 = adjacency_from_laplacian(g0.laplacian);
    const Matrix w1 = adjacency_from_laplacian(g1.laplacian);
    PathPoint p;
    p.t = t;
    p.x = (1.0 - t) * g0.mean + t * g1.mean;
    switch (scheme.kind) {
        case SchemeKind::linear: p.w = (1.0 - t) * w0 + t * w1; break;
        case SchemeKind::geometric: p.w = geometric_mean(w0, w1, t, scheme.eps); break;
        case SchemeKind::harmonic: p.w = harmonic_mean(w0, w1, t, scheme.eps); break;
        case SchemeKind::bw: throw InputError("baseline_interpolate: bw is not a baseline scheme");
    }
    p.w.diagonal().setZero();
    p.l = laplacian(p.w);
    return p;
}

PathPoint interpolate(const GraphMRF& g0, const GraphMRF& g1, double t, InterpScheme scheme) {
    if (scheme.kind == SchemeKind::bw) return bw_interpolate(g0, g1, t);
    return baseline_interpolate(g0, g1, t, scheme);
}

namespace {

double sweep_time(std::size_t i, std::size_t steps) {
    if (i + 1 == steps) return 1.0;
    return static_cast<double>(i) / static_cast<double>(steps - 1);
}

}  // namespace

std::vector<PathPoint> path_sweep(const GraphMRF& g0, const GraphMRF& g1, InterpScheme scheme,
                                  std::size_t steps) {
    if (steps < 2) throw InputError("path_sweep: steps must be at least 2");
    std::vector<PathPoint> out(steps);
    if (scheme.kind == SchemeKind::bw) {
        const BwGeodesic geo(g0, g1);
        parallel_for(steps, [&](std::size_t i) { out[i] = geo.at(sweep_time(i, steps)); });
    } else {
        parallel_for(steps, [&](std::size_t i) {
            out[i] = baseline_interpolate(g0, g1, sweep_time(i, steps), scheme);
        });
    }
    return out;
}

namespace serial {

std::vector<PathPoint> path_sweep(const GraphMRF& g0, const GraphMRF& g1, InterpScheme scheme,
                                  std::size_t steps) {
    if (steps < 2) throw InputError("path_sweep: steps must be at least 2");
    std::vector<PathPoint> out;
    out.reserve(steps);
    if (scheme.kind == SchemeKind::bw) {
        const BwGeodesic geo(g0, g1);
        for (std::size_t i = 0; i < steps; ++i) out.push_back(geo.at(sweep_time(i, steps)));
    } else {
        for (std::size_t i = 0; i < steps; ++i) out.push_back(baseline_interpolate(g0, g1, sweep_time(i, steps), scheme));
    }
    return out;
}

}  // namespace serial

}  // namespace bwflow
