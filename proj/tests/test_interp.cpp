#include "bwflow/errors.hpp"
#include "bwflow/interp.hpp"
#include "bwflow/metric.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>

using namespace bwflow;
using bwtest::rel_frobenius;

namespace {

GraphMRF p2(double w, Index k = 0) {
    return GraphMRF::from_graph(bwtest::weighted_graph(bwtest::path_weights(2, w), k));
}

// Edge weight of the P2 geodesic from weight 1 to weight 4.
double p2_weight(double t) {
    const double s = (1.0 - t) / std::sqrt(2.0) + t / std::sqrt(8.0);
    return 1.0 / (2.0 * s * s);
}

// Orthogonal basis whose first column is the normalized constant vector.
Matrix constant_first_basis(Index n, Rng& rng) {
    Matrix a = bwtest::random_orthogonal(n, rng);
    a.col(0).setConstant(1.0);
    Eigen::HouseholderQR<Matrix> qr(a);
    Matrix q = qr.householderQ() * Matrix::Identity(n, n);
    return q;
}

}  // namespace

TEST_CASE("bw_interpolate: P2 midpoint is 16/9") {
    const PathPoint p = bw_interpolate(p2(1.0), p2(4.0), 0.5);
    CHECK(p.w(0, 1) == doctest::Approx(16.0 / 9.0).epsilon(1e-12));
    CHECK(p.w(0, 0) == 0.0);
}

TEST_CASE("bw_interpolate: boundaries and constant geodesic") {
    Rng rng(41);
    for (int trial = 0; trial < 10; ++trial) {
        const Index n = bwtest::uniform_index(rng, 2, 8);
        const GraphMRF a = GraphMRF::from_graph(bwtest::random_connected_graph(n, 2, rng));
        const GraphMRF b = GraphMRF::from_graph(bwtest::random_connected_graph(n, 2, rng));
        CHECK(rel_frobenius(bw_interpolate(a, b, 0.0).l, a.laplacian) < 1e-8);
        CHECK(rel_frobenius(bw_interpolate(a, b, 1.0).l, b.laplacian) < 1e-7);
        CHECK(rel_frobenius(bw_interpolate(a, a, 0.37).l, a.laplacian) < 1e-8);
    }
}

TEST_CASE("bw_interpolate: rejects times outside [0, 1]") {
    CHECK_THROWS_AS(bw_interpolate(p2(1.0), p2(4.0), 1.5), InputError);
    CHECK_THROWS_AS(bw_interpolate(p2(1.0), p2(4.0), -0.1), InputError);
}

TEST_CASE("bw_interpolate: disconnected endpoints at nu = 0") {
    Graph g = Graph::empty(3);
    g.w(0, 1) = g.w(1, 0) = 1.0;
    const GraphMRF h = GraphMRF::from_graph(bwtest::weighted_graph(bwtest::path_weights(3)));
    CHECK_THROWS_AS(bw_interpolate(GraphMRF::from_graph(g), h, 0.5), DisconnectedGraph);
}

TEST_CASE("bw_interpolate: nu > 0 recovers the endpoints") {
    Graph g = Graph::empty(4);
    g.w(0, 1) = g.w(1, 0) = 1.0;
    const GraphMRF a = GraphMRF::from_graph(g, 0.3);
    const GraphMRF b = GraphMRF::from_graph(bwtest::weighted_graph(bwtest::path_weights(4)), 0.3);
    CHECK(rel_frobenius(bw_interpolate(a, b, 0.0).l + Matrix::Identity(4, 4), a.laplacian + Matrix::Identity(4, 4)) < 1e-8);
    CHECK(rel_frobenius(bw_interpolate(a, b, 1.0).l, b.laplacian) < 1e-7);
}

TEST_CASE("transport_map: P2 pair and push-forward identity") {
    const Matrix l0 = laplacian(bwtest::path_weights(2, 1.0));
    const Matrix l1 = laplacian(bwtest::path_weights(2, 4.0));
    const Matrix t = transport_map(l0, l1);
    const Vector v = (Vector(2) << 1, -1).finished() / std::sqrt(2.0);
    CHECK((t * v - 0.5 * v).norm() < 1e-12);
    CHECK((t * Vector::Ones(2)).norm() < 1e-12);

    Rng rng(42);
    for (int trial = 0; trial < 20; ++trial) {
        const Index n = bwtest::uniform_index(rng, 2, 8);
        const Matrix a = laplacian(bwtest::random_connected_weights(n, rng));
        const Matrix b = laplacian(bwtest::random_connected_weights(n, rng));
        const Matrix tm = transport_map(a, b);
        CHECK(linalg::is_symmetric(tm, 1e-10));
        CHECK(rel_frobenius(tm * linalg::psd_pinv(a) * tm, linalg::psd_pinv(b)) < 1e-6);
    }
}

TEST_CASE("transport_map: self transport is the range projector") {
    const Matrix l = laplacian(bwtest::path_weights(4));
    const Matrix projector = Matrix::Identity(4, 4) - Matrix::Constant(4, 4, 0.25);
    CHECK(rel_frobenius(transport_map(l, l), projector) < 1e-10);
}

TEST_CASE("bw_interpolate: commuting Laplacians follow the closed form") {
    Rng rng(43);
    for (int trial = 0; trial < 20; ++trial) {
        const Index n = bwtest::uniform_index(rng, 2, 8);
        const Matrix u = constant_first_basis(n, rng);
        Vector e0 = Vector::Zero(n);
        Vector e1 = Vector::Zero(n);
        for (Index i = 1; i < n; ++i) {
            e0[i] = bwtest::uniform(rng, 0.2, 5.0);
            e1[i] = bwtest::uniform(rng, 0.2, 5.0);
        }
        const Matrix l0 = linalg::symmetrize(u * e0.asDiagonal() * u.transpose());
        const Matrix l1 = linalg::symmetrize(u * e1.asDiagonal() * u.transpose());
        const GraphMRF a{Matrix::Zero(n, 0), l0, 0.0, 1.0};
        const GraphMRF b{Matrix::Zero(n, 0), l1, 0.0, 1.0};
        const double t = bwtest::uniform(rng, 0.0, 1.0);
        const Matrix mix = (1.0 - t) * linalg::psd_power(l0, -0.5) + t * linalg::psd_power(l1, -0.5);
        const Matrix expected = mix * mix;
        CHECK(rel_frobenius(BwGeodesic(a, b).covariance_at(t), expected) < 1e-7);
    }
}

TEST_CASE("bw_interpolate: constant-speed cost additivity") {
    Rng rng(44);
    for (int trial = 0; trial < 15; ++trial) {
        const Index n = bwtest::uniform_index(rng, 2, 8);
        const GraphMRF a = GraphMRF::from_graph(bwtest::random_connected_graph(n, 1, rng));
        const GraphMRF b = GraphMRF::from_graph(bwtest::random_connected_graph(n, 1, rng));
        const double d = graph_bw_distance(a, b).covariance_term;
        const double t = bwtest::uniform(rng, 0.05, 0.95);
        const PathPoint p = bw_interpolate(a, b, t);
        const GraphMRF mid{p.x, p.l, 0.0, 1.0};
        CHECK(graph_bw_distance(a, mid).covariance_term == doctest::Approx(t * t * d).epsilon(1e-5));
        CHECK(graph_bw_distance(mid, b).covariance_term == doctest::Approx((1 - t) * (1 - t) * d).epsilon(1e-5));
    }
}

TEST_CASE("baseline_interpolate: linear, harmonic and geometric") {
    const Index n = 4;
    const GraphMRF empty{Matrix::Zero(n, 1), Matrix::Zero(n, n), 0.0, 1.0};
    Matrix full = Matrix::Ones(n, n) - Matrix::Identity(n, n);
    const GraphMRF complete{Matrix::Ones(n, 1), laplacian(full), 0.0, 1.0};
    const PathPoint mid = baseline_interpolate(empty, complete, 0.5, {SchemeKind::linear, 1e-6});
    CHECK((mid.w - 0.5 * full).norm() < 1e-12);
    CHECK((mid.x - 0.5 * Matrix::Ones(n, 1)).norm() == 0.0);

    Matrix one(1, 1);
    one << 1.0;
    Matrix four(1, 1);
    four << 4.0;
    CHECK(harmonic_mean(one, four, 0.5, 1e-6)(0, 0) == doctest::Approx(1.6).epsilon(1e-12));
    CHECK(geometric_mean(one, four, 0.5, 1e-6)(0, 0) == doctest::Approx(2.0).epsilon(1e-12));

    Rng rng(45);
    const GraphMRF a = GraphMRF::from_graph(bwtest::random_connected_graph(5, 2, rng));
    const GraphMRF b = GraphMRF::from_graph(bwtest::random_connected_graph(5, 2, rng));
    const Matrix w0 = adjacency_from_laplacian(a.laplacian);
    for (SchemeKind kind : {SchemeKind::geometric, SchemeKind::harmonic}) {
        const PathPoint p = baseline_interpolate(a, b, 0.0, {kind, 1e-6});
        Matrix floored = spectral_floor(w0, 1e-6);
        floored.diagonal().setZero();
        CHECK((p.w - floored).norm() < 1e-8);
    }
}

TEST_CASE("interpolate: features are linear in every scheme") {
    Rng rng(46);
    const GraphMRF a = GraphMRF::from_graph(bwtest::random_connected_graph(5, 3, rng));
    const GraphMRF b = GraphMRF::from_graph(bwtest::random_connected_graph(5, 3, rng));
    for (SchemeKind kind : {SchemeKind::bw, SchemeKind::linear, SchemeKind::geometric, SchemeKind::harmonic}) {
        const double t = 0.3;
        const PathPoint p = interpolate(a, b, t, {kind, 1e-6});
        CHECK((p.x - ((1.0 - t) * a.mean + t * b.mean)).norm() == 0.0);
    }
}

TEST_CASE("path_sweep: endpoints, midpoint and monotone P2 weights") {
    const GraphMRF a = p2(1.0);
    const GraphMRF b = p2(4.0);
    const auto two = path_sweep(a, b, {SchemeKind::linear, 1e-6}, 2);
    REQUIRE(two.size() == 2);
    CHECK(two[0].w(0, 1) == doctest::Approx(1.0));
    CHECK(two[1].w(0, 1) == doctest::Approx(4.0));
    const auto three = path_sweep(a, b, {SchemeKind::linear, 1e-6}, 3);
    CHECK(three[1].w(0, 1) == baseline_interpolate(a, b, 0.5, {SchemeKind::linear, 1e-6}).w(0, 1));

    const auto eleven = path_sweep(a, b, {}, 11);
    for (std::size_t i = 0; i < eleven.size(); ++i) {
        CHECK(eleven[i].w(0, 1) == doctest::Approx(p2_weight(eleven[i].t)).epsilon(1e-10));
        if (i > 0) CHECK(eleven[i].w(0, 1) > eleven[i - 1].w(0, 1));
    }
    CHECK(eleven.back().t == 1.0);
    CHECK_THROWS_AS(path_sweep(a, b, {}, 1), InputError);
}

TEST_CASE("path_sweep: parallel and serial agree exactly") {
    Rng rng(47);
    const GraphMRF a = GraphMRF::from_graph(bwtest::random_connected_graph(8, 2, rng));
    const GraphMRF b = GraphMRF::from_graph(bwtest::random_connected_graph(8, 2, rng));
    const auto par = path_sweep(a, b, {}, 17);
    const auto ser = serial::path_sweep(a, b, {}, 17);
    REQUIRE(par.size() == ser.size());
    for (std::size_t i = 0; i < par.size(); ++i) {
        CHECK(par[i].t == ser[i].t);
        CHECK(par[i].l == ser[i].l);
        CHECK(par[i].x == ser[i].x);
    }
}

TEST_CASE("parse_scheme round trip") {
    for (SchemeKind kind : {SchemeKind::bw, SchemeKind::linear, SchemeKind::geometric, SchemeKind::harmonic})
        CHECK(parse_scheme(to_string(kind)) == kind);
    CHECK_THROWS_AS(parse_scheme("cubic"), InputError);
}
