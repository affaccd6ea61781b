#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ricci_pinch/dupin_tube.hpp"
#include "ricci_pinch/pinch_verdict.hpp"

using namespace rpinch;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<TubePatch> builtin_patches() {
    return {great_circle_s3(kPi / 4), great_circle_s3(0.6, 0.3), small_circle(0.5, 0.3), sphere_base(2, kPi / 4),
            sphere_base(3, kPi / 3, 0.2)};
}

VectorXd gaussian(int d, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    VectorXd v(d);
    for (int i = 0; i < d; ++i) {
        v(i) = g(rng);
    }
    return v;
}

TubePoint random_point(const TubePatch& P, std::mt19937_64& rng) {
    TubePoint q{P.sample_point + 0.05 * gaussian(P.base_dim, rng), gaussian(P.normal_rank(), rng)};
    q.w.normalize();
    return q;
}

VectorXd fiber_direction(const VectorXd& w, std::mt19937_64& rng) {
    VectorXd v = gaussian(static_cast<int>(w.size()), rng);
    v -= v.dot(w) * w;
    return v.normalized();
}

}  // namespace

TEST_CASE("tube point and normal lie on the sphere") {
    std::mt19937_64 rng(31);
    for (const TubePatch& P : builtin_patches()) {
        double worst = 0.0;
        for (int i = 0; i < 2000; ++i) {
            const TubePoint q = random_point(P, rng);
            const VectorXd psi = tube_point(P, q);
            const VectorXd N = tube_gauss(P, q);
            worst = std::max({worst, std::abs(psi.norm() - 1.0), std::abs(N.norm() - 1.0), std::abs(psi.dot(N))});
        }
        INFO(P.name);
        CHECK(worst < 1e-10);
    }
}

TEST_CASE("constant radius tubes") {
    const double tau = 0.7;
    const TubePatch P = sphere_base(2, tau);
    std::mt19937_64 rng(32);
    const TubePoint q = random_point(P, rng);
    const VectorXd g = P.g(q.x);
    const VectorXd w = P.normal_frame(q.x) * q.w;
    CHECK((tube_point(P, q) - (std::cos(tau) * g - std::sin(tau) * w)).norm() < 1e-14);
    CHECK((tube_gauss(P, q) - (std::sin(tau) * g + std::cos(tau) * w)).norm() < 1e-14);

    const TubePatch thin = great_circle_s3(1e-9);
    const TubePoint t{VectorXd::Constant(1, 0.3), VectorXd::Unit(2, 0)};
    CHECK((tube_point(thin, t) - thin.g(t.x)).norm() < 1e-8);
    const TubePatch wide = great_circle_s3(kPi / 2 - 1e-9);
    CHECK((tube_gauss(wide, t) - wide.g(t.x)).norm() < 1e-8);
}

TEST_CASE("great circle tube is the Clifford torus") {
    const TubePatch P = great_circle_s3(kPi / 4);
    std::mt19937_64 rng(33);
    for (int i = 0; i < 200; ++i) {
        TubePoint q{VectorXd::Constant(1, 6.0 * (rng() % 1000) / 1000.0), gaussian(2, rng)};
        q.w.normalize();
        const VectorXd psi = tube_point(P, q);
        const double z1 = std::hypot(psi(0), psi(1));
        const double z2 = std::hypot(psi(2), psi(3));
        CHECK(std::abs(z1 - std::sqrt(0.5)) < 1e-9);
        CHECK(std::abs(z2 - std::sqrt(0.5)) < 1e-9);
    }
    const TubePoint q0{VectorXd::Constant(1, 0.4), VectorXd::Unit(2, 1)};
    CHECK((p_endomorphism(P, q0) - std::sqrt(0.5) * MatrixXd::Identity(1, 1)).norm() < 1e-10);
    const TubePatch flat = sphere_base(3, 0.9);
    const TubePoint q1{flat.sample_point, VectorXd::Unit(4, 2)};
    CHECK((p_endomorphism(flat, q1) - std::cos(0.9) * MatrixXd::Identity(2, 2)).norm() < 1e-8);
}

TEST_CASE("Gauss map is orthogonal to the tube") {
    std::mt19937_64 rng(34);
    for (const TubePatch& P : builtin_patches()) {
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const TubePoint q = random_point(P, rng);
            worst = std::max(worst, gauss_orthogonality_residual(P, q, gaussian(P.tube_dim(), rng)));
        }
        INFO(P.name);
        CHECK(worst < 1e-6);
    }
}

TEST_CASE("differential of the tube map") {
    std::mt19937_64 rng(35);
    for (const TubePatch& P : builtin_patches()) {
        double worst = 0.0;
        for (int i = 0; i < 200; ++i) {
            const TubePoint q = random_point(P, rng);
            const TubeTangent V{gaussian(P.base_dim, rng), fiber_direction(q.w, rng)};
            const VectorXd exact = dpsi_formula(P, q, V);
            worst = std::max(worst, (exact - dpsi_fd(P, q, V)).norm() / (1e-12 + exact.norm()));
        }
        INFO(P.name);
        CHECK(worst < 1e-5);
    }
}

TEST_CASE("vertical directions are principal with curvature cot tau") {
    std::mt19937_64 rng(36);
    for (const TubePatch& P : builtin_patches()) {
        double worst = 0.0;
        for (int i = 0; i < 200; ++i) {
            const TubePoint q = random_point(P, rng);
            const TubeTangent V{VectorXd::Zero(P.base_dim), fiber_direction(q.w, rng)};
            const double scale = dpsi_fd(P, q, V).norm();
            worst = std::max(worst, vertical_shape_check(P, q, V) / scale);
        }
        INFO(P.name);
        CHECK(worst < 1e-6);
    }

    const TubePatch P = sphere_base(3, kPi / 3);
    const TubePoint q{P.sample_point, VectorXd::Unit(4, 0)};
    const TubeTangent V{VectorXd::Zero(2), VectorXd::Unit(4, 1)};
    CHECK(vertical_shape_check(P, q, V) < 1e-6);
    const double ratio = dgauss_fd(P, q, V).norm() / dpsi_fd(P, q, V).norm();
    CHECK(std::abs(ratio - 1.0 / std::sqrt(3.0)) < 1e-6);

    const TubeTangent zero{VectorXd::Zero(2), VectorXd::Zero(4)};
    CHECK(vertical_shape_check(P, q, zero) == 0.0);
    const TubeTangent mixed{VectorXd::Unit(2, 0), VectorXd::Unit(4, 1)};
    CHECK_THROWS_AS(vertical_shape_check(P, q, mixed), std::invalid_argument);
}

TEST_CASE("regularity fails exactly where P is singular") {
    const double a = 0.5;
    const double rho = std::asin(a);
    const TubePatch at_focal = small_circle(a, rho);
    const TubePoint q{VectorXd::Constant(1, 0.2), VectorXd::Unit(2, 0)};
    CHECK(std::abs(p_endomorphism(at_focal, q).determinant()) < 1e-10);
    CHECK(jacobian_sigma_min(at_focal, q) < 1e-4);
    CHECK(jacobian_sigma_min(small_circle(a, 0.3), q) > 1e-1);

    const RegularityCrossing rc = regularity_crossing([a](double t) { return small_circle(a, t); }, q, 0.3, 0.8);
    CHECK(std::abs(rc.det_zero - rho) < 1e-8);
    CHECK(std::abs(rc.det_zero - rc.sigma_min_zero) < 1e-3);
    CHECK(rc.sigma_min_at_zero < 1e-4);
    CHECK(rc.sigma_min_generic > 1e-1);
}

TEST_CASE("focal map") {
    const SubmanifoldPatch torus = clifford_torus_patch(4, 2, std::sqrt(0.5));
    CHECK(std::abs(focal_point(torus, torus.sample_point).norm() - 1.0) < 1e-10);
    Eigen::JacobiSVD<MatrixXd> svd(focal_jacobian(torus, torus.sample_point));
    const VectorXd sv = svd.singularValues();
    CHECK(sv(0) > 1e-2);
    CHECK(sv(1) > 1e-2);
    CHECK(sv(2) < 1e-6);
    CHECK(sv(3) < 1e-6);
    const MatrixXd along = focal_jacobian(torus, torus.sample_point) * torus.dupin_directions(torus.sample_point);
    CHECK(along.norm() < 1e-6);

    const SubmanifoldPatch sphere = umbilical_sphere_patch(3, 0.7);
    CHECK(focal_jacobian(sphere, sphere.sample_point).norm() < 1e-6);

    std::mt19937_64 rng(37);
    for (const TubePatch& P : builtin_patches()) {
        const TubePoint q = random_point(P, rng);
        const SubmanifoldPatch tube = tube_submanifold(P, q);
        const TubeChart chart = tube_chart(P, q);
        for (int i = 0; i < 20; ++i) {
            const VectorXd v = 0.01 * gaussian(tube.dim, rng);
            INFO(P.name);
            CHECK((focal_point(tube, v) - P.g(chart.at(v).x)).norm() < 1e-8);
        }
    }
}

TEST_CASE("tube shape operator carries the Dupin normal") {
    for (const double tau : {kPi / 4, kPi / 3, 0.5}) {
        const TubePatch P = sphere_base(2, tau);
        const TubePoint q{P.sample_point, VectorXd::Unit(3, 0)};
        const ShapeOperatorSet S = tube_shape_operator(P, q);
        const double cot = 1.0 / std::tan(tau);
        const int plus = static_cast<int>(dupin_subspace(S, VectorXd::Constant(1, cot)).cols());
        const int minus = static_cast<int>(dupin_subspace(S, VectorXd::Constant(1, -cot)).cols());
        CHECK(std::max(plus, minus) == 2);
        CHECK(generic_check(S, VectorXd::Constant(1, plus > 0 ? cot : -cot)));
    }
    const TubePatch P = sphere_base(2, kPi / 4);
    const TubePoint q{P.sample_point, VectorXd::Unit(3, 0)};
    const ShapeOperatorSet S = tube_shape_operator(P, q);
    const PinchVerdict v = check_star(S, 2);
    CHECK(v.holds);
    CHECK_FALSE(v.strict);
    const auto d = dupin_detect(S, 2);
    REQUIRE(d.has_value());
    CHECK(d->norm_eta == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(d->multiplicity == 2);
}

TEST_CASE("generic condition") {
    const ShapeOperatorSet one({MatrixXd(VectorXd::LinSpaced(4, 2.0, -1.0).asDiagonal())});
    CHECK(generic_check(one, VectorXd::Constant(1, 2.0)));

    Eigen::Vector3d a1(1, 1, 0);
    Eigen::Vector3d a2(0, 0, 1);
    const ShapeOperatorSet yes({MatrixXd(a1.asDiagonal()), MatrixXd(a2.asDiagonal())});
    CHECK(generic_check(yes, Eigen::Vector2d(1, 0)));

    Eigen::Vector3d b1(1, 1, 1);
    const ShapeOperatorSet no({MatrixXd(b1.asDiagonal()), MatrixXd(a2.asDiagonal())});
    CHECK_FALSE(generic_check(no, Eigen::Vector2d(1, 0)));
    CHECK_THROWS_AS(generic_check(no, Eigen::Vector2d(0, 0)), std::invalid_argument);
}

TEST_CASE("patch construction and validation") {
    CHECK_THROWS_AS(base_geometry(great_circle_s3(0.6, 1.5), VectorXd::Constant(1, 0.0)), std::invalid_argument);
    CHECK_THROWS_AS(base_geometry(great_circle_s3(2.0), VectorXd::Constant(1, 0.0)), std::invalid_argument);

    const auto [name, params] = parse_patch_spec("small-circle(a=0.5,tau=0.3)");
    CHECK(name == "small-circle");
    CHECK(params.at("a") == 0.5);
    CHECK(params.at("tau") == 0.3);
    const TubePatch P = make_patch(name, params);
    CHECK(P.normal_rank() == 2);
    CHECK_THROWS_AS(make_patch("no-such-patch", {}), std::invalid_argument);
    CHECK_THROWS_AS(make_patch("small-circle", {{"b", 1.0}}), std::invalid_argument);
    CHECK(make_patch("sphere-base", {{"ell", 3.0}, {"tau", 0.5}}).tube_dim() == 5);
}
