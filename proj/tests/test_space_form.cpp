#include "curvevar/error.hpp"
#include "curvevar/space_form.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace curvevar;

TEST_CASE("ambient inner products")
{
    const AmbientVector e0(1, 0, 0, 0), e1(0, 1, 0, 0), e3(0, 0, 0, 1);
    CHECK(SpaceForm::euclidean().ambient_inner(AmbientVector::Zero(), e0, e0) == 1.0);
    CHECK(SpaceForm::sphere(1.0).ambient_inner(e0, e1, e1) == 1.0);
    CHECK(SpaceForm::hyperbolic(1.0).ambient_inner(e3, e0, e0) == 1.0);
    // brute-force quadratic form diag(1,1,1,-1)
    const AmbientVector v(0.3, -0.2, 0.5, 0.0);
    const AmbientVector w(0.1, 0.4, 0.0, 0.0);
    Eigen::Matrix4d eta = Eigen::Vector4d(1, 1, 1, -1).asDiagonal();
    CHECK(SpaceForm::hyperbolic(1.0).ambient_inner(e3, v, w) == doctest::Approx(v.dot(eta * w)));
    CHECK_THROWS_AS(SpaceForm::sphere(1.0).ambient_inner(e0, e0, e1), ValidationError);
}

TEST_CASE("curvature and model consistency")
{
    CHECK(SpaceForm::sphere(2.0).k0() == doctest::Approx(0.25));
    CHECK(SpaceForm::hyperbolic(2.0).k0() == doctest::Approx(-0.25));
    CHECK(SpaceForm::from_curvature(0.0).model() == SpaceForm::Model::Euclidean);
    CHECK(SpaceForm::from_curvature(1.0).model() == SpaceForm::Model::Sphere);
    CHECK(SpaceForm::from_curvature(-4.0).radius() == doctest::Approx(0.5));
    CHECK(SpaceForm::from_curvature(0.25, 2.0).radius() == 2.0);
    CHECK_THROWS_AS(SpaceForm::from_curvature(1.0, 2.0), ValidationError);
    CHECK_THROWS_AS(SpaceForm::sphere(-1.0), ValidationError);
}

TEST_CASE("geodesic steps")
{
    const auto e = SpaceForm::euclidean().geodesic_step(AmbientVector::Zero(), AmbientVector(0, 0, 1, 0), 2.0);
    CHECK((e - AmbientVector(0, 0, 2, 0)).norm() < 1e-15);
    const auto s = SpaceForm::sphere(1.0).geodesic_step(AmbientVector(1, 0, 0, 0), AmbientVector(0, 1, 0, 0), M_PI / 2);
    CHECK((s - AmbientVector(0, 1, 0, 0)).norm() < 1e-15);
    const auto h = SpaceForm::hyperbolic(1.0).geodesic_step(AmbientVector(0, 0, 0, 1), AmbientVector(1, 0, 0, 0), 1.0);
    CHECK((h - AmbientVector(std::sinh(1.0), 0, 0, std::cosh(1.0))).norm() < 1e-14);
    CHECK_THROWS_AS(SpaceForm::sphere(1.0).geodesic_step(AmbientVector(1, 0, 0, 0), AmbientVector(0, 2, 0, 0), 1.0),
                    ValidationError);
}

TEST_CASE("hyperbolic geodesic agrees with integrated geodesic ODE")
{
    // x'' = <x', x'> x / rho^2 on the hyperboloid; RK4 in the ambient coordinates.
    const double rho = 1.0;
    const SpaceForm sf = SpaceForm::hyperbolic(rho);
    AmbientVector x(0, 0, 0, 1), v(1, 0, 0, 0);
    const int steps = 2000;
    const double dt = 1.0 / steps;
    auto acc = [&](const AmbientVector& p, const AmbientVector& q) { return sf.dot(q, q) / (rho * rho) * p; };
    for (int i = 0; i < steps; ++i) {
        const AmbientVector k1x = v, k1v = acc(x, v);
        const AmbientVector k2x = v + 0.5 * dt * k1v, k2v = acc(x + 0.5 * dt * k1x, v + 0.5 * dt * k1v);
        const AmbientVector k3x = v + 0.5 * dt * k2v, k3v = acc(x + 0.5 * dt * k2x, v + 0.5 * dt * k2v);
        const AmbientVector k4x = v + dt * k3v, k4v = acc(x + dt * k3x, v + dt * k3v);
        x += dt / 6 * (k1x + 2 * k2x + 2 * k3x + k4x);
        v += dt / 6 * (k1v + 2 * k2v + 2 * k3v + k4v);
    }
    const auto closed = sf.geodesic_step(AmbientVector(0, 0, 0, 1), AmbientVector(1, 0, 0, 0), 1.0);
    CHECK((closed - x).norm() < 1e-10);
}

namespace {

AmbientVector random_point(const SpaceForm& sf, std::mt19937_64& rng)
{
    std::normal_distribution<double> g;
    if (sf.model() == SpaceForm::Model::Euclidean) return {g(rng), g(rng), g(rng), 0.0};
    AmbientVector y(g(rng), g(rng), g(rng), 0.0);
    const double rho = sf.radius();
    if (sf.model() == SpaceForm::Model::Sphere) {
        y[3] = g(rng);
        return rho * y / y.norm();
    }
    y[3] = std::sqrt(rho * rho + y.head<3>().squaredNorm());
    return y;
}

AmbientVector random_unit_tangent(const SpaceForm& sf, const AmbientVector& p, std::mt19937_64& rng)
{
    std::normal_distribution<double> g;
    AmbientVector v(g(rng), g(rng), g(rng), sf.ambient_dim() == 4 ? g(rng) : 0.0);
    if (sf.model() != SpaceForm::Model::Euclidean) v -= sf.dot(v, p) / sf.dot(p, p) * p;
    return v / std::sqrt(sf.dot(v, v));
}

} // namespace

TEST_CASE("quadric preservation over random steps")
{
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> len(-3.0, 3.0);
    for (const SpaceForm& sf : {SpaceForm::sphere(1.5), SpaceForm::hyperbolic(0.7)}) {
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const AmbientVector p = random_point(sf, rng);
            const AmbientVector n = random_unit_tangent(sf, p, rng);
            worst = std::max(worst, sf.quadric_defect(sf.geodesic_step(p, n, len(rng))));
        }
        CHECK(worst < 1e-10);
    }
}

TEST_CASE("geodesic additivity on the sphere")
{
    const double rho = 2.0;
    const SpaceForm sf = SpaceForm::sphere(rho);
    std::mt19937_64 rng(3);
    for (int i = 0; i < 100; ++i) {
        const AmbientVector p = random_point(sf, rng);
        const AmbientVector n = random_unit_tangent(sf, p, rng);
        const double s = 0.7, t = -1.3;
        const AmbientVector q = sf.geodesic_step(p, n, s);
        // transported velocity of the great circle
        const AmbientVector nq = -std::sin(s / rho) * p / rho + std::cos(s / rho) * n;
        CHECK((sf.geodesic_step(q, nq, t) - sf.geodesic_step(p, n, s + t)).norm() < 1e-9);
    }
}

TEST_CASE("large-radius spheres degenerate to Euclidean steps at second order")
{
    double prev = 0.0;
    for (double rho : {10.0, 100.0, 1000.0}) {
        const SpaceForm sf = SpaceForm::sphere(rho);
        const AmbientVector p(0, 0, 0, rho), n(0.6, 0.8, 0, 0);
        const AmbientVector q = sf.geodesic_step(p, n, 1.0);
        const double err = (q.head<3>() - n.head<3>()).norm();
        if (prev > 0.0) CHECK(std::log10(prev / err) == doctest::Approx(2.0).epsilon(0.01));
        prev = err;
    }
}

TEST_CASE("jet geodesic step matches the pointwise step")
{
    const SpaceForm sf = SpaceForm::sphere(1.0);
    PointJet p, n;
    p = {Taylor::constant(1, 3), Taylor::constant(0, 3), Taylor::constant(0, 3), Taylor::constant(0, 3)};
    n = {Taylor::constant(0, 3), Taylor::constant(1, 3), Taylor::constant(0, 3), Taylor::constant(0, 3)};
    const Taylor s = Taylor::variable_u(0.4, 3);
    const PointJet q = sf.geodesic_step(p, n, s);
    CHECK(q[0].value() == doctest::Approx(std::cos(0.4)));
    CHECK(q[1].partial(1, 0) == doctest::Approx(std::cos(0.4)));
}
