#include "curvevar/curvature.hpp"
#include "curvevar/surface.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

using namespace curvevar;
using std::numbers::pi;

namespace {

NodeGeometry at(const SurfaceSample& s, double u, double v)
{
    return node_geometry(ImmersionJet{s.jet_map()(u, v, 4)}, s.space_form(), s.normal_sign());
}

} // namespace

TEST_CASE("unit sphere forms at the equator")
{
    const auto s = sample_builtin("sphere", {{"r", 1.0}});
    const auto g = at(s, 0.0, pi / 2);
    CHECK((g.forms.g - Eigen::Matrix2d::Identity()).norm() < 1e-14);
    CHECK((g.forms.h - Eigen::Matrix2d::Identity()).norm() < 1e-14);
    CHECK(g.scalars.H == doctest::Approx(1.0));
    // inward normal
    CHECK(g.forms.N[0] == doctest::Approx(-1.0));
}

TEST_CASE("torus outer equator")
{
    const auto s = sample_builtin("torus", {{"R", 2.0}, {"a", 1.0}});
    const auto g = at(s, 0.0, 0.0);
    CHECK(g.scalars.H == doctest::Approx(2.0 / 3.0).epsilon(1e-13));
    CHECK(g.scalars.K == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
    // brute-force eigen-decomposition of g^{-1} h
    const Eigen::Matrix2d S = g.forms.g_inv * g.forms.h;
    Eigen::EigenSolver<Eigen::Matrix2d> es(S);
    const double e0 = es.eigenvalues()[0].real(), e1 = es.eigenvalues()[1].real();
    CHECK(std::max(e0, e1) == doctest::Approx(g.scalars.kappa1));
    CHECK(std::min(e0, e1) == doctest::Approx(g.scalars.kappa2));
    CHECK(g.scalars.kappa1 == doctest::Approx(1.0));
    CHECK(g.scalars.kappa2 == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("Clifford torus is minimal and flat")
{
    const auto s = sample_builtin("clifford_torus_S3");
    double hmax = 0.0, kE = 0.0, k = 0.0;
    for (int n = 0; n < s.size(); ++n) {
        const auto& c = s.geometry(n).scalars;
        hmax = std::max(hmax, std::abs(c.H));
        kE = std::max(kE, std::abs(c.K_E + 1.0));
        k = std::max(k, std::abs(c.K));
    }
    CHECK(hmax < 1e-12);
    CHECK(kE < 1e-12);
    CHECK(k < 1e-12);
}

TEST_CASE("curvature scalars of catalog surfaces")
{
    SUBCASE("sphere r = 2")
    {
        const auto s = sample_builtin("sphere", {{"r", 2.0}});
        const auto& c = s.geometry(17).scalars;
        CHECK(c.H == doctest::Approx(0.5));
        CHECK(c.K == doctest::Approx(0.25));
        CHECK(c.h_norm_sq == doctest::Approx(0.5));
    }
    SUBCASE("catenoid")
    {
        const auto s = sample_builtin("catenoid");
        for (int n = 0; n < s.size(); n += 97) {
            const double sv = s.v_at_node(n);
            CHECK(std::abs(s.geometry(n).scalars.H) < 1e-13);
            CHECK(s.geometry(n).scalars.K == doctest::Approx(-1.0 / std::pow(std::cosh(sv), 4)).epsilon(1e-12));
        }
    }
    SUBCASE("geodesic sphere in S3")
    {
        const auto s = sample_builtin("geodesic_sphere_S3", {{"a", pi / 4}});
        const auto& c = s.geometry(5).scalars;
        CHECK(c.H == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(c.K_E == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(c.K == doctest::Approx(2.0).epsilon(1e-13));
    }
    SUBCASE("geodesic sphere in H3")
    {
        const auto s = sample_builtin("geodesic_sphere_H3", {{"a", 1.0}});
        const auto& c = s.geometry(5).scalars;
        CHECK(c.H == doctest::Approx(1.0 / std::tanh(1.0)).epsilon(1e-13));
        CHECK(c.K == doctest::Approx(1.0 / std::pow(std::sinh(1.0), 2)).epsilon(1e-12));
    }
}

TEST_CASE("form invariants on every catalog surface")
{
    for (const auto& name : catalog_names()) {
        CAPTURE(name);
        const auto s = sample_builtin(name, {}, default_domain(name, 32, 16), default_space_form(name));
        const double k0 = s.space_form().k0();
        for (int n = 0; n < s.size(); n += 7) {
            const auto& g = s.geometry(n);
            const auto& c = g.scalars;
            CHECK((g.forms.g * g.forms.g_inv - Eigen::Matrix2d::Identity()).norm() < 1e-10);
            const auto& sf = s.space_form();
            const AmbientVector ru = s.jet(n).partial(1, 0), rv = s.jet(n).partial(0, 1);
            CHECK(std::abs(sf.dot(g.forms.N, g.forms.N) - 1.0) < 1e-9);
            CHECK(std::abs(sf.dot(g.forms.N, ru)) < 1e-9);
            CHECK(std::abs(sf.dot(g.forms.N, rv)) < 1e-9);
            if (sf.model() != SpaceForm::Model::Euclidean) CHECK(std::abs(sf.dot(g.forms.N, g.position)) < 1e-9);
            CHECK(c.H == doctest::Approx(0.5 * (c.kappa1 + c.kappa2)).epsilon(1e-10));
            CHECK(std::abs(c.K_E - c.kappa1 * c.kappa2) < 1e-10 * std::max(1.0, std::abs(c.K_E)));
            CHECK(c.K == c.K_E + k0);
            CHECK(std::abs(c.h_norm_sq - (4 * c.H * c.H - 2 * c.K + 2 * k0)) < 1e-9);
            const double lhs = 8 * std::pow(c.H, 3);
            const double rhs = std::pow(c.kappa1, 3) + std::pow(c.kappa2, 3) + 6 * c.H * (c.K - k0);
            CHECK(std::abs(lhs - rhs) < 1e-9 * std::max(1.0, std::abs(lhs)));
        }
    }
}

TEST_CASE("orientation flip")
{
    const auto s = sample_builtin("torus");
    const auto f = s.flipped();
    CHECK(f.orientation() == Orientation::Flip);
    for (int n = 0; n < s.size(); n += 31) {
        CHECK(f.geometry(n).forms.h == -s.geometry(n).forms.h);
        CHECK(f.geometry(n).scalars.H == -s.geometry(n).scalars.H);
        CHECK(f.geometry(n).scalars.K == s.geometry(n).scalars.K);
        CHECK(f.geometry(n).scalars.K_E == s.geometry(n).scalars.K_E);
        CHECK(f.geometry(n).scalars.h_norm_sq == s.geometry(n).scalars.h_norm_sq);
    }
}

TEST_CASE("Gauss and Codazzi residuals")
{
    for (const auto& name : catalog_names()) {
        CAPTURE(name);
        const auto s = sample_builtin(name, {}, default_domain(name, 32, 16), default_space_form(name));
        CHECK(codazzi_residual(s).max_abs() < 1e-7);
        CHECK(intrinsic_curvature_defect(s).max_abs() < 1e-6);
    }
    // dropping k0 from the structure equations must be detected
    const auto c = sample_builtin("clifford_torus_S3");
    CHECK(codazzi_residual(c, false).max_abs() >= 1e-2);
}

TEST_CASE("degenerate metric is reported")
{
    PointJet p;
    for (auto& t : p) t = Taylor::constant(1.0, 4);
    CHECK_THROWS_WITH(fundamental_forms(ImmersionJet{p}, SpaceForm::euclidean(), 1),
                      doctest::Contains("degenerate metric"));
}
