#include "curvevar/calculus.hpp"
#include "curvevar/error.hpp"
#include "curvevar/fields.hpp"
#include "curvevar/surface.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <numbers>

using namespace curvevar;
using std::numbers::pi;

namespace {

double sup_diff(const ScalarField& a, const Eigen::VectorXd& b) { return (a.values() - b).cwiseAbs().maxCoeff(); }

ScalarField theta_field(const SurfaceSample& s, double (*fn)(double))
{
    Eigen::VectorXd v(s.size());
    for (int n = 0; n < s.size(); ++n) v[n] = fn(s.v_at_node(n));
    return ScalarField::from_values(s.domain(), v);
}

} // namespace

TEST_CASE("gradient")
{
    const auto s = sample_builtin("sphere");
    CHECK(gradient_norm_sq(constant_field(s, 3.0), s).max_abs() == 0.0);
    const auto f = harmonic_field(s, 1, 0); // cos θ
    Eigen::VectorXd expect(s.size());
    for (int n = 0; n < s.size(); ++n) expect[n] = std::pow(std::sin(s.v_at_node(n)), 2);
    CHECK(sup_diff(gradient_norm_sq(f, s), expect) < 1e-13);
    // grid-differentiated version of the same field
    const auto fg = theta_field(s, [](double t) { return std::cos(t); });
    CHECK(sup_diff(gradient_norm_sq(fg, s), expect) < 1e-11);

    const auto t = sample_builtin("torus");
    const auto grad = gradient(coordinate_field(t, 0), t);
    for (int n = 0; n < t.size(); n += 17) {
        const double ring = 2.0 + std::cos(t.v_at_node(n));
        CHECK(grad[n][0] == doctest::Approx(1.0 / (ring * ring)));
        CHECK(std::abs(grad[n][1]) < 1e-15);
    }
}

TEST_CASE("Hessian")
{
    const auto s = sample_builtin("sphere");
    for (const auto& H : hessian(constant_field(s, 2.0), s).values) CHECK(H.norm() == 0.0);
    const auto f = harmonic_field(s, 1, 0);
    const auto hs = hessian(f, s);
    for (int n = 0; n < s.size(); n += 7)
        CHECK((hs[n] + f[n] * s.geometry(n).forms.g).norm() < 1e-12);

    const auto flat = sample_builtin("graph", {{"a", 0.0}, {"b", 0.0}, {"c", 0.0}});
    const auto u = coordinate_field(flat, 0);
    const auto u2 = ScalarField::from_map(flat.domain(), [](double uu, double, int order) {
        const Taylor x = Taylor::variable_u(uu, order);
        return x * x;
    });
    (void)u;
    for (const auto& H : hessian(u2, flat).values) {
        CHECK(H(0, 0) == doctest::Approx(2.0));
        CHECK(std::abs(H(0, 1)) < 1e-14);
        CHECK(std::abs(H(1, 1)) < 1e-14);
    }
}

TEST_CASE("Laplace-Beltrami on sphere harmonics")
{
    const auto s = sample_builtin("sphere");
    const auto c = harmonic_field(s, 1, 0);
    CHECK(sup_diff(laplace_beltrami(c, s), -2.0 * c.values()) < 1e-12);
    CHECK(laplace_beltrami(constant_field(s, 1.0), s).max_abs() < 1e-14);
    const auto p2 = harmonic_field(s, 2, 0);
    CHECK(sup_diff(laplace_beltrami(p2, s), -6.0 * p2.values()) < 1e-12);
    // same from grid samples
    const auto p2g = ScalarField::from_values(s.domain(), p2.values());
    CHECK(sup_diff(laplace_beltrami(p2g, s), -6.0 * p2.values()) < 1e-7);
    for (int l = 0; l <= 6; ++l)
        for (int m = -l; m <= l; m += std::max(1, l)) {
            const auto y = ScalarField::from_values(s.domain(), harmonic_field(s, l, m).values());
            CHECK(sup_diff(laplace_beltrami(y, s), -l * (l + 1.0) * y.values()) < 1e-7 * (1 + l * (l + 1)));
        }
}

TEST_CASE("contractions")
{
    const auto s = sample_builtin("sphere");
    const auto h = second_fundamental_form(s), g = metric_tensor(s);
    CHECK(sup_diff(contract(h, g, s), Eigen::VectorXd::Constant(s.size(), 2.0)) < 1e-13);
    const auto f = harmonic_field(s, 1, 0);
    CHECK(sup_diff(contract(h, hessian(f, s), s), -2.0 * f.values()) < 1e-12);
    const auto t = sample_builtin("torus");
    const auto ht = second_fundamental_form(t);
    Eigen::VectorXd hn(t.size());
    for (int n = 0; n < t.size(); ++n) hn[n] = t.geometry(n).scalars.h_norm_sq;
    CHECK(sup_diff(contract(ht, ht, t), hn) < 1e-10);
    const auto a = hessian(random_field(t, 1), t);
    CHECK(sup_diff(contract(a, ht, t), contract(ht, a, t).values()) < 1e-14);
}

TEST_CASE("h squared")
{
    const auto s = sample_builtin("sphere");
    const auto h2 = h_squared(s);
    for (int n = 0; n < s.size(); n += 5) CHECK((h2[n] - s.geometry(n).forms.g).norm() < 1e-13);
    const auto s2 = sample_builtin("sphere", {{"r", 2.0}});
    const auto h22 = h_squared(s2);
    for (int n = 0; n < s2.size(); n += 5) CHECK((h22[n] - 0.25 * s2.geometry(n).forms.g).norm() < 1e-13);
    const auto c = sample_builtin("catenoid");
    const auto hc = h_squared(c);
    for (int n = 0; n < c.size(); n += 5) {
        const auto& geo = c.geometry(n);
        CHECK((hc[n] + geo.scalars.K * geo.forms.g).norm() < 1e-12);
        CHECK((geo.forms.g_inv.cwiseProduct(hc[n])).sum() == doctest::Approx(geo.scalars.h_norm_sq));
    }
}

TEST_CASE("surface quadrature")
{
    CHECK(integrate(constant_field(sample_builtin("sphere", {{"r", 2.0}}), 1.0), sample_builtin("sphere", {{"r", 2.0}})) ==
          doctest::Approx(16 * pi).epsilon(1e-13));
    const auto t = sample_builtin("torus");
    CHECK(integrate(constant_field(t, 1.0), t) == doctest::Approx(8 * pi * pi).epsilon(1e-13));
    const auto s = sample_builtin("sphere");
    Eigen::VectorXd H2(s.size());
    for (int n = 0; n < s.size(); ++n) H2[n] = std::pow(s.geometry(n).scalars.H, 2);
    CHECK(integrate(H2, s) == doctest::Approx(4 * pi).epsilon(1e-13));
    const auto c = sample_builtin("catenoid");
    CHECK_THROWS_AS(integrate(constant_field(c, 1.0), c), ValidationError);
    CHECK_NOTHROW(integrate(constant_field(c, 1.0), c, true));
}

TEST_CASE("divergence theorem and integration by parts")
{
    for (const std::string name : {"sphere", "torus", "geodesic_sphere_S3", "clifford_torus_S3"}) {
        CAPTURE(name);
        const auto s = sample_builtin(name);
        const auto f = random_field(s, 11), g = random_field(s, 12);
        const auto lf = laplace_beltrami(f, s);
        double abs_int = integrate(Eigen::VectorXd(lf.values().cwiseAbs()), s);
        CHECK(std::abs(integrate(lf, s)) <= 1e-8 * abs_int);
        const auto lg = laplace_beltrami(g, s);
        const double lhs = integrate(Eigen::VectorXd(f.values().cwiseProduct(lg.values())), s);
        const auto gf = gradient(f, s), gg = gradient(g, s);
        Eigen::VectorXd dot(s.size());
        for (int n = 0; n < s.size(); ++n) dot[n] = gf[n].dot(s.geometry(n).forms.g * gg[n]);
        const double rhs = -integrate(dot, s);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-6));
        const auto hs = hessian(f, s);
        for (int n = 0; n < s.size(); n += 13)
            CHECK(std::abs((s.geometry(n).forms.g_inv.cwiseProduct(hs[n])).sum() - lf[n]) < 1e-9);
    }
}

TEST_CASE("quadrature converges spectrally on smooth periodic integrands")
{
    double prev_err = -1.0;
    const double exact = [] {
        const auto t = sample_builtin("torus", {}, periodic_domain(256, 256), SpaceForm::euclidean());
        Eigen::VectorXd f(t.size());
        for (int n = 0; n < t.size(); ++n) f[n] = std::exp(std::sin(t.u_at_node(n)) * std::cos(t.v_at_node(n)));
        return integrate(f, t);
    }();
    for (int n : {8, 16, 32}) {
        const auto t = sample_builtin("torus", {}, periodic_domain(n, n), SpaceForm::euclidean());
        Eigen::VectorXd f(t.size());
        for (int k = 0; k < t.size(); ++k) f[k] = std::exp(std::sin(t.u_at_node(k)) * std::cos(t.v_at_node(k)));
        const double err = std::abs(integrate(f, t) - exact);
        if (prev_err > 1e-13) CHECK(prev_err / std::max(err, 1e-300) >= 10.0);
        prev_err = err;
    }
}

TEST_CASE("reductions are bitwise deterministic across thread counts")
{
    const auto s = sample_builtin("torus");
    const auto u = random_field(s, 9);
    setenv("CURVEVAR_THREADS", "1", 1);
    const double a = integrate(laplace_beltrami(u, s), s);
    setenv("CURVEVAR_THREADS", "4", 1);
    const double b = integrate(laplace_beltrami(u, s), s);
    unsetenv("CURVEVAR_THREADS");
    CHECK(a == b);
}

TEST_CASE("field CSV round trip")
{
    const auto s = sample_builtin("torus", {}, periodic_domain(8, 8), SpaceForm::euclidean());
    const auto u = random_field(s, 4);
    std::stringstream io;
    u.write_csv(io);
    const auto back = ScalarField::read_csv(s.domain(), io);
    CHECK((back.values() - u.values()).norm() == 0.0);
}
