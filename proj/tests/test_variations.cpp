#include "curvevar/calculus.hpp"
#include "curvevar/error.hpp"
#include "curvevar/fields.hpp"
#include "curvevar/variations.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace curvevar;
using std::numbers::pi;

namespace {

SurfaceSample small(const std::string& name, const ParamMap& params = {}, int nu = 64, int nv = 32)
{
    return sample_builtin(name, params, default_domain(name, nu, nv, params), default_space_form(name));
}

double sup(const ScalarField& f) { return f.max_abs(); }

} // namespace

TEST_CASE("functional values on round spheres")
{
    const auto s = small("sphere", {{"r", 1.5}});
    CHECK(functional_value(s, density::willmore()) == doctest::Approx(4 * pi).epsilon(1e-12));
    CHECK(functional_value(s, density::area()) == doctest::Approx(4 * pi * 2.25).epsilon(1e-12));
    CHECK(functional_value(s, density::pwillmore(3.0)) == doctest::Approx(4 * pi * std::pow(1.5, -1.0)).epsilon(1e-12));
    CHECK(functional_value(s, density::pwillmore(2.5)) == doctest::Approx(4 * pi * std::pow(1.5, -0.5)).epsilon(1e-12));
    CHECK(functional_value(s, density::gauss()) == doctest::Approx(4 * pi).epsilon(1e-12));
    CHECK(functional_value(s, density::ksquared()) == doctest::Approx(4 * pi / 2.25).epsilon(1e-12));
    CHECK(functional_value(s, density::bending()) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("Gauss-Bonnet on the torus")
{
    const auto t = small("torus");
    CHECK(std::abs(functional_value(t, density::gauss())) < 1e-10);
    CHECK(functional_value(t, density::willmore()) == doctest::Approx(pi * pi * 4 / std::sqrt(3.0)).epsilon(1e-10));
}

TEST_CASE("density guard reports the offending node")
{
    const auto s = small("sphere").flipped();
    CHECK_THROWS_WITH_AS(functional_value(s, density::pwillmore(2.5)), doctest::Contains("node"), NumericalError);
    CHECK_NOTHROW(functional_value(s, density::pwillmore(3.0)));
    CHECK_THROWS_AS(density::from_name("nope", {}), ValidationError);
    CHECK(density::from_name("helfrich", {{"kc", 2.0}, {"c0", 0.5}})(1.0, 0.0) == doctest::Approx(2 * 2.5 * 2.5));
}

TEST_CASE("first variation and Euler-Lagrange expression")
{
    const auto s = small("sphere");
    const auto one = constant_field(s, 1.0);
    // d/dt ∫ H^3 dS for the shrinking sphere of radius 1 - t is 4π.
    CHECK(first_variation(s, density::pwillmore(3.0), one) == doctest::Approx(4 * pi).epsilon(1e-10));
    CHECK(std::abs(first_variation(s, density::willmore(), one)) < 1e-10);
    CHECK(first_variation(s, density::area(), one) == doctest::Approx(-8 * pi).epsilon(1e-10));

    const auto el = el_residual(s, density::pwillmore(3.0));
    for (int n = 0; n < s.size(); n += 97) CHECK(el[n] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(sup(el_residual(s, density::willmore())) < 1e-9);

    const auto t = small("torus");
    const auto u = random_field(t, 7);
    for (const auto& E : {density::willmore(), density::ksquared(), density::helfrich(1.0, 0.3, 0.5)}) {
        const auto elt = el_residual(t, E);
        Eigen::VectorXd prod = elt.values().cwiseProduct(u.values());
        CHECK(first_variation(t, E, u) == doctest::Approx(integrate(prod, t)).epsilon(1e-8));
    }
}

TEST_CASE("catenoid residuals")
{
    const auto c = small("catenoid");
    const auto s3 = el_scale(c, density::pwillmore(3.0));
    CHECK(sup(el_residual(c, density::pwillmore(3.0))) <= 1e-10 * std::max(1.0, sup(s3)));
    const auto el1 = el_residual(c, density::pwillmore(1.0));
    for (int n = 0; n < c.size(); n += 53) CHECK(el1[n] == doctest::Approx(-c.geometry(n).scalars.K).epsilon(1e-10));
    CHECK(sup(el_residual(c, density::willmore())) < 1e-10);
}

TEST_CASE("Willmore second variation on the unit sphere")
{
    const auto s = small("sphere");
    const auto E = density::willmore();
    const auto r1 = second_variation(s, E, harmonic_field(s, 1, 0));
    CHECK(r1.critical);
    CHECK(r1.validity == "critical");
    CHECK(std::abs(r1.value) < 1e-10);
    const auto r2 = second_variation(s, E, harmonic_field(s, 2, 0));
    CHECK(r2.value == doctest::Approx(48 * pi / 5).epsilon(1e-10));
    // Quadratic in u.
    const auto u = random_field(s, 3);
    const auto ru = second_variation(s, E, u), r3u = second_variation(s, E, 3.0 * u);
    CHECK(r3u.value == doctest::Approx(9 * ru.value).epsilon(1e-12));
}

TEST_CASE("criticality is enforced")
{
    const auto t = small("torus");
    const auto u = random_field(t, 1);
    CHECK_THROWS_AS(second_variation(t, density::willmore(), u), NumericalError);
    SecondVariationOptions o;
    o.force = true;
    const auto r = second_variation(t, density::willmore(), u, o);
    CHECK(!r.critical);
    CHECK(r.validity == "formula outside stated validity");

    const auto s = small("sphere");
    CHECK_THROWS_AS(second_variation(s, density::pwillmore(3.0), harmonic_field(s, 2, 0)), NumericalError);
    o = {};
    o.volume_constrained = true;
    const auto rv = second_variation(s, density::pwillmore(3.0), harmonic_field(s, 2, 0), o);
    CHECK(rv.critical);
    CHECK(rv.lambda == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("finite-difference oracle")
{
    const auto s = small("sphere");
    const auto u = random_field(s, 11);
    SUBCASE("first order, sphere p=3")
    {
        const auto rep = fd_variation_oracle(s, density::pwillmore(3.0), u, 1);
        CHECK(rep.rel_error < 1e-6);
        CHECK(rep.convergence_order > 1.9);
    }
    SUBCASE("first order, torus with K^2")
    {
        const auto t = small("torus");
        const auto rep = fd_variation_oracle(t, density::ksquared(), random_field(t, 5), 1);
        CHECK(rep.rel_error < 1e-6);
        CHECK(rep.convergence_order > 1.9);
    }
    SUBCASE("second order, Willmore sphere")
    {
        const auto rep = fd_variation_oracle(s, density::willmore(), u, 2);
        CHECK(rep.rel_error < 1e-4);
        CHECK(rep.lambda == 0.0);
    }
    SUBCASE("second order, K^2 density on the sphere")
    {
        // The sphere is critical for K^2 only up to a volume multiplier.
        OracleOptions o;
        o.compare_augmented = true;
        const auto rep = fd_variation_oracle(s, density::ksquared(), u, 2, o);
        CHECK(rep.lambda == doctest::Approx(2.0).epsilon(1e-10));
        CHECK(rep.rel_error < 1e-4);
    }
    SUBCASE("second order, catenoid p=3 with compact support")
    {
        const auto c = small("catenoid");
        const auto rep = fd_variation_oracle(c, density::pwillmore(3.0), random_field(c, 2), 2);
        CHECK(rep.rel_error < 1e-4);
    }
    SUBCASE("second order along any geodesic path")
    {
        const auto t = small("torus");
        OracleOptions o;
        o.second.force = true;
        const auto rep = fd_variation_oracle(t, density::helfrich(1.0, 0.4, 0.2), random_field(t, 9), 2, o);
        CHECK(rep.validity == "formula outside stated validity");
        CHECK(rep.rel_error < 1e-4);
    }
    SUBCASE("volume-constrained sphere p=3")
    {
        const auto rep = fd_variation_oracle(s, density::pwillmore(3.0), harmonic_field(s, 2, 0), 2);
        CHECK(rep.lambda == doctest::Approx(1.0).epsilon(1e-10));
        // FD of F - λV matches the augmented value, not the plain one.
        CHECK(std::abs(rep.oracle_value - rep.augmented_formula) < 1e-4 * std::abs(rep.oracle_value));
        CHECK(rep.augmented_formula / rep.formula_value == doctest::Approx(28.0 / 26.0).epsilon(1e-8));
    }
}

TEST_CASE("open patches need compact support")
{
    const auto c = small("catenoid");
    CHECK_THROWS_AS(first_variation(c, density::willmore(), constant_field(c, 1.0)), ValidationError);
    CHECK_THROWS_AS(enclosed_volume(c), ValidationError);
    const auto s = small("sphere", {{"r", 2.0}});
    CHECK(enclosed_volume(s) == doctest::Approx(-4 * pi * 8 / 3).epsilon(1e-12));
}

TEST_CASE("evolution of geometric quantities")
{
    const std::vector<std::string> names = {"sphere", "torus", "geodesic_sphere_S3", "clifford_torus_S3",
                                            "geodesic_sphere_H3"};
    for (const auto& name : names) {
        const auto s = small(name);
        const auto u = random_field(s, 17);
        const auto f = random_field(s, 23);
        for (EvolutionQuantity q : all_evolution_quantities()) {
            const auto rep = evolution_check(s, u, q, &f);
            INFO(name, " ", to_string(q), " rel ", rep.rel_error, " order ", rep.convergence_order);
            CHECK(rep.rel_error < 1e-5);
            CHECK(rep.convergence_order > 1.9);
        }
    }
    const auto s = small("sphere");
    CHECK_THROWS_AS(evolution_check(s, constant_field(s, 1.0), EvolutionQuantity::LaplacianF), ValidationError);
    CHECK_THROWS_AS(parse_evolution_quantity("H"), ValidationError);
    CHECK(parse_evolution_quantity("h_hess_f") == EvolutionQuantity::HHessF);
}
