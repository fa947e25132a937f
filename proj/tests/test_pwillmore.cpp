#include "curvevar/calculus.hpp"
#include "curvevar/error.hpp"
#include "curvevar/fields.hpp"
#include "curvevar/pwillmore.hpp"
#include "curvevar/variations.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace curvevar;
using std::numbers::pi;

namespace {

const SurfaceSample& unit_sphere()
{
    static const SurfaceSample s = stability_sphere(1.0);
    return s;
}

} // namespace

TEST_CASE("p-Willmore Euler-Lagrange residual")
{
    const auto& s = unit_sphere();
    const auto el3 = pwillmore_el_residual(s, 3.0, 0.0);
    CHECK(el3.values().minCoeff() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(el3.values().maxCoeff() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(pwillmore_el_residual(s, 2.0, 0.0).max_abs() < 1e-10);

    const auto s2 = stability_sphere(2.0, 64, 32);
    for (double p : {1.0, 2.5, 4.0}) {
        const auto el = pwillmore_el_residual(s2, p, 0.0);
        CHECK(el[5] == doctest::Approx((p - 2.0) / std::pow(2.0, p + 1.0)).epsilon(1e-9));
    }

    for (const std::string name : {"torus", "clifford_torus_S3", "geodesic_sphere_S3", "catenoid"}) {
        const auto t = sample_builtin(name, {}, default_domain(name, 64, 32), default_space_form(name));
        for (double p : {1.0, 2.0, 3.0}) {
            const auto a = pwillmore_el_residual(t, p, t.space_form().k0());
            const auto b = el_residual(t, density::pwillmore(p));
            CHECK((a.values() - b.values()).cwiseAbs().maxCoeff() <= 1e-8 * std::max(1.0, b.max_abs()));
        }
        if (name == "catenoid") CHECK(pwillmore_el_residual(t, 2.0, 0.0).max_abs() < 1e-10);
    }
    CHECK_THROWS_AS(pwillmore_el_residual(s, 3.0, 1.0), ValidationError);
    CHECK_THROWS_AS(pwillmore_el_residual(s.flipped(), 2.5, 0.0), NumericalError);
}

TEST_CASE("sphere index form")
{
    const auto& s = unit_sphere();
    const auto cos_t = harmonic_field(s, 1, 0);
    CHECK(sphere_index_form({3.0, 1.0}, s, cos_t) == doctest::Approx(-8 * pi / 3).epsilon(1e-10));
    CHECK(std::abs(sphere_index_form({2.0, 1.0}, s, cos_t)) < 1e-10);
    CHECK(sphere_index_form({3.0, 1.0}, s, harmonic_field(s, 2, 0)) == doctest::Approx(26 * 4 * pi / 5).epsilon(1e-10));
    CHECK(sphere_index_form({1.0, 1.0}, s, cos_t) == doctest::Approx(2 * 4 * pi / 3).epsilon(1e-10));

    CHECK_THROWS_AS(sphere_index_form({3.0, 1.0}, s, constant_field(s, 1.0)), ValidationError);
    CHECK_THROWS_AS(sphere_index_form({3.0, 2.0}, s, cos_t), ValidationError);
    CHECK_THROWS_AS(sphere_index_form({0.5, 1.0}, s, cos_t), ValidationError);
    const auto t = sample_builtin("torus");
    CHECK_THROWS_AS(sphere_index_form({3.0, 1.0}, t, constant_field(t, 0.0)), ValidationError);
}

TEST_CASE("index form agrees with the general second variation")
{
    for (double r : {0.5, 2.0}) {
        const auto s = stability_sphere(r, 64, 32);
        for (double p : {1.0, 2.0, 2.5, 3.0, 4.0})
            for (int l = 1; l <= 4; ++l) {
                const auto u = orthonormal_harmonic_field(s, l, l % 2 ? 1 : -2 + l % 3);
                SecondVariationOptions o;
                o.volume_constrained = true;
                const auto sv = second_variation(s, density::pwillmore(p), u, o);
                const double ix = sphere_index_form({p, r}, s, u);
                INFO("p=", p, " r=", r, " l=", l);
                CHECK(sv.value == doctest::Approx(ix).epsilon(1e-6));
                CHECK(sv.lambda == doctest::Approx((p - 2.0) / std::pow(r, p + 1.0)).epsilon(1e-8).scale(1.0));
            }
    }
}

TEST_CASE("constrained criticality")
{
    const auto& s = unit_sphere();
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto u = random_harmonic_field(s, seed, 1, 5);
        const double l2 = std::sqrt(integrate(ScalarField::from_values(s.domain(), u.values().cwiseAbs2()), s));
        CHECK(std::abs(first_variation(s, density::pwillmore(3.0), u)) <= 1e-8 * l2);
    }
}

TEST_CASE("spectrum")
{
    CHECK(sphere_spectrum(0, 1.0) == std::pair<double, long>{0.0, 1});
    CHECK(sphere_spectrum(1, 1.0) == std::pair<double, long>{2.0, 3});
    CHECK(sphere_spectrum(2, 2.0) == std::pair<double, long>{1.5, 6});
    CHECK_THROWS_AS(sphere_spectrum(-1, 1.0), ValidationError);

    const auto& s = unit_sphere();
    for (int k = 0; k <= 6; ++k) {
        const auto c = spectrum_check(s, k);
        INFO("k=", k);
        CHECK(c.max_rel_error < 1e-6);
        CHECK(c.polynomial_rank == c.n_k);
        CHECK(c.multiplicity == 2 * k + 1);
    }
}

TEST_CASE("harmonic projection")
{
    const auto& s = unit_sphere();
    const auto u = harmonic_field(s, 1, 0) + harmonic_field(s, 2, 0);
    const auto d = harmonic_project(s, u, 6);
    CHECK(d.nonzero() == std::vector<std::pair<int, int>>{{1, 0}, {2, 0}});
    CHECK(d.coefficient(1, 0) == doctest::Approx(std::sqrt(4 * pi / 3)).epsilon(1e-8));
    CHECK(d.coefficient(2, 0) == doctest::Approx(std::sqrt(4 * pi / 5)).epsilon(1e-8));
    CHECK(d.parseval_defect() < 1e-8);
    CHECK(!d.is_orthogonal_to_first_eigenspace());
    CHECK(harmonic_project(s, constant_field(s, 1.0), 3).nonzero() == std::vector<std::pair<int, int>>{{0, 0}});
    const auto rnd = harmonic_project(s, random_field(s, 4), 2);
    CHECK(rnd.residual > 0.0);
    CHECK(rnd.parseval_defect() < 1e-8);
}

TEST_CASE("Poincare inequalities")
{
    const auto& s = unit_sphere();
    const auto eq = poincare_check(s, harmonic_field(s, 2, 0));
    CHECK(eq.u_sq == doctest::Approx(4 * pi / 5).epsilon(1e-10));
    CHECK(eq.grad_term == doctest::Approx(4 * pi / 5).epsilon(1e-8));
    CHECK(eq.lap_term == doctest::Approx(4 * pi / 5).epsilon(1e-8));
    CHECK(eq.equality);
    const auto st = poincare_check(s, harmonic_field(s, 3, 2));
    CHECK(st.ratio_grad == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(st.ratio_lap == doctest::Approx(4.0).epsilon(1e-8));
    CHECK(st.holds);
    CHECK(!st.equality);
    CHECK_THROWS_AS(poincare_check(s, harmonic_field(s, 1, 0)), ValidationError);
    CHECK_THROWS_AS(poincare_check(s, constant_field(s, 1.0)), ValidationError);
}

TEST_CASE("volume variations")
{
    const auto& s = unit_sphere();
    const auto one = volume_variations(s, constant_field(s, 1.0));
    CHECK(one.first == doctest::Approx(4 * pi).epsilon(1e-12));
    const auto c = volume_variations(s, harmonic_field(s, 1, 0));
    CHECK(std::abs(c.first) < 1e-12);
    CHECK(c.second == doctest::Approx(-8 * pi / 3).epsilon(1e-12));
    // Signed volume rate of the concentric family.
    const double h = 1e-4;
    const auto fam = DeformationFamily(s, constant_field(s, 1.0));
    const double rate = (enclosed_volume(fam.at(h)) - enclosed_volume(fam.at(-h))) / (2 * h);
    CHECK(rate == doctest::Approx(one.first).epsilon(1e-7));
    CHECK_THROWS_AS(volume_variations(sample_builtin("catenoid"), constant_field(sample_builtin("catenoid"), 0.0)),
                    ValidationError);
}

TEST_CASE("stability report")
{
    const auto r3 = stability_report({3.0, 1.0}, 5);
    CHECK(r3.sign_summary == "-++++");
    CHECK(r3.verdict == "unstable in first eigenspace");
    CHECK(r3.eigenspaces[0].index == doctest::Approx(-2.0).epsilon(1e-10));
    CHECK(r3.min_quotient == doctest::Approx(26.0).epsilon(1e-10));
    CHECK(r3.coercivity_bound == doctest::Approx(6.5));
    CHECK(r3.bound_holds);
    for (const auto& e : r3.eigenspaces) CHECK(e.member_spread < 1e-8);

    CHECK(stability_report({2.0, 1.0}, 4).verdict == "marginally stable in first eigenspace");
    CHECK(stability_report({1.0, 1.0}, 4).verdict == "stable");

    const auto big = stability_report({4.0, 2.0}, 3, 64, 32);
    CHECK(big.min_quotient == doctest::Approx(2 * 24 / std::pow(2.0, 6)).epsilon(1e-9));
    CHECK(!big.bound_holds);
}
