#include "curvevar/taylor.hpp"

#include <doctest.h>

#include <cmath>

using namespace curvevar;

namespace {

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

} // namespace

TEST_CASE("index layout is graded by total degree")
{
    CHECK(Taylor::index(0, 0) == 0);
    CHECK(Taylor::index(1, 0) == 1);
    CHECK(Taylor::index(0, 1) == 2);
    CHECK(Taylor::index(2, 0) == 3);
    CHECK(Taylor::index(0, 6) == Taylor::kMaxTerms - 1);
    CHECK(Taylor::terms(4) == 15);
}

TEST_CASE("products of variables")
{
    const Taylor u = Taylor::variable_u(0.5, 4);
    const Taylor v = Taylor::variable_v(-1.0, 4);
    const Taylor p = u * u * v;
    // u^2 v expanded at (0.5, -1)
    CHECK(p.value() == doctest::Approx(-0.25));
    CHECK(p.partial(1, 0) == doctest::Approx(2 * 0.5 * -1.0));
    CHECK(p.partial(0, 1) == doctest::Approx(0.25));
    CHECK(p.partial(2, 1) == doctest::Approx(2.0));
    CHECK(p.partial(3, 0) == doctest::Approx(0.0));
}

TEST_CASE("elementary functions match closed-form derivatives")
{
    const double x0 = 0.3;
    const Taylor x = Taylor::variable_u(x0, 6);
    const Taylor s = sin(x), c = cos(x), e = exp(x), sh = sinh(x), ch = cosh(x);
    for (int k = 0; k <= 6; ++k) {
        CAPTURE(k);
        CHECK(s.partial(k, 0) == doctest::Approx(std::sin(x0 + k * M_PI / 2)).epsilon(1e-13));
        CHECK(c.partial(k, 0) == doctest::Approx(std::cos(x0 + k * M_PI / 2)).epsilon(1e-13));
        CHECK(e.partial(k, 0) == doctest::Approx(std::exp(x0)).epsilon(1e-13));
        CHECK(sh.partial(k, 0) == doctest::Approx(k % 2 ? std::cosh(x0) : std::sinh(x0)).epsilon(1e-13));
        CHECK(ch.partial(k, 0) == doctest::Approx(k % 2 ? std::sinh(x0) : std::cosh(x0)).epsilon(1e-13));
    }
    const Taylor l = log(x);
    const Taylor r = sqrt(x);
    const Taylor q = pow(x, 2.5);
    for (int k = 1; k <= 6; ++k) {
        CAPTURE(k);
        const double dlog = (k % 2 ? 1.0 : -1.0) * factorial(k - 1) / std::pow(x0, k);
        CHECK(l.partial(k, 0) == doctest::Approx(dlog).epsilon(1e-12));
        double falling = 1.0;
        for (int j = 0; j < k; ++j) falling *= 2.5 - j;
        CHECK(q.partial(k, 0) == doctest::Approx(falling * std::pow(x0, 2.5 - k)).epsilon(1e-12));
    }
    CHECK((r * r).partial(1, 0) == doctest::Approx(1.0));
    CHECK((r * r).partial(3, 0) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("division and inverse")
{
    const Taylor u = Taylor::variable_u(2.0, 5);
    const Taylor v = Taylor::variable_v(1.0, 5);
    const Taylor q = (u * v + 1.0) / (u + v);
    const Taylor back = q * (u + v);
    for (int a = 0; a <= 5; ++a)
        for (int b = 0; a + b <= 5; ++b) CHECK(back.coeff(a, b) == doctest::Approx((u * v + 1.0).coeff(a, b)));
    CHECK(inverse(u).partial(2, 0) == doctest::Approx(2.0 / 8.0));
}

TEST_CASE("integer powers are exact at zero")
{
    const Taylor h = Taylor::variable_u(0.0, 4);
    CHECK(ipow(h, 0).value() == 1.0);
    CHECK(ipow(h, 0).partial(1, 0) == 0.0);
    CHECK(ipow(h, 3).partial(3, 0) == doctest::Approx(6.0));
    CHECK(pow(h, 2.0).partial(2, 0) == doctest::Approx(2.0));
}

TEST_CASE("order bookkeeping")
{
    const Taylor u = Taylor::variable_u(1.0, 4);
    CHECK(u.du().order() == 3);
    CHECK((u * Taylor::variable_v(0.0, 2)).order() == 2);
    CHECK((u + 2.0).order() == 4);
    CHECK(u.truncated(1).order() == 1);
}

TEST_CASE("substitute composes polynomials with jets")
{
    // p(du, dv) = du^2 + 3 dv, with du = 2t, dv = t^2 in t = u-offset.
    Taylor p = Taylor::constant(0.0, 4);
    p.coeff(2, 0) = 1.0;
    p.coeff(0, 1) = 3.0;
    const Taylor t = Taylor::variable_u(0.0, 4);
    const Taylor r = substitute(p, 2.0 * t, t * t);
    CHECK(r.coeff(2, 0) == doctest::Approx(7.0));
    CHECK(r.coeff(1, 0) == doctest::Approx(0.0));
}
