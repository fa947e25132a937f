#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace curvevar {

/// Truncated bivariate Taylor polynomial in the chart offsets (du, dv).
///
/// Coefficient (a, b) multiplies du^a dv^b. A value of order n is meaningful up
/// to total degree n; arithmetic truncates to the smaller operand order, so any
/// quantity derived from order-n position data carries its own accuracy. Plain
/// doubles convert to constants of maximal order.
class Taylor {
public:
    static constexpr int kMaxOrder = 6;
    static constexpr int kMaxTerms = (kMaxOrder + 1) * (kMaxOrder + 2) / 2;

    static constexpr int terms(int order) { return (order + 1) * (order + 2) / 2; }
    static constexpr int index(int a, int b) { return (a + b) * (a + b + 1) / 2 + b; }

    Taylor() = default;
    Taylor(double c) { c_[0] = c; } // NOLINT(google-explicit-constructor)

    static Taylor constant(double c, int order);
    /// u0 + du, the chart coordinate u expanded about u0.
    static Taylor variable_u(double u0, int order);
    static Taylor variable_v(double v0, int order);

    int order() const { return order_; }
    double value() const { return c_[0]; }
    double coeff(int a, int b) const { return c_[index(a, b)]; }
    double& coeff(int a, int b) { return c_[index(a, b)]; }
    /// ∂^{a+b} / ∂u^a ∂v^b at the expansion point.
    double partial(int a, int b) const;

    Taylor du() const;
    Taylor dv() const;
    Taylor truncated(int order) const;

    Taylor& operator+=(const Taylor& o);
    Taylor& operator-=(const Taylor& o);
    Taylor& operator*=(const Taylor& o);
    Taylor& operator*=(double s);
    Taylor& operator+=(double s)
    {
        c_[0] += s;
        return *this;
    }
    Taylor& operator-=(double s)
    {
        c_[0] -= s;
        return *this;
    }
    Taylor& operator/=(const Taylor& o);
    Taylor& operator/=(double s) { return *this *= 1.0 / s; }

    friend Taylor operator+(Taylor a, const Taylor& b) { return a += b; }
    friend Taylor operator-(Taylor a, const Taylor& b) { return a -= b; }
    friend Taylor operator*(const Taylor& a, const Taylor& b);
    friend Taylor operator/(const Taylor& a, const Taylor& b);
    friend Taylor operator+(Taylor a, double b) { return a += b; }
    friend Taylor operator+(double a, Taylor b) { return b += a; }
    friend Taylor operator-(Taylor a, double b) { return a -= b; }
    friend Taylor operator-(double a, const Taylor& b) { return -b + a; }
    friend Taylor operator*(Taylor a, double b) { return a *= b; }
    friend Taylor operator*(double a, Taylor b) { return b *= a; }
    friend Taylor operator/(Taylor a, double b) { return a /= b; }
    friend Taylor operator/(double a, const Taylor& b);
    Taylor operator-() const;

    /// Applies f(x0 + δ) = Σ d[k] δ^k with d[k] = f^(k)(x0) / k!.
    static Taylor compose(const Taylor& x, const double* d);

private:
    std::array<double, kMaxTerms> c_{};
    int order_ = kMaxOrder;
};

Taylor sin(const Taylor& x);
Taylor cos(const Taylor& x);
Taylor sinh(const Taylor& x);
Taylor cosh(const Taylor& x);
Taylor exp(const Taylor& x);
Taylor log(const Taylor& x);
Taylor sqrt(const Taylor& x);
Taylor inverse(const Taylor& x);
/// Real power; requires a positive expansion value unless p is a nonnegative integer.
Taylor pow(const Taylor& x, double p);
/// Integer power by repeated multiplication (exact at x0 = 0; n = 0 gives 1).
Taylor ipow(const Taylor& x, int n);

/// Evaluates the polynomial p(du, dv) with jet-valued offsets.
Taylor substitute(const Taylor& p, const Taylor& du, const Taylor& dv);

using PointJet = std::array<Taylor, 4>;

} // namespace curvevar
