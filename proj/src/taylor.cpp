#include "curvevar/taylor.hpp"

#include "curvevar/error.hpp"

#include <algorithm>
#include <cmath>

namespace curvevar {

namespace {

struct ProductTerm {
    std::uint8_t lhs, rhs, out;
};

// Index triples (i, j, i*j slot) whose total degree stays within each order.
const std::vector<ProductTerm>& product_table(int order)
{
    static const auto tables = [] {
        std::array<std::vector<ProductTerm>, Taylor::kMaxOrder + 1> t;
        for (int n = 0; n <= Taylor::kMaxOrder; ++n) {
            for (int d1 = 0; d1 <= n; ++d1) {
                for (int b1 = 0; b1 <= d1; ++b1) {
                    for (int d2 = 0; d1 + d2 <= n; ++d2) {
                        for (int b2 = 0; b2 <= d2; ++b2) {
                            const int a1 = d1 - b1;
                            const int a2 = d2 - b2;
                            t[n].push_back({static_cast<std::uint8_t>(Taylor::index(a1, b1)),
                                            static_cast<std::uint8_t>(Taylor::index(a2, b2)),
                                            static_cast<std::uint8_t>(Taylor::index(a1 + a2, b1 + b2))});
                        }
                    }
                }
            }
        }
        return t;
    }();
    return tables[order];
}

constexpr std::array<double, 8> kFactorial = {1, 1, 2, 6, 24, 120, 720, 5040};

} // namespace

Taylor Taylor::constant(double c, int order)
{
    Taylor t(c);
    t.order_ = order;
    return t;
}

Taylor Taylor::variable_u(double u0, int order)
{
    Taylor t = constant(u0, order);
    if (order >= 1) t.c_[index(1, 0)] = 1.0;
    return t;
}

Taylor Taylor::variable_v(double v0, int order)
{
    Taylor t = constant(v0, order);
    if (order >= 1) t.c_[index(0, 1)] = 1.0;
    return t;
}

double Taylor::partial(int a, int b) const
{
    if (a + b > order_) throw NumericalError("Taylor partial beyond available order");
    return c_[index(a, b)] * kFactorial[a] * kFactorial[b];
}

Taylor Taylor::du() const
{
    if (order_ == 0) throw NumericalError("cannot differentiate an order-0 expansion");
    Taylor r = constant(0.0, order_ - 1);
    for (int n = 0; n < order_; ++n)
        for (int b = 0; b <= n; ++b) r.c_[index(n - b, b)] = (n - b + 1) * c_[index(n - b + 1, b)];
    return r;
}

Taylor Taylor::dv() const
{
    if (order_ == 0) throw NumericalError("cannot differentiate an order-0 expansion");
    Taylor r = constant(0.0, order_ - 1);
    for (int n = 0; n < order_; ++n)
        for (int b = 0; b <= n; ++b) r.c_[index(n - b, b)] = (b + 1) * c_[index(n - b, b + 1)];
    return r;
}

Taylor Taylor::truncated(int order) const
{
    Taylor r = *this;
    if (order < order_) {
        for (int k = terms(order); k < kMaxTerms; ++k) r.c_[k] = 0.0;
        r.order_ = order;
    }
    return r;
}

Taylor& Taylor::operator+=(const Taylor& o)
{
    order_ = std::min(order_, o.order_);
    const int n = terms(order_);
    for (int k = 0; k < n; ++k) c_[k] += o.c_[k];
    for (int k = n; k < kMaxTerms; ++k) c_[k] = 0.0;
    return *this;
}

Taylor& Taylor::operator-=(const Taylor& o)
{
    order_ = std::min(order_, o.order_);
    const int n = terms(order_);
    for (int k = 0; k < n; ++k) c_[k] -= o.c_[k];
    for (int k = n; k < kMaxTerms; ++k) c_[k] = 0.0;
    return *this;
}

Taylor& Taylor::operator*=(double s)
{
    for (int k = 0; k < terms(order_); ++k) c_[k] *= s;
    return *this;
}

Taylor operator*(const Taylor& a, const Taylor& b)
{
    Taylor r = Taylor::constant(0.0, std::min(a.order_, b.order_));
    for (const ProductTerm& t : product_table(r.order_)) r.c_[t.out] += a.c_[t.lhs] * b.c_[t.rhs];
    return r;
}

Taylor& Taylor::operator*=(const Taylor& o) { return *this = *this * o; }

Taylor Taylor::operator-() const
{
    Taylor r = *this;
    for (int k = 0; k < terms(order_); ++k) r.c_[k] = -r.c_[k];
    return r;
}

Taylor Taylor::compose(const Taylor& x, const double* d)
{
    Taylor delta = x;
    delta.c_[0] = 0.0;
    Taylor r = Taylor::constant(d[x.order_], x.order_);
    for (int k = x.order_ - 1; k >= 0; --k) {
        r = r * delta;
        r.c_[0] += d[k];
    }
    return r;
}

Taylor operator/(const Taylor& a, const Taylor& b) { return a * inverse(b); }
Taylor operator/(double a, const Taylor& b) { return a * inverse(b); }
Taylor& Taylor::operator/=(const Taylor& o) { return *this = *this * inverse(o); }

Taylor sin(const Taylor& x)
{
    std::array<double, Taylor::kMaxOrder + 1> d{};
    const double s = std::sin(x.value()), c = std::cos(x.value());
    const double cyc[4] = {s, c, -s, -c};
    for (int k = 0; k <= x.order(); ++k) d[k] = cyc[k % 4] / kFactorial[k];
    return Taylor::compose(x, d.data());
}

Taylor cos(const Taylor& x)
{
    std::array<double, Taylor::kMaxOrder + 1> d{};
    const double s = std::sin(x.value()), c = std::cos(x.value());
    const double cyc[4] = {c, -s, -c, s};
    for (int k = 0; k <= x.order(); ++k) d[k] = cyc[k % 4] / kFactorial[k];
    return Taylor::compose(x, d.data());
}

Taylor sinh(const Taylor& x)
{
    std::array<double, Taylor::kMaxOrder + 1> d{};
    const double s = std::sinh(x.value()), c = std::cosh(x.value());
    for (int k = 0; k <= x.order(); ++k) d[k] = (k % 2 == 0 ? s : c) / kFactorial[k];
    return Taylor::compose(x, d.data());
}

Taylor cosh(const Taylor& x)
{
    std::array<double, Taylor::kMaxOrder + 1> d{};
    const double s = std::sinh(x.value()), c = std::cosh(x.value());
    for (int k = 0; k <= x.order(); ++k) d[k] = (k % 2 == 0 ? c : s) / kFactorial[k];
    return Taylor::compose(x, d.data());
}

Taylor exp(const Taylor& x)
{
    std::array<double, Taylor::kMaxOrder + 1> d{};
    const double e = std::exp(x.value());
    for (int k = 0; k <= x.order(); ++k) d[k] = e / kFactorial[k];
    return Taylor::compose(x, d.data());
}

Taylor log(const Taylor& x)
{
    const double x0 = x.value();
    if (!(x0 > 0.0)) throw NumericalError("log of a nonpositive expansion");
    std::array<double, Taylor::kMaxOrder + 1> d{};
    d[0] = std::log(x0);
    double p = 1.0;
    for (int k = 1; k <= x.order(); ++k) {
        p /= x0;
        d[k] = ((k % 2 == 1) ? 1.0 : -1.0) * p / k;
    }
    return Taylor::compose(x, d.data());
}

Taylor pow(const Taylor& x, double p)
{
    const double x0 = x.value();
    if (p >= 0.0 && p == std::floor(p) && p <= 64.0) return ipow(x, static_cast<int>(p));
    if (!(x0 > 0.0)) throw NumericalError("non-integer power of a nonpositive expansion");
    // generalized binomial coefficients times x0^(p-k)
    std::array<double, Taylor::kMaxOrder + 1> d{};
    double binom = 1.0;
    for (int k = 0; k <= x.order(); ++k) {
        d[k] = binom * std::pow(x0, p - k);
        binom *= (p - k) / (k + 1);
    }
    return Taylor::compose(x, d.data());
}

Taylor sqrt(const Taylor& x) { return pow(x, 0.5); }

Taylor inverse(const Taylor& x)
{
    const double x0 = x.value();
    if (x0 == 0.0) throw NumericalError("division by an expansion with zero value");
    std::array<double, Taylor::kMaxOrder + 1> d{};
    double q = 1.0 / x0;
    for (int k = 0; k <= x.order(); ++k) {
        d[k] = q;
        q *= -1.0 / x0;
    }
    return Taylor::compose(x, d.data());
}

Taylor ipow(const Taylor& x, int n)
{
    if (n < 0) return inverse(ipow(x, -n));
    Taylor result = Taylor::constant(1.0, x.order());
    Taylor base = x;
    while (n > 0) {
        if (n & 1) result *= base;
        n >>= 1;
        if (n > 0) base *= base;
    }
    return result;
}

Taylor substitute(const Taylor& p, const Taylor& du, const Taylor& dv)
{
    // Horner in du with Horner-in-dv coefficients.
    const int n = p.order();
    Taylor result = Taylor::constant(0.0, std::min(du.order(), dv.order()));
    for (int a = n; a >= 0; --a) {
        Taylor inner = Taylor::constant(p.coeff(a, n - a), result.order());
        for (int b = n - a - 1; b >= 0; --b) inner = inner * dv + p.coeff(a, b);
        result = result * du + inner;
    }
    return result;
}

} // namespace curvevar
