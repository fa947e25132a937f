#include "curvevar/calculus.hpp"

#include "curvevar/error.hpp"
#include "curvevar/parallel.hpp"

#include <cmath>

namespace curvevar {

namespace {

void check_bound(const ScalarField& f, const SurfaceSample& s)
{
    if (!(f.domain() == s.domain())) throw ValidationError("field is not sampled on the surface grid");
}

} // namespace

Eigen::Vector2d chart_gradient(const Taylor& f) { return {f.partial(1, 0), f.partial(0, 1)}; }

Eigen::Matrix2d covariant_hessian(const Taylor& f, const FundamentalForms& ff)
{
    const Eigen::Vector2d df = chart_gradient(f);
    Eigen::Matrix2d H;
    H << f.partial(2, 0), f.partial(1, 1), f.partial(1, 1), f.partial(0, 2);
    for (int k = 0; k < 2; ++k) H -= df[k] * ff.gamma[k];
    return 0.5 * (H + H.transpose());
}

double laplacian(const Taylor& f, const FundamentalForms& ff)
{
    return (ff.g_inv.cwiseProduct(covariant_hessian(f, ff))).sum();
}

double contract(const Eigen::Matrix2d& a, const Eigen::Matrix2d& b, const Eigen::Matrix2d& g_inv)
{
    return (g_inv * a * g_inv).cwiseProduct(b).sum();
}

Eigen::Matrix2d h_squared(const FundamentalForms& ff)
{
    const Eigen::Matrix2d h2 = ff.h * ff.g_inv * ff.h;
    return 0.5 * (h2 + h2.transpose());
}

VectorField gradient(const ScalarField& f, const SurfaceSample& s)
{
    check_bound(f, s);
    VectorField out(s.size());
    parallel_for(s.size(), [&](int n) { out[n] = s.geometry(n).forms.g_inv * chart_gradient(f.node_jet(n, 1)); });
    return out;
}

ScalarField gradient_norm_sq(const ScalarField& f, const SurfaceSample& s)
{
    check_bound(f, s);
    Eigen::VectorXd v(s.size());
    parallel_for(s.size(), [&](int n) {
        const Eigen::Vector2d df = chart_gradient(f.node_jet(n, 1));
        v[n] = df.dot(s.geometry(n).forms.g_inv * df);
    });
    return ScalarField::from_values(s.domain(), std::move(v));
}

TensorField02 hessian(const ScalarField& f, const SurfaceSample& s)
{
    check_bound(f, s);
    TensorField02 out;
    out.values.resize(s.size());
    parallel_for(s.size(), [&](int n) { out.values[n] = covariant_hessian(f.node_jet(n, 2), s.geometry(n).forms); });
    return out;
}

ScalarField laplace_beltrami(const ScalarField& f, const SurfaceSample& s)
{
    check_bound(f, s);
    Eigen::VectorXd v(s.size());
    if (f.has_map()) {
        parallel_for(s.size(), [&](int n) { v[n] = laplacian(f.node_jet(n, 2), s.geometry(n).forms); });
    } else {
        // second-order grid partials only
        const auto parts = GridDifferentiator::cached(s.domain())->partials(f.values(), 2);
        parallel_for(s.size(), [&](int n) {
            Taylor t = Taylor::constant(0.0, 2);
            for (int a = 0; a <= 2; ++a)
                for (int b = 0; a + b <= 2; ++b)
                    t.coeff(a, b) = parts[Taylor::index(a, b)][n] / ((a == 2 ? 2.0 : 1.0) * (b == 2 ? 2.0 : 1.0));
            v[n] = laplacian(t, s.geometry(n).forms);
        });
    }
    return ScalarField::from_values(s.domain(), std::move(v));
}

ScalarField contract(const TensorField02& a, const TensorField02& b, const SurfaceSample& s)
{
    if (a.size() != s.size() || b.size() != s.size()) throw ValidationError("tensor field is not sampled on the surface grid");
    Eigen::VectorXd v(s.size());
    for (int n = 0; n < s.size(); ++n) v[n] = contract(a[n], b[n], s.geometry(n).forms.g_inv);
    return ScalarField::from_values(s.domain(), std::move(v));
}

TensorField02 h_squared(const SurfaceSample& s)
{
    TensorField02 out;
    out.values.resize(s.size());
    for (int n = 0; n < s.size(); ++n) out.values[n] = h_squared(s.geometry(n).forms);
    return out;
}

TensorField02 metric_tensor(const SurfaceSample& s)
{
    TensorField02 out;
    out.values.resize(s.size());
    for (int n = 0; n < s.size(); ++n) out.values[n] = s.geometry(n).forms.g;
    return out;
}

TensorField02 second_fundamental_form(const SurfaceSample& s)
{
    TensorField02 out;
    out.values.resize(s.size());
    for (int n = 0; n < s.size(); ++n) out.values[n] = s.geometry(n).forms.h;
    return out;
}

Eigen::VectorXd quadrature_weights(const SurfaceSample& s, bool allow_open)
{
    const PatchDomain& d = s.domain();
    if (!d.closed() && !allow_open)
        throw ValidationError("integration over a non-closed domain needs the open-domain override; values are "
                              "meaningful for compactly supported integrands only");
    const Eigen::VectorXd wu = quadrature_weights_u(d), wv = quadrature_weights_v(d);
    Eigen::VectorXd w(s.size());
    for (int n = 0; n < s.size(); ++n) w[n] = wu[d.node_i(n)] * wv[d.node_j(n)] * s.geometry(n).forms.dS_weight;
    return w;
}

double weighted_sum(const Eigen::VectorXd& w, const Eigen::VectorXd& f)
{
    if (w.size() != f.size()) throw ValidationError("quadrature weights and values differ in size");
    double sum = 0.0, comp = 0.0;
    for (Eigen::Index n = 0; n < w.size(); ++n) {
        const double x = w[n] * f[n];
        const double t = sum + x;
        comp += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
        sum = t;
    }
    return sum + comp;
}

double integrate(const Eigen::VectorXd& values, const SurfaceSample& s, bool allow_open)
{
    return weighted_sum(quadrature_weights(s, allow_open), values);
}

double integrate(const ScalarField& f, const SurfaceSample& s, bool allow_open)
{
    check_bound(f, s);
    return integrate(f.values(), s, allow_open);
}

} // namespace curvevar
