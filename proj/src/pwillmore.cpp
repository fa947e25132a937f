#include "curvevar/pwillmore.hpp"

#include "curvevar/calculus.hpp"
#include "curvevar/error.hpp"
#include "curvevar/fields.hpp"
#include "curvevar/harmonics.hpp"
#include "curvevar/parallel.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <tuple>

namespace curvevar {

namespace {

constexpr double kZeroIndex = 1e-10;

bool is_integer(double p) { return std::floor(p) == p; }

Taylor hpow(const Taylor& H, double q, bool integer)
{
    if (integer) return ipow(H, static_cast<int>(q));
    return pow(H, q);
}

double radius_tolerance(double r) { return 1e-12 * r; }

void require_stability_sphere(const PWillmoreSetting& st, const SurfaceSample& s)
{
    if (s.name() != "sphere" || !s.spherical_chart())
        throw ValidationError("sphere index form needs a round sphere sample, got '" + s.name() + "'");
    if (std::abs(s.param("r") - st.r) > radius_tolerance(st.r))
        throw ValidationError("sphere sample radius " + std::to_string(s.param("r")) + " differs from r = " +
                              std::to_string(st.r));
    if (s.space_form().model() != SpaceForm::Model::Euclidean || st.k0 != 0.0)
        throw ValidationError("sphere stability is set in R^3 (k0 = 0)");
    if (s.geometry(0).scalars.H < 0.0) throw ValidationError("sphere sample must be oriented with H = 1/r");
}

} // namespace

void PWillmoreSetting::validate() const
{
    if (!(p >= 1.0) || !std::isfinite(p)) throw ValidationError("p-Willmore exponent must satisfy p >= 1");
    if (!(r > 0.0) || !std::isfinite(r)) throw ValidationError("sphere radius r must be positive");
    if (!std::isfinite(k0)) throw ValidationError("k0 must be finite");
}

ScalarField pwillmore_el_residual(const SurfaceSample& s, double p, double k0)
{
    if (!(p >= 1.0) || !std::isfinite(p)) throw ValidationError("p-Willmore exponent must satisfy p >= 1");
    if (std::abs(k0 - s.space_form().k0()) > 1e-12 * std::max(1.0, std::abs(k0)))
        throw ValidationError("k0 = " + std::to_string(k0) + " does not match the ambient curvature " +
                              std::to_string(s.space_form().k0()) + " of the sample");
    const bool integer = is_integer(p);
    if (!integer)
        for (int n = 0; n < s.size(); ++n)
            if (!(s.geometry(n).scalars.H > 0.0))
                throw NumericalError("non-integer p needs H > 0; violated at node " + std::to_string(n));
    Eigen::VectorXd el(s.size());
    parallel_for(s.size(), [&](int n) {
        const NodeGeometry& g = s.geometry(n);
        const Taylor H = g.H.truncated(2);
        const double h = H.value(), K = g.scalars.K;
        const double A = 2.0 * h * h - K + 2.0 * k0;
        const Taylor Hq = hpow(H, p - 1.0, integer);
        el[n] = 0.5 * p * laplacian(Hq, g.forms) + p * A * Hq.value() - 2.0 * hpow(H, p + 1.0, integer).value();
    });
    return ScalarField::from_values(s.domain(), std::move(el));
}

SurfaceSample stability_sphere(double r, int nu, int nv)
{
    return sample_builtin("sphere", {{"r", r}}, spherical_domain(nu, nv), SpaceForm::euclidean());
}

SphereIndexIntegrals sphere_index_integrals(const SurfaceSample& s, const ScalarField& u)
{
    if (s.name() != "sphere" || !s.spherical_chart())
        throw ValidationError("sphere index form needs a round sphere sample, got '" + s.name() + "'");
    if (s.space_form().model() != SpaceForm::Model::Euclidean) throw ValidationError("sphere stability is set in R^3 (k0 = 0)");
    if (s.geometry(0).scalars.H < 0.0) throw ValidationError("sphere sample must be oriented with H = 1/r");
    if (!(u.domain() == s.domain())) throw ValidationError("variation field is sampled on a different grid than the sphere");
    const Eigen::VectorXd w = quadrature_weights(s);
    const double mean = weighted_sum(w, u.values());
    const double mass = weighted_sum(w, u.values().cwiseAbs());
    if (std::abs(mean) > 1e-8 * std::max(mass, 1e-300))
        throw ValidationError("sphere index form needs a volume-preserving variation (integral of u = " +
                              std::to_string(mean) + ")");
    const Eigen::VectorXd lap = laplace_beltrami(u, s).values();
    SphereIndexIntegrals I;
    I.r = s.param("r");
    I.lap_sq = weighted_sum(w, lap.cwiseAbs2());
    I.u_lap = weighted_sum(w, lap.cwiseProduct(u.values()));
    I.u_sq = weighted_sum(w, u.values().cwiseAbs2());
    return I;
}

double sphere_index_form(const PWillmoreSetting& st, const SphereIndexIntegrals& I)
{
    st.validate();
    if (std::abs(I.r - st.r) > radius_tolerance(st.r))
        throw ValidationError("sphere sample radius " + std::to_string(I.r) + " differs from r = " + std::to_string(st.r));
    if (st.k0 != 0.0) throw ValidationError("sphere stability is set in R^3 (k0 = 0)");
    const double p = st.p, r = st.r;
    const double a = p * (p - 1.0) * r * r / 4.0, b = p * p - p - 1.0, c = (p - 1.0) * (p - 2.0) / (r * r);
    return (a * I.lap_sq + b * I.u_lap + c * I.u_sq) / std::pow(r, p);
}

double sphere_index_form(const PWillmoreSetting& st, const SurfaceSample& s, const ScalarField& u)
{
    st.validate();
    require_stability_sphere(st, s);
    return sphere_index_form(st, sphere_index_integrals(s, u));
}

std::pair<double, long> sphere_spectrum(int k, double r)
{
    if (k < 0) throw ValidationError("eigenvalue index k must be >= 0");
    if (!(r > 0.0)) throw ValidationError("sphere radius r must be positive");
    const long kk = k;
    return {static_cast<double>(kk * (kk + 1)) / (r * r), (kk + 2) * (kk + 1) / 2};
}

SpectrumCheck spectrum_check(const SurfaceSample& s, int k)
{
    if (k < 0 || k > kMaxHarmonicDegree) throw ValidationError("spectrum check supports 0 <= k <= 8");
    const double r = sphere_area_radius(s);
    SpectrumCheck c;
    c.k = k;
    std::tie(c.eigenvalue, c.n_k) = sphere_spectrum(k, r);
    const double lam = c.eigenvalue;
    for (int m = -k; m <= k; ++m) {
        const ScalarField Y = ScalarField::from_values(s.domain(), orthonormal_harmonic_field(s, k, m).values());
        const ScalarField L = laplace_beltrami(Y, s);
        const double err = (L.values() + lam * Y.values()).cwiseAbs().maxCoeff();
        c.max_rel_error = std::max(c.max_rel_error, err / (std::max(lam, 1.0 / (r * r)) * Y.max_abs()));
    }

    // Monomials x^a y^b z^c, a + b + c = k, on the sphere.
    std::vector<Eigen::VectorXd> basis, lap;
    for (int a = k; a >= 0; --a)
        for (int b = k - a; b >= 0; --b) {
            const int e = k - a - b;
            Eigen::VectorXd v(s.size());
            for (int n = 0; n < s.size(); ++n) {
                const AmbientVector x = s.geometry(n).position;
                v[n] = std::pow(x[0], a) * std::pow(x[1], b) * std::pow(x[2], e);
            }
            lap.push_back(laplace_beltrami(ScalarField::from_values(s.domain(), v), s).values());
            basis.push_back(std::move(v));
        }
    const Eigen::VectorXd w = quadrature_weights(s);
    const int nb = static_cast<int>(basis.size());
    Eigen::MatrixXd G(nb, nb), L(nb, nb);
    for (int i = 0; i < nb; ++i)
        for (int j = 0; j < nb; ++j) {
            G(i, j) = weighted_sum(w, basis[i].cwiseProduct(basis[j]));
            L(i, j) = weighted_sum(w, basis[i].cwiseProduct(lap[j]));
        }
    L = 0.5 * (L + L.transpose());
    // Orthonormalize on the numerical range of G, then diagonalize -L there.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ge(G);
    const double gmax = ge.eigenvalues().maxCoeff();
    std::vector<int> keep;
    for (int i = 0; i < nb; ++i)
        if (ge.eigenvalues()[i] > 1e-10 * gmax) keep.push_back(i);
    c.polynomial_rank = static_cast<int>(keep.size());
    Eigen::MatrixXd T(nb, c.polynomial_rank);
    for (int j = 0; j < c.polynomial_rank; ++j)
        T.col(j) = ge.eigenvectors().col(keep[j]) / std::sqrt(ge.eigenvalues()[keep[j]]);
    const Eigen::MatrixXd M = -T.transpose() * L * T;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> le(0.5 * (M + M.transpose()));
    for (int i = 0; i < c.polynomial_rank; ++i) {
        const double mu = le.eigenvalues()[i];
        c.polynomial_eigenvalues.push_back(mu);
        if (std::abs(mu - lam) <= 1e-6 * std::max(lam, 1.0 / (r * r))) ++c.multiplicity;
    }
    return c;
}

double HarmonicDecomposition::coefficient(int l, int m) const
{
    const auto it = coefficients.find({l, m});
    return it == coefficients.end() ? 0.0 : it->second;
}

double HarmonicDecomposition::parseval_defect() const
{
    double sum = residual;
    for (const auto& [lm, c] : coefficients) sum += c * c;
    return std::abs(sum - norm_sq) / std::max(norm_sq, 1e-300);
}

std::vector<std::pair<int, int>> HarmonicDecomposition::nonzero(double tol) const
{
    std::vector<std::pair<int, int>> out;
    const double scale = std::sqrt(norm_sq);
    for (const auto& [lm, c] : coefficients)
        if (std::abs(c) > tol * scale) out.push_back(lm);
    return out;
}

bool HarmonicDecomposition::is_orthogonal_to_first_eigenspace(double tol) const
{
    const double scale = std::sqrt(norm_sq);
    for (int m = -1; m <= 1; ++m)
        if (std::abs(coefficient(1, m)) > tol * scale) return false;
    return true;
}

bool HarmonicDecomposition::is_orthogonal_to_constants(double tol) const
{
    return std::abs(coefficient(0, 0)) <= tol * std::sqrt(norm_sq);
}

HarmonicDecomposition harmonic_project(const SurfaceSample& s, const ScalarField& u, int l_max)
{
    if (l_max < 0 || l_max > kMaxHarmonicDegree) throw ValidationError("l_max must be between 0 and 8");
    sphere_area_radius(s); // validates the sample
    const Eigen::VectorXd w = quadrature_weights(s);
    HarmonicDecomposition d;
    d.l_max = l_max;
    d.norm_sq = weighted_sum(w, u.values().cwiseAbs2());
    Eigen::VectorXd rest = u.values();
    for (int l = 0; l <= l_max; ++l)
        for (int m = -l; m <= l; ++m) {
            const ScalarField Y = orthonormal_harmonic_field(s, l, m);
            const double c = weighted_sum(w, u.values().cwiseProduct(Y.values()));
            d.coefficients[{l, m}] = c;
            rest -= c * Y.values();
        }
    d.residual = weighted_sum(w, rest.cwiseAbs2());
    return d;
}

PoincareReport poincare_check(const SurfaceSample& s, const ScalarField& u)
{
    const double r = sphere_area_radius(s);
    const HarmonicDecomposition d = harmonic_project(s, u, 1);
    if (!(d.norm_sq > 0.0)) throw ValidationError("Poincare check needs a nonzero u");
    if (!d.is_orthogonal_to_constants())
        throw ValidationError("Poincare check needs u orthogonal to constants (coefficient " +
                              std::to_string(d.coefficient(0, 0)) + ")");
    if (!d.is_orthogonal_to_first_eigenspace())
        throw ValidationError("Poincare check needs u orthogonal to the first eigenspace {Δv = -(2/r^2) v}");
    const Eigen::VectorXd w = quadrature_weights(s);
    const ScalarField g2 = gradient_norm_sq(u, s);
    const ScalarField lap = laplace_beltrami(u, s);
    if (!(weighted_sum(w, g2.values()) > 1e-14 * d.norm_sq)) throw ValidationError("Poincare check needs a nonconstant u");
    PoincareReport rep;
    rep.u_sq = d.norm_sq;
    rep.grad_term = r * r / 6.0 * weighted_sum(w, g2.values());
    rep.lap_term = std::pow(r, 4) / 36.0 * weighted_sum(w, lap.values().cwiseAbs2());
    rep.ratio_grad = rep.grad_term / rep.u_sq;
    rep.ratio_lap = rep.lap_term / rep.u_sq;
    constexpr double tol = 1e-8;
    rep.holds = rep.u_sq <= rep.grad_term * (1.0 + tol) && rep.grad_term <= rep.lap_term * (1.0 + tol);
    rep.equality = std::abs(rep.ratio_grad - 1.0) <= 1e-6 && std::abs(rep.ratio_lap - 1.0) <= 1e-6;
    return rep;
}

VolumeVariations volume_variations(const SurfaceSample& s, const ScalarField& u)
{
    if (!s.domain().closed()) throw ValidationError("volume variations need a closed surface");
    if (!(u.domain() == s.domain())) throw ValidationError("variation field is sampled on a different grid than the surface");
    const Eigen::VectorXd w = quadrature_weights(s);
    Eigen::VectorXd f(s.size());
    for (int n = 0; n < s.size(); ++n) f[n] = -2.0 * s.geometry(n).scalars.H * u[n] * u[n];
    return {weighted_sum(w, u.values()), weighted_sum(w, f)};
}

namespace {

StabilityReport assemble_report(const PWillmoreSetting& st, const std::vector<std::vector<SphereIndexIntegrals>>& ints)
{
    const int l_max = static_cast<int>(ints.size());
    StabilityReport rep;
    rep.p = st.p;
    rep.r = st.r;
    rep.eigenspaces.resize(l_max);
    for (int l = 1; l <= l_max; ++l) {
        EigenspaceIndex& e = rep.eigenspaces[l - 1];
        e.l = l;
        e.eigenvalue = sphere_spectrum(l, st.r).first;
        std::vector<double> vals;
        for (const auto& I : ints[l - 1]) vals.push_back(sphere_index_form(st, I));
        e.index = vals[l];
        for (double v : vals) e.member_spread = std::max(e.member_spread, std::abs(v - e.index));
        e.member_spread /= std::max(std::abs(e.index), 1e-300);
        const double scale = std::pow(st.r, -st.p - 2.0) * (1.0 + st.p * st.p);
        e.sign = std::abs(e.index) <= kZeroIndex * scale ? 0 : (e.index > 0.0 ? 1 : -1);
        rep.sign_summary += e.sign > 0 ? '+' : e.sign < 0 ? '-' : '0';
    }
    rep.coercivity_bound = (2.0 * st.p * st.p - 3.0 * st.p + 4.0) / (2.0 * st.r * st.r);
    rep.min_quotient = std::numeric_limits<double>::infinity();
    for (const auto& e : rep.eigenspaces)
        if (e.l >= 2) rep.min_quotient = std::min(rep.min_quotient, e.index);
    rep.bound_holds = l_max < 2 || rep.min_quotient >= rep.coercivity_bound * (1.0 - 1e-6);

    const int s1 = rep.eigenspaces[0].sign;
    bool rest_positive = true;
    for (const auto& e : rep.eigenspaces)
        if (e.l >= 2 && e.sign <= 0) rest_positive = false;
    if (!rest_positive)
        rep.verdict = "indefinite beyond the first eigenspace";
    else if (s1 < 0)
        rep.verdict = "unstable in first eigenspace";
    else if (s1 == 0)
        rep.verdict = "marginally stable in first eigenspace";
    else
        rep.verdict = "stable";
    return rep;
}

} // namespace

std::vector<StabilityReport> stability_reports(const std::vector<PWillmoreSetting>& settings, int l_max, int nu, int nv)
{
    if (l_max < 1 || l_max > kMaxHarmonicDegree) throw ValidationError("l_max must be between 1 and 8");
    for (const auto& st : settings) {
        st.validate();
        if (st.k0 != 0.0) throw ValidationError("sphere stability is set in R^3 (k0 = 0)");
    }
    std::vector<StabilityReport> out(settings.size());
    std::map<double, std::vector<std::vector<SphereIndexIntegrals>>> by_radius;
    for (std::size_t i = 0; i < settings.size(); ++i) {
        auto it = by_radius.find(settings[i].r);
        if (it == by_radius.end()) {
            const SurfaceSample s = stability_sphere(settings[i].r, nu, nv);
            std::vector<std::vector<SphereIndexIntegrals>> ints(l_max);
            for (int l = 1; l <= l_max; ++l)
                for (int m = -l; m <= l; ++m)
                    ints[l - 1].push_back(sphere_index_integrals(s, orthonormal_harmonic_field(s, l, m)));
            it = by_radius.emplace(settings[i].r, std::move(ints)).first;
        }
        out[i] = assemble_report(settings[i], it->second);
    }
    return out;
}

StabilityReport stability_report(const PWillmoreSetting& st, int l_max, int nu, int nv)
{
    return stability_reports({st}, l_max, nu, nv).front();
}

} // namespace curvevar
