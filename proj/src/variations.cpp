#include "curvevar/variations.hpp"

#include "curvevar/calculus.hpp"
#include "curvevar/error.hpp"
#include "curvevar/parallel.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace curvevar {

namespace {

std::string node_label(const SurfaceSample& s, int n)
{
    std::ostringstream os;
    os << "node " << n << " (u=" << s.u_at_node(n) << ", v=" << s.v_at_node(n) << ")";
    return os.str();
}

void check_guard(const SurfaceSample& s, const EnergyDensity& E)
{
    if (!E.guard) return;
    for (int n = 0; n < s.size(); ++n) {
        const auto& c = s.geometry(n).scalars;
        if (!E.admissible(c.H, c.K))
            throw NumericalError("density '" + E.name + "' requires " + E.guard_description + "; violated at " +
                                 node_label(s, n) + " where H=" + std::to_string(c.H));
    }
}

void check_domain(const SurfaceSample& s, const ScalarField& u)
{
    if (!(u.domain() == s.domain())) throw ValidationError("variation field is sampled on a different grid than the surface");
}

// Open patches: u has to vanish on the two outermost rows of each open direction.
void check_compact_support(const SurfaceSample& s, const ScalarField& u)
{
    const PatchDomain& d = s.domain();
    if (d.closed()) return;
    const double tol = 1e-12 * std::max(1.0, u.max_abs());
    auto fail = [&](int n) {
        throw ValidationError("variations on the open patch '" + s.name() +
                              "' need compact support; u is nonzero near the boundary at " + node_label(s, n));
    };
    for (int n = 0; n < d.size(); ++n) {
        const int i = d.node_i(n), j = d.node_j(n);
        const bool edge_u = !d.periodic_u && (i < 2 || i >= d.nu - 2);
        const bool edge_v = !d.periodic_v && (j < 2 || j >= d.nv - 2);
        if ((edge_u || edge_v) && std::abs(u[n]) > tol) fail(n);
    }
}

Eigen::VectorXd weights(const SurfaceSample& s) { return quadrature_weights(s, !s.domain().closed()); }

struct ElTerms {
    std::array<double, 6> t{};
    double sum() const { return t[0] + t[1] + t[2] + t[3] + t[4] + t[5]; }
    double abs_sum() const
    {
        double a = 0.0;
        for (double x : t) a += std::abs(x);
        return a;
    }
};

ElTerms el_terms(const SurfaceSample& s, const EnergyDensity& E, int n)
{
    const NodeGeometry& g = s.geometry(n);
    const FundamentalForms& ff = g.forms;
    const double k0 = s.space_form().k0();
    const Taylor H = g.H.truncated(2), K = g.K.truncated(2);
    const Taylor EH = E.E_H(H, K), EK = E.E_K(H, K);
    const double h = H.value(), k = K.value(), e = E.E(H, K).value();
    const double A = 2.0 * h * h - k + 2.0 * k0;
    ElTerms r;
    r.t[0] = 0.5 * laplacian(EH, ff);
    r.t[1] = A * EH.value();
    r.t[2] = 2.0 * h * laplacian(EK, ff);
    r.t[3] = -contract(ff.h, covariant_hessian(EK, ff), ff.g_inv);
    r.t[4] = 2.0 * h * k * EK.value();
    r.t[5] = -2.0 * h * e;
    return r;
}

// Derivative data of u at a node.
struct UData {
    double u, lap, h_hess, grad_sq, h_grad, h2_grad, h2_hess, hess_sq, dK, dH;
};

UData u_data(const NodeGeometry& g, const Taylor& uj)
{
    const FundamentalForms& ff = g.forms;
    const Eigen::Vector2d du = chart_gradient(uj);
    const Eigen::Vector2d up = ff.g_inv * du;
    const Eigen::Matrix2d Hu = covariant_hessian(uj, ff);
    const Eigen::Matrix2d h2 = h_squared(ff);
    UData d;
    d.u = uj.value();
    d.lap = (ff.g_inv * Hu).trace();
    d.h_hess = contract(ff.h, Hu, ff.g_inv);
    d.grad_sq = du.dot(up);
    d.h_grad = up.dot(ff.h * up);
    d.h2_grad = up.dot(h2 * up);
    d.h2_hess = contract(h2, Hu, ff.g_inv);
    d.hess_sq = contract(Hu, Hu, ff.g_inv);
    d.dK = chart_gradient(g.K).dot(up);
    d.dH = chart_gradient(g.H).dot(up);
    return d;
}

struct Criticality {
    double lambda = 0.0, residual = 0.0, scale = 0.0;
    bool critical = false;
};

Criticality criticality(const SurfaceSample& s, const EnergyDensity& E, bool volume_constrained, double tol)
{
    std::vector<ElTerms> terms(s.size());
    parallel_for(s.size(), [&](int n) { terms[n] = el_terms(s, E, n); });
    Eigen::VectorXd el(s.size());
    Criticality c;
    for (int n = 0; n < s.size(); ++n) {
        el[n] = terms[n].sum();
        c.scale = std::max(c.scale, terms[n].abs_sum());
    }
    if (volume_constrained) {
        const Eigen::VectorXd w = weights(s);
        c.lambda = weighted_sum(w, el) / w.sum();
    }
    for (int n = 0; n < s.size(); ++n) c.residual = std::max(c.residual, std::abs(el[n] - c.lambda));
    c.critical = c.residual <= tol * c.scale + 1e-12;
    return c;
}

} // namespace

double functional_value(const SurfaceSample& s, const EnergyDensity& E, bool allow_open)
{
    check_guard(s, E);
    Eigen::VectorXd e(s.size());
    for (int n = 0; n < s.size(); ++n) {
        const auto& c = s.geometry(n).scalars;
        e[n] = E(c.H, c.K);
    }
    return weighted_sum(quadrature_weights(s, allow_open), e);
}

namespace {

// δF and ∫ of the absolute values of its pointwise terms.
std::pair<double, double> first_variation_parts(const SurfaceSample& s, const EnergyDensity& E, const ScalarField& u)
{
    check_domain(s, u);
    check_guard(s, E);
    check_compact_support(s, u);
    const double k0 = s.space_form().k0();
    Eigen::VectorXd f(s.size()), m(s.size());
    parallel_for(s.size(), [&](int n) {
        const NodeGeometry& g = s.geometry(n);
        const double H = g.scalars.H, K = g.scalars.K;
        const auto v = E.at(H, K);
        const UData d = u_data(g, u.node_jet(n, 2));
        const double A = 2.0 * H * H - K + 2.0 * k0;
        const std::array<double, 6> t = {v.EH * 0.5 * d.lap, v.EH * d.u * A, v.EK * 2.0 * H * d.lap,
                                         -v.EK * d.h_hess, v.EK * 2.0 * H * K * d.u, -2.0 * H * v.E * d.u};
        f[n] = t[0] + t[1] + t[2] + t[3] + t[4] + t[5];
        m[n] = 0.0;
        for (double x : t) m[n] += std::abs(x);
    });
    const Eigen::VectorXd w = weights(s);
    return {weighted_sum(w, f), weighted_sum(w, m)};
}

} // namespace

double first_variation(const SurfaceSample& s, const EnergyDensity& E, const ScalarField& u)
{
    return first_variation_parts(s, E, u).first;
}

ScalarField el_residual(const SurfaceSample& s, const EnergyDensity& E)
{
    check_guard(s, E);
    Eigen::VectorXd el(s.size());
    parallel_for(s.size(), [&](int n) { el[n] = el_terms(s, E, n).sum(); });
    return ScalarField::from_values(s.domain(), std::move(el));
}

ScalarField el_scale(const SurfaceSample& s, const EnergyDensity& E)
{
    check_guard(s, E);
    Eigen::VectorXd sc(s.size());
    parallel_for(s.size(), [&](int n) { sc[n] = el_terms(s, E, n).abs_sum(); });
    return ScalarField::from_values(s.domain(), std::move(sc));
}

SecondVariationResult second_variation(const SurfaceSample& s, const EnergyDensity& E, const ScalarField& u,
                                       const SecondVariationOptions& opt)
{
    check_domain(s, u);
    check_guard(s, E);
    check_compact_support(s, u);

    const Criticality c = criticality(s, E, opt.volume_constrained, opt.tolerance);
    SecondVariationResult r;
    r.lambda = c.lambda;
    r.criticality_residual = c.residual;
    r.criticality_scale = c.scale;
    r.critical = c.critical;
    if (!c.critical && !opt.force) {
        std::ostringstream os;
        os << "second variation requires a critical immersion: sup|EL - lambda| = " << c.residual
           << " exceeds " << opt.tolerance << " x " << c.scale << " (lambda = " << c.lambda << ")";
        if (!opt.volume_constrained) os << "; try the volume-constrained mode";
        throw NumericalError(os.str());
    }
    r.validity = !c.critical ? "formula outside stated validity"
                 : opt.volume_constrained ? "volume-constrained critical" : "critical";

    const double k0 = s.space_form().k0();
    const int N = s.size();
    std::vector<std::array<double, SecondVariationResult::kTerms>> I(N);
    Eigen::VectorXd Hu2(N);
    parallel_for(N, [&](int n) {
        const NodeGeometry& g = s.geometry(n);
        const double H = g.scalars.H, K = g.scalars.K;
        const auto e = E.at(H, K);
        const UData d = u_data(g, u.node_jet(n, 2));
        const double A = 2.0 * H * H - K + 2.0 * k0;
        auto& t = I[n];
        t[0] = (0.25 * e.EHH + 2.0 * H * e.EHK + 4.0 * H * H * e.EKK + e.EK) * d.lap * d.lap;
        t[1] = e.EKK * d.h_hess * d.h_hess;
        t[2] = -(e.EHK + 4.0 * H * e.EKK) * d.lap * d.h_hess;
        t[3] = e.EK * (d.u * d.dK - 3.0 * d.u * d.h2_hess - 2.0 * d.h2_grad - d.hess_sq);
        t[4] = (A * e.EHH + 2.0 * H * (4.0 * H * H - K + 4.0 * k0) * e.EHK + 8.0 * H * H * K * e.EKK -
                2.0 * H * e.EH + (3.0 * k0 - K) * e.EK - e.E) * d.u * d.lap;
        t[5] = (A * A * e.EHH + 4.0 * H * K * A * e.EHK + 4.0 * H * H * K * K * e.EKK -
                2.0 * K * (K - 2.0 * k0) * e.EK - 2.0 * H * K * e.EH + 2.0 * (K - 2.0 * k0) * e.E) * d.u * d.u;
        t[6] = (2.0 * e.EH + 6.0 * H * e.EK - 2.0 * A * e.EHK - 4.0 * H * K * e.EKK) * d.u * d.h_hess;
        t[7] = (e.EH + 4.0 * H * e.EK) * d.h_grad;
        t[8] = e.EH * d.u * d.dH;
        t[9] = -(2.0 * (K - k0) * e.EK + H * e.EH) * d.grad_sq;
        Hu2[n] = H * d.u * d.u;
    });
    const Eigen::VectorXd w = weights(s);
    Eigen::VectorXd col(N);
    for (int k = 0; k < SecondVariationResult::kTerms; ++k) {
        for (int n = 0; n < N; ++n) col[n] = I[n][k];
        r.terms[k] = weighted_sum(w, col);
    }
    Eigen::VectorXd total(N);
    for (int n = 0; n < N; ++n) {
        double a = 0.0;
        for (double x : I[n]) a += x;
        total[n] = a;
    }
    r.value = weighted_sum(w, total);
    r.augmented = r.value + 2.0 * r.lambda * weighted_sum(w, Hu2);
    return r;
}

double enclosed_volume(const SurfaceSample& s)
{
    if (s.space_form().model() != SpaceForm::Model::Euclidean)
        throw ValidationError("enclosed volume is only available for surfaces in R^3");
    if (!s.domain().closed()) throw ValidationError("enclosed volume needs a closed surface");
    Eigen::VectorXd f(s.size());
    for (int n = 0; n < s.size(); ++n) {
        const NodeGeometry& g = s.geometry(n);
        f[n] = g.position.head<3>().dot(g.forms.N.head<3>()) / 3.0;
    }
    return weighted_sum(quadrature_weights(s), f);
}

double default_deformation_step(const SurfaceSample& s, const ScalarField& u)
{
    const double m = u.max_abs();
    if (!(m > 0.0)) throw ValidationError("variation field is identically zero");
    double R = s.min_curvature_radius();
    if (!std::isfinite(R)) R = 1.0;
    return 1e-3 * R / m;
}

namespace {

double convergence_order(double e1, double e2, double floor)
{
    if (e1 <= floor && e2 <= floor) return std::numeric_limits<double>::infinity();
    if (e2 <= 0.0) return std::numeric_limits<double>::infinity();
    return std::log2(e1 / e2);
}

} // namespace

namespace {

// Formula side of the oracle for one density.
VariationReport oracle_formula(const SurfaceSample& s, const EnergyDensity& E, const ScalarField& u, int order,
                               const OracleOptions& opt, double& scale_floor)
{
    VariationReport rep;
    rep.order = order;
    rep.quantity = E.name;
    if (order == 1) {
        const auto [v, m] = first_variation_parts(s, E, u);
        rep.formula_value = v;
        // Zero-formula cases (H^p, p > 2, on minimal surfaces) fall back to a curvature-weighted mass.
        double kmax = 0.0;
        Eigen::VectorXd a(s.size());
        for (int n = 0; n < s.size(); ++n) {
            kmax = std::max({kmax, std::abs(s.geometry(n).scalars.kappa1), std::abs(s.geometry(n).scalars.kappa2)});
            a[n] = std::abs(laplacian(u.node_jet(n, 2), s.geometry(n).forms));
        }
        Eigen::VectorXd b = a;
        for (int n = 0; n < s.size(); ++n) b[n] += kmax * kmax * std::abs(u[n]);
        scale_floor = std::max(m, weighted_sum(weights(s), b));
        return rep;
    }
    SecondVariationOptions so = opt.second;
    so.force = true;
    if (opt.lambda && *opt.lambda != 0.0) so.volume_constrained = true;
    SecondVariationResult sv = second_variation(s, E, u, so);
    if (!sv.critical && !opt.second.force && !so.volume_constrained) {
        // Fall back to the volume-constrained multiplier when EL is constant.
        so.volume_constrained = true;
        sv = second_variation(s, E, u, so);
        if (!sv.critical) throw NumericalError("surface is not critical for '" + E.name + "', not even for F - lambda V");
    } else if (!sv.critical && !opt.second.force) {
        throw NumericalError("surface is not critical for F - lambda V");
    }
    rep.lambda = opt.lambda.value_or(sv.lambda);
    rep.validity = sv.validity;
    Eigen::VectorXd hu2(s.size()), lap2(s.size());
    for (int n = 0; n < s.size(); ++n) {
        hu2[n] = s.geometry(n).scalars.H * u[n] * u[n];
        const double l = laplacian(u.node_jet(n, 2), s.geometry(n).forms);
        lap2[n] = l * l;
    }
    const Eigen::VectorXd w = weights(s);
    rep.augmented_formula = sv.value + 2.0 * rep.lambda * weighted_sum(w, hu2);
    rep.formula_value = opt.compare_augmented ? rep.augmented_formula : sv.value;
    scale_floor = 0.0;
    for (double t : sv.terms) scale_floor += std::abs(t);
    // Densities whose Hessian vanishes on the surface give a zero formula;
    // measure against the bending scale ∫(Δu)² instead.
    scale_floor = std::max(scale_floor, weighted_sum(w, lap2));
    return rep;
}

} // namespace

std::vector<VariationReport> fd_variation_oracle(const SurfaceSample& s, const std::vector<EnergyDensity>& Es,
                                                 const ScalarField& u, int order, const OracleOptions& opt)
{
    if (order != 1 && order != 2) throw ValidationError("variation order must be 1 or 2");
    check_domain(s, u);
    check_compact_support(s, u);
    const bool open = !s.domain().closed();
    const bool euclid = s.space_form().model() == SpaceForm::Model::Euclidean;

    const int nd = static_cast<int>(Es.size());
    std::vector<VariationReport> reps(nd);
    std::vector<double> floors(nd);
    for (int i = 0; i < nd; ++i) {
        reps[i] = oracle_formula(s, Es[i], u, order, opt, floors[i]);
        if (reps[i].lambda != 0.0 && !euclid)
            throw ValidationError("volume multiplier is only supported for surfaces in R^3");
        if (reps[i].lambda != 0.0 && open) throw ValidationError("volume multiplier needs a closed surface");
    }

    const double h1 = opt.step.value_or(default_deformation_step(s, u));
    const double h2 = 0.5 * h1;

    DeformationFamily fam(s, u);
    const Eigen::VectorXd wu = quadrature_weights_u(s.domain()), wv = quadrature_weights_v(s.domain());
    // F_i(t) - λ_i V(t) for every density.
    auto F = [&](double t) {
        const DeformedScalars d = fam.scalars_at(t);
        Eigen::VectorXd w(s.size()), e(s.size()), x(s.size());
        for (int n = 0; n < s.size(); ++n) {
            w[n] = wu[s.domain().node_i(n)] * wv[s.domain().node_j(n)] * d.dS_weight[n];
            x[n] = euclid ? d.position[n].head<3>().dot(d.N[n].head<3>()) / 3.0 : 0.0;
        }
        const double vol = weighted_sum(w, x);
        std::vector<double> out(nd);
        for (int i = 0; i < nd; ++i) {
            for (int n = 0; n < s.size(); ++n) {
                if (!Es[i].admissible(d.H[n], d.K[n]))
                    throw NumericalError("density '" + Es[i].name + "' requires " + Es[i].guard_description +
                                         " along the deformation; violated at " + node_label(s, n));
                e[n] = Es[i](d.H[n], d.K[n]);
            }
            out[i] = weighted_sum(w, e) - reps[i].lambda * vol;
        }
        return out;
    };
    const auto fp1 = F(h1), fm1 = F(-h1), fp2 = F(h2), fm2 = F(-h2);
    std::vector<double> f0(nd, 0.0);
    if (order == 2) f0 = F(0.0);

    for (int i = 0; i < nd; ++i) {
        VariationReport& rep = reps[i];
        rep.h1 = h1;
        rep.h2 = h2;
        double d1, d2, fscale;
        if (order == 1) {
            d1 = (fp1[i] - fm1[i]) / (2.0 * h1);
            d2 = (fp2[i] - fm2[i]) / (2.0 * h2);
            fscale = std::max(std::abs(fp1[i]), std::abs(fm1[i])) / h2;
        } else {
            d1 = (fp1[i] - 2.0 * f0[i] + fm1[i]) / (h1 * h1);
            d2 = (fp2[i] - 2.0 * f0[i] + fm2[i]) / (h2 * h2);
            fscale = std::abs(f0[i]) / (h2 * h2);
        }
        rep.oracle_value = (4.0 * d2 - d1) / 3.0;
        rep.abs_error = std::abs(rep.oracle_value - rep.formula_value);
        const double denom = std::max({std::abs(rep.formula_value), std::abs(rep.oracle_value), 1e-3 * floors[i],
                                       std::numeric_limits<double>::min()});
        rep.rel_error = rep.abs_error / denom;
        const double noise = 1e3 * std::numeric_limits<double>::epsilon() * fscale;
        rep.convergence_order =
            convergence_order(std::abs(d1 - rep.formula_value), std::abs(d2 - rep.formula_value), noise);
    }
    return reps;
}

VariationReport fd_variation_oracle(const SurfaceSample& s, const EnergyDensity& E, const ScalarField& u, int order,
                                    const OracleOptions& opt)
{
    return fd_variation_oracle(s, std::vector<EnergyDensity>{E}, u, order, opt).front();
}

EvolutionQuantity parse_evolution_quantity(const std::string& name)
{
    for (EvolutionQuantity q : all_evolution_quantities())
        if (to_string(q) == name) return q;
    throw ValidationError("unknown quantity '" + name +
                          "' (expected metric, inverse_metric, area_element, 2H, K, laplacian_f or h_hess_f)");
}

std::string to_string(EvolutionQuantity q)
{
    switch (q) {
    case EvolutionQuantity::Metric: return "metric";
    case EvolutionQuantity::InverseMetric: return "inverse_metric";
    case EvolutionQuantity::AreaElement: return "area_element";
    case EvolutionQuantity::MeanCurvature2H: return "2H";
    case EvolutionQuantity::GaussCurvature: return "K";
    case EvolutionQuantity::LaplacianF: return "laplacian_f";
    case EvolutionQuantity::HHessF: return "h_hess_f";
    }
    return "";
}

std::vector<EvolutionQuantity> all_evolution_quantities()
{
    return {EvolutionQuantity::Metric,          EvolutionQuantity::InverseMetric, EvolutionQuantity::AreaElement,
            EvolutionQuantity::MeanCurvature2H, EvolutionQuantity::GaussCurvature, EvolutionQuantity::LaplacianF,
            EvolutionQuantity::HHessF};
}

namespace {

using Components = std::array<double, 3>;

int component_count(EvolutionQuantity q)
{
    return (q == EvolutionQuantity::Metric || q == EvolutionQuantity::InverseMetric) ? 3 : 1;
}

Components sym(const Eigen::Matrix2d& m) { return {m(0, 0), m(0, 1), m(1, 1)}; }

// Quantity at a node of a (possibly deformed) sample.
Components quantity_at(const NodeGeometry& g, EvolutionQuantity q, const Taylor& fj)
{
    const FundamentalForms& ff = g.forms;
    switch (q) {
    case EvolutionQuantity::Metric: return sym(ff.g);
    case EvolutionQuantity::InverseMetric: return sym(ff.g_inv);
    case EvolutionQuantity::AreaElement: return {ff.dS_weight, 0, 0};
    case EvolutionQuantity::MeanCurvature2H: return {2.0 * g.scalars.H, 0, 0};
    case EvolutionQuantity::GaussCurvature: return {g.scalars.K, 0, 0};
    case EvolutionQuantity::LaplacianF: return {laplacian(fj, ff), 0, 0};
    case EvolutionQuantity::HHessF: return {contract(ff.h, covariant_hessian(fj, ff), ff.g_inv), 0, 0};
    }
    return {};
}

// First-order change and the absolute size of its terms.
std::pair<Components, double> quantity_rate(const NodeGeometry& g, EvolutionQuantity q, const Taylor& uj,
                                            const Taylor& fj, double k0)
{
    const FundamentalForms& ff = g.forms;
    const double H = g.scalars.H, K = g.scalars.K;
    const double u = uj.value();
    switch (q) {
    case EvolutionQuantity::Metric: {
        const Eigen::Matrix2d d = -2.0 * u * ff.h;
        return {sym(d), d.cwiseAbs().maxCoeff()};
    }
    case EvolutionQuantity::InverseMetric: {
        const Eigen::Matrix2d d = 2.0 * u * ff.g_inv * ff.h * ff.g_inv;
        return {sym(d), d.cwiseAbs().maxCoeff()};
    }
    case EvolutionQuantity::AreaElement: {
        const double d = -2.0 * H * u * ff.dS_weight;
        return {{d, 0, 0}, 2.0 * std::abs(u) * ff.dS_weight * std::sqrt(g.scalars.h_norm_sq)};
    }
    default: break;
    }
    const UData d = u_data(g, uj);
    const double A = 2.0 * H * H - K + 2.0 * k0;
    std::vector<double> t;
    switch (q) {
    case EvolutionQuantity::MeanCurvature2H: t = {d.lap, 2.0 * u * A}; break;
    case EvolutionQuantity::GaussCurvature: t = {2.0 * H * d.lap, -d.h_hess, 2.0 * H * K * u}; break;
    case EvolutionQuantity::LaplacianF:
    case EvolutionQuantity::HHessF: {
        const Eigen::Vector2d df = chart_gradient(fj);
        const Eigen::Vector2d du = chart_gradient(uj);
        const Eigen::Vector2d fp = ff.g_inv * df, up = ff.g_inv * du;
        const Eigen::Matrix2d Hf = covariant_hessian(fj, ff);
        const Eigen::Matrix2d h2 = h_squared(ff);
        const double grad_uf = du.dot(fp);
        if (q == EvolutionQuantity::LaplacianF) {
            t = {2.0 * u * contract(ff.h, Hf, ff.g_inv), 2.0 * u * chart_gradient(g.H).dot(fp), 2.0 * up.dot(ff.h * fp),
                 -2.0 * H * grad_uf};
        } else {
            const Eigen::Matrix2d Hu = covariant_hessian(uj, ff);
            t = {contract(Hu, Hf, ff.g_inv),
                 3.0 * u * contract(h2, Hf, ff.g_inv),
                 u * k0 * (ff.g_inv * Hf).trace(),
                 2.0 * up.dot(h2 * fp),
                 0.5 * u * chart_gradient(g.h_norm_sq).dot(fp),
                 -g.scalars.h_norm_sq * grad_uf};
        }
        break;
    }
    default: break;
    }
    double sum = 0.0, mag = 0.0;
    for (double x : t) {
        sum += x;
        mag += std::abs(x);
    }
    return {{sum, 0, 0}, mag};
}

} // namespace

std::vector<VariationReport> evolution_check(const SurfaceSample& s, const ScalarField& u,
                                            const std::vector<EvolutionQuantity>& qs, const ScalarField* f,
                                            std::optional<double> step)
{
    check_domain(s, u);
    bool needs_f = false;
    for (EvolutionQuantity q : qs) {
        if (q != EvolutionQuantity::LaplacianF && q != EvolutionQuantity::HHessF) continue;
        needs_f = true;
        if (!f) throw ValidationError("quantity '" + to_string(q) + "' needs a test function f");
    }
    if (needs_f) check_domain(s, *f);
    const int N = s.size(), nq = static_cast<int>(qs.size());
    const double k0 = s.space_form().k0();
    const double h1 = step.value_or(default_deformation_step(s, u)), h2 = 0.5 * h1;

    auto f_jet = [&](int n) { return needs_f ? f->node_jet(n, 2) : Taylor::constant(0.0, 2); };

    DeformationFamily fam(s, u);
    const SurfaceSample sp1 = fam.at(h1), sm1 = fam.at(-h1), sp2 = fam.at(h2), sm2 = fam.at(-h2);

    std::vector<VariationReport> reps(nq);
    for (int iq = 0; iq < nq; ++iq) {
        const EvolutionQuantity q = qs[iq];
        const int nc = component_count(q);
        std::vector<Components> formula(N), dq1(N), dq2(N), q0(N);
        std::vector<double> mag(N);
        parallel_for(N, [&](int n) {
            const Taylor fj = f_jet(n);
            auto [rate, m] = quantity_rate(s.geometry(n), q, u.node_jet(n, 2), fj, k0);
            formula[n] = rate;
            mag[n] = m;
            q0[n] = quantity_at(s.geometry(n), q, fj);
            const Components a = quantity_at(sp1.geometry(n), q, fj), b = quantity_at(sm1.geometry(n), q, fj);
            const Components c = quantity_at(sp2.geometry(n), q, fj), d = quantity_at(sm2.geometry(n), q, fj);
            for (int k = 0; k < 3; ++k) {
                dq1[n][k] = (a[k] - b[k]) / (2.0 * h1);
                dq2[n][k] = (c[k] - d[k]) / (2.0 * h2);
            }
        });

        VariationReport& rep = reps[iq];
        rep.quantity = to_string(q);
        rep.order = 1;
        rep.h1 = h1;
        rep.h2 = h2;
        double scale = 0.0, e1 = 0.0, e2 = 0.0, qscale = 0.0;
        for (int n = 0; n < N; ++n) {
            scale = std::max(scale, mag[n]);
            for (int k = 0; k < nc; ++k) {
                const double rich = (4.0 * dq2[n][k] - dq1[n][k]) / 3.0;
                rep.abs_error = std::max(rep.abs_error, std::abs(rich - formula[n][k]));
                rep.formula_value = std::max(rep.formula_value, std::abs(formula[n][k]));
                rep.oracle_value = std::max(rep.oracle_value, std::abs(rich));
                e1 = std::max(e1, std::abs(dq1[n][k] - formula[n][k]));
                e2 = std::max(e2, std::abs(dq2[n][k] - formula[n][k]));
                qscale = std::max(qscale, std::abs(q0[n][k]));
            }
        }
        scale = std::max(scale, std::numeric_limits<double>::min());
        rep.rel_error = rep.abs_error / scale;
        const double noise = 1e3 * std::numeric_limits<double>::epsilon() * std::max(qscale, 1.0) / h2;
        rep.convergence_order = convergence_order(e1, e2, noise);
    }
    return reps;
}

VariationReport evolution_check(const SurfaceSample& s, const ScalarField& u, EvolutionQuantity q,
                                const ScalarField* f, std::optional<double> step)
{
    return evolution_check(s, u, std::vector<EvolutionQuantity>{q}, f, step).front();
}

} // namespace curvevar
