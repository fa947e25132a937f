#include "curvevar/curvature.hpp"

#include "curvevar/error.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>

namespace curvevar {

namespace {

Taylor det3(const Taylor& a0, const Taylor& a1, const Taylor& a2, const Taylor& b0, const Taylor& b1, const Taylor& b2,
            const Taylor& c0, const Taylor& c1, const Taylor& c2)
{
    return a0 * (b1 * c2 - b2 * c1) - a1 * (b0 * c2 - b2 * c0) + a2 * (b0 * c1 - b1 * c0);
}

PointJet raw_normal(const PointJet& x, const PointJet& a, const PointJet& b, const SpaceForm& sf)
{
    PointJet n;
    if (sf.ambient_dim() == 3) {
        n[0] = a[1] * b[2] - a[2] * b[1];
        n[1] = a[2] * b[0] - a[0] * b[2];
        n[2] = a[0] * b[1] - a[1] * b[0];
        n[3] = Taylor::constant(0.0, n[0].order());
        return n;
    }
    // n_i = det(e_i; x; a; b): orthogonal (Euclidean) to x, a, b.
    static constexpr int cols[4][3] = {{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}};
    for (int i = 0; i < 4; ++i) {
        const auto& c = cols[i];
        const Taylor m = det3(x[c[0]], x[c[1]], x[c[2]], a[c[0]], a[c[1]], a[c[2]], b[c[0]], b[c[1]], b[c[2]]);
        n[i] = (i % 2 == 0) ? m : -m;
        // lowering with the ambient form makes n orthogonal in that form
        n[i] *= sf.metric_sign(i);
    }
    return n;
}

AmbientVector values(const PointJet& p)
{
    return {p[0].value(), p[1].value(), p[2].value(), p[3].value()};
}

void check_metric(double g11, double g12, double g22)
{
    const double det = g11 * g22 - g12 * g12;
    const double scale = std::max(std::abs(g11), std::abs(g22));
    if (!(det > 1e-14 * scale * scale) || !(scale > 0.0)) throw NumericalError("degenerate metric");
}

FundamentalForms forms_from_frame(const LocalFrame& f, const SpaceForm& sf)
{
    FundamentalForms ff;
    ff.g << f.g[0].value(), f.g[1].value(), f.g[1].value(), f.g[2].value();
    check_metric(ff.g(0, 0), ff.g(0, 1), ff.g(1, 1));
    ff.g_inv = ff.g.inverse();
    ff.h << f.h[0].value(), f.h[1].value(), f.h[1].value(), f.h[2].value();
    ff.N = values(f.N);
    ff.dS_weight = std::sqrt(ff.g.determinant());

    // Γ_{ij,l} = <r_ij, r_l>; the quadric-normal part of r_ij is orthogonal to r_l.
    std::array<PointJet, 2> tangents = {f.r_u, f.r_v};
    std::array<AmbientVector, 3> second; // r_uu, r_uv, r_vv
    for (int c = 0; c < 4; ++c) {
        second[0][c] = f.r_u[c].order() >= 1 ? f.r_u[c].du().value() : 0.0;
        second[1][c] = f.r_u[c].order() >= 1 ? f.r_u[c].dv().value() : 0.0;
        second[2][c] = f.r_v[c].order() >= 1 ? f.r_v[c].dv().value() : 0.0;
    }
    const AmbientVector tu = values(tangents[0]), tv = values(tangents[1]);
    auto second_at = [&](int i, int j) -> const AmbientVector& { return second[i + j]; };
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            const Eigen::Vector2d lowered(sf.dot(second_at(i, j), tu), sf.dot(second_at(i, j), tv));
            const Eigen::Vector2d raised = ff.g_inv * lowered;
            ff.gamma[0](i, j) = raised[0];
            ff.gamma[1](i, j) = raised[1];
        }
    }
    return ff;
}

struct MetricJets {
    std::array<Taylor, 3> g;     // g11 g12 g22
    std::array<Taylor, 3> g_inv; // g^11 g^12 g^22
};

MetricJets metric_jets(const ImmersionJet& jet, const SpaceForm& sf)
{
    PointJet ru, rv;
    for (int c = 0; c < 4; ++c) {
        ru[c] = jet.position[c].du();
        rv[c] = jet.position[c].dv();
    }
    MetricJets m;
    m.g = {sf.dot(ru, ru), sf.dot(ru, rv), sf.dot(rv, rv)};
    check_metric(m.g[0].value(), m.g[1].value(), m.g[2].value());
    const Taylor inv_det = inverse(m.g[0] * m.g[2] - m.g[1] * m.g[1]);
    m.g_inv = {m.g[2] * inv_det, -m.g[1] * inv_det, m.g[0] * inv_det};
    return m;
}

const Taylor& sym(const std::array<Taylor, 3>& t, int i, int j) { return t[i + j]; }

Taylor partial(const Taylor& t, int k) { return k == 0 ? t.du() : t.dv(); }

// gamma[k][i][j] = Γ^k_ij as jets, from metric derivatives only.
std::array<std::array<std::array<Taylor, 2>, 2>, 2> christoffel_jets(const MetricJets& m)
{
    std::array<std::array<std::array<Taylor, 2>, 2>, 2> lowered{}; // lowered[l][i][j] = Γ_{ij,l}
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int l = 0; l < 2; ++l)
                lowered[l][i][j] =
                    0.5 * (partial(sym(m.g, j, l), i) + partial(sym(m.g, i, l), j) - partial(sym(m.g, i, j), l));
    std::array<std::array<std::array<Taylor, 2>, 2>, 2> gamma{};
    for (int k = 0; k < 2; ++k)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                gamma[k][i][j] = sym(m.g_inv, k, 0) * lowered[0][i][j] + sym(m.g_inv, k, 1) * lowered[1][i][j];
    return gamma;
}

} // namespace

AmbientVector ImmersionJet::partial(int a, int b) const
{
    return {position[0].partial(a, b), position[1].partial(a, b), position[2].partial(a, b),
            position[3].partial(a, b)};
}

LocalFrame local_frame(const PointJet& r, const SpaceForm& sf, int normal_sign)
{
    LocalFrame f;
    for (int c = 0; c < 4; ++c) {
        f.r_u[c] = r[c].du();
        f.r_v[c] = r[c].dv();
    }
    f.g = {sf.dot(f.r_u, f.r_u), sf.dot(f.r_u, f.r_v), sf.dot(f.r_v, f.r_v)};
    check_metric(f.g[0].value(), f.g[1].value(), f.g[2].value());

    PointJet n = raw_normal(r, f.r_u, f.r_v, sf);
    const Taylor norm2 = sf.dot(n, n);
    if (!(norm2.value() > 0.0)) throw NumericalError("degenerate metric: normal vanishes");
    const Taylor scale = normal_sign * inverse(sqrt(norm2));
    for (int c = 0; c < 4; ++c) f.N[c] = n[c] * scale;

    if (f.r_u[0].order() >= 1) {
        PointJet ruu, ruv, rvv;
        for (int c = 0; c < 4; ++c) {
            ruu[c] = f.r_u[c].du();
            ruv[c] = f.r_u[c].dv();
            rvv[c] = f.r_v[c].dv();
        }
        f.h = {sf.dot(f.N, ruu), sf.dot(f.N, ruv), sf.dot(f.N, rvv)};
    }
    return f;
}

FundamentalForms fundamental_forms(const ImmersionJet& jet, const SpaceForm& sf, int normal_sign)
{
    if (jet.order() < 2) throw ValidationError("fundamental forms need a position jet of order >= 2");
    return forms_from_frame(local_frame(jet.position, sf, normal_sign), sf);
}

CurvatureScalars curvature_scalars(const FundamentalForms& ff, const SpaceForm& sf)
{
    const Eigen::Matrix2d S = ff.g_inv * ff.h;
    CurvatureScalars cs;
    cs.H = 0.5 * S.trace();
    cs.K_E = S.determinant();
    cs.K = cs.K_E + sf.k0();
    cs.h_norm_sq = (S * S).trace();
    const double disc = std::sqrt(std::max(cs.H * cs.H - cs.K_E, 0.0));
    cs.kappa1 = cs.H + disc;
    cs.kappa2 = cs.H - disc;
    return cs;
}

NodeGeometry node_geometry(const ImmersionJet& jet, const SpaceForm& sf, int normal_sign)
{
    if (jet.order() < 2) throw ValidationError("node geometry needs a position jet of order >= 2");
    const LocalFrame f = local_frame(jet.position, sf, normal_sign);
    NodeGeometry ng;
    ng.position = values(jet.position);
    ng.forms = forms_from_frame(f, sf);
    ng.scalars = curvature_scalars(ng.forms, sf);

    // Shape operator S = g^{-1} h as jets.
    const Taylor inv_det = inverse(f.g[0] * f.g[2] - f.g[1] * f.g[1]);
    const Taylor gi11 = f.g[2] * inv_det, gi12 = -f.g[1] * inv_det, gi22 = f.g[0] * inv_det;
    const Taylor s11 = gi11 * f.h[0] + gi12 * f.h[1];
    const Taylor s12 = gi11 * f.h[1] + gi12 * f.h[2];
    const Taylor s21 = gi12 * f.h[0] + gi22 * f.h[1];
    const Taylor s22 = gi12 * f.h[1] + gi22 * f.h[2];
    ng.H = 0.5 * (s11 + s22);
    ng.K = s11 * s22 - s12 * s21 + sf.k0();
    ng.h_norm_sq = s11 * s11 + 2.0 * s12 * s21 + s22 * s22;
    return ng;
}

double intrinsic_gauss_curvature(const ImmersionJet& jet, const SpaceForm& sf)
{
    if (jet.order() < 3) throw ValidationError("intrinsic curvature needs a position jet of order >= 3");
    const MetricJets m = metric_jets(jet, sf);
    const auto G = christoffel_jets(m);
    // -g11 K = (Γ²₁₂)_u - (Γ²₁₁)_v + Γ¹₁₂Γ²₁₁ + Γ²₁₂Γ²₁₂ - Γ²₁₁Γ²₂₂ - Γ¹₁₁Γ²₁₂
    const double rhs = G[1][0][1].du().value() - G[1][0][0].dv().value() +
                       G[0][0][1].value() * G[1][0][0].value() + G[1][0][1].value() * G[1][0][1].value() -
                       G[1][0][0].value() * G[1][1][1].value() - G[0][0][0].value() * G[1][0][1].value();
    return -rhs / m.g[0].value();
}

double intrinsic_gauss_curvature(const ImmersionJet& jet) { return intrinsic_gauss_curvature(jet, SpaceForm{}); }

double codazzi_defect(const ImmersionJet& jet, const SpaceForm& sf, int normal_sign)
{
    if (jet.order() < 3) throw ValidationError("Codazzi check needs a position jet of order >= 3");
    const LocalFrame f = local_frame(jet.position, sf, normal_sign);
    const MetricJets m = metric_jets(jet, sf);
    const auto G = christoffel_jets(m);
    auto nabla_h = [&](int k, int i, int j) {
        double v = partial(sym(f.h, i, j), k).value();
        for (int s = 0; s < 2; ++s)
            v -= G[s][k][i].value() * sym(f.h, s, j).value() + G[s][k][j].value() * sym(f.h, i, s).value();
        return v;
    };
    double defect = 0.0;
    for (int k = 0; k < 2; ++k)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) defect = std::max(defect, std::abs(nabla_h(k, i, j) - nabla_h(j, i, k)));
    return defect;
}

double gauss_equation_defect(const ImmersionJet& jet, const SpaceForm& sf, int normal_sign, bool include_ambient)
{
    const double K_intrinsic = intrinsic_gauss_curvature(jet, sf);
    const CurvatureScalars cs = curvature_scalars(fundamental_forms(jet, sf, normal_sign), sf);
    return std::abs(K_intrinsic - cs.K_E - (include_ambient ? sf.k0() : 0.0));
}

} // namespace curvevar
