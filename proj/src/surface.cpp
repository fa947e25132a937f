#include "curvevar/surface.hpp"

#include "curvevar/error.hpp"
#include "curvevar/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>

namespace curvevar {

namespace {

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

// Centered weights (accuracy 4) for the k-th derivative, unit spacing.
const std::vector<double>& central_weights(int k)
{
    static const std::array<std::vector<double>, 5> table = [] {
        std::array<std::vector<double>, 5> t;
        for (int k = 0; k <= 4; ++k) {
            const int m = k == 0 ? 0 : (k <= 2 ? 2 : 3);
            std::vector<double> x;
            for (int i = -m; i <= m; ++i) x.push_back(i);
            const Eigen::VectorXd w = fornberg_weights(0.0, x, k);
            t[k].assign(w.data(), w.data() + w.size());
        }
        return t;
    }();
    return table[k];
}

constexpr double kStepScale[5] = {1.0, 1.0, 1.0, 4.0, 8.0};

// All partials of total order k at one step size.
void fd_level(const PointMap& f, double u, double v, int k, double hu, double hv, std::vector<AmbientVector>& out)
{
    const int m = k == 0 ? 0 : (k <= 2 ? 2 : 3);
    const int w = 2 * m + 1;
    std::vector<AmbientVector> grid(w * w);
    for (int j = -m; j <= m; ++j)
        for (int i = -m; i <= m; ++i) grid[(i + m) + w * (j + m)] = f(u + i * hu, v + j * hv);
    for (int a = k; a >= 0; --a) {
        const int b = k - a;
        const auto& wa = central_weights(a);
        const auto& wb = central_weights(b);
        const int ma = (static_cast<int>(wa.size()) - 1) / 2, mb = (static_cast<int>(wb.size()) - 1) / 2;
        AmbientVector d = AmbientVector::Zero();
        for (int j = -mb; j <= mb; ++j)
            for (int i = -ma; i <= ma; ++i) {
                const double c = wa[i + ma] * wb[j + mb];
                if (c != 0.0) d += c * grid[(i + m) + w * (j + m)];
            }
        d /= std::pow(hu, a) * std::pow(hv, b);
        out[Taylor::index(a, b)] = d;
    }
}

void check_params(const std::string& name, const ParamMap& params, const std::set<std::string>& allowed)
{
    for (const auto& [k, v] : params) {
        if (!allowed.count(k)) {
            std::string list;
            for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
            throw ValidationError("unknown parameter '" + k + "' for surface '" + name + "' (expected one of: " +
                                  (list.empty() ? "none" : list) + ")");
        }
        if (!std::isfinite(v)) throw ValidationError("parameter '" + k + "' must be finite");
    }
}

double get(const ParamMap& p, const std::string& key, double fallback)
{
    const auto it = p.find(key);
    return it == p.end() ? fallback : it->second;
}

void require_model(const std::string& name, const SpaceForm& sf, SpaceForm::Model model)
{
    if (sf.model() == model) return;
    const char* what = model == SpaceForm::Model::Euclidean ? "Euclidean space (k0 = 0)"
                       : model == SpaceForm::Model::Sphere  ? "the 3-sphere (k0 > 0)"
                                                            : "hyperbolic space (k0 < 0)";
    throw ValidationError("surface '" + name + "' lives in " + what);
}

// Unit sphere point (sin θ cos φ, sin θ sin φ, cos θ) as jets in (φ, θ).
std::array<Taylor, 3> omega(const Taylor& phi, const Taylor& theta)
{
    const Taylor st = sin(theta);
    return {st * cos(phi), st * sin(phi), cos(theta)};
}

PointJet point(const Taylor& x, const Taylor& y, const Taylor& z, const Taylor& w)
{
    return {x, y, z, w};
}

JetMap catalog_map(const std::string& name, const ParamMap& params, const SpaceForm& sf)
{
    using M = SpaceForm::Model;
    if (name == "sphere") {
        check_params(name, params, {"r"});
        require_model(name, sf, M::Euclidean);
        const double r = get(params, "r", 1.0);
        if (!(r > 0.0)) throw ValidationError("sphere radius r must be positive");
        return [r](double u, double v, int order) {
            const auto w = omega(Taylor::variable_u(u, order), Taylor::variable_v(v, order));
            return point(r * w[0], r * w[1], r * w[2], Taylor::constant(0.0, order));
        };
    }
    if (name == "torus") {
        check_params(name, params, {"R", "a"});
        require_model(name, sf, M::Euclidean);
        const double R = get(params, "R", 2.0), a = get(params, "a", 1.0);
        if (!(a > 0.0) || !(R > a)) throw ValidationError("torus needs R > a > 0 (immersion condition)");
        return [R, a](double u, double v, int order) {
            const Taylor U = Taylor::variable_u(u, order), V = Taylor::variable_v(v, order);
            const Taylor ring = R + a * cos(V);
            return point(ring * cos(U), ring * sin(U), a * sin(V), Taylor::constant(0.0, order));
        };
    }
    if (name == "catenoid") {
        check_params(name, params, {"c", "smax"});
        require_model(name, sf, M::Euclidean);
        const double c = get(params, "c", 1.0);
        if (!(c > 0.0)) throw ValidationError("catenoid waist c must be positive");
        if (!(get(params, "smax", 1.0) > 0.0)) throw ValidationError("catenoid smax must be positive");
        return [c](double u, double v, int order) {
            const Taylor U = Taylor::variable_u(u, order), S = Taylor::variable_v(v, order);
            const Taylor rad = c * cosh(S / c);
            return point(rad * cos(U), rad * sin(U), S, Taylor::constant(0.0, order));
        };
    }
    if (name == "graph") {
        check_params(name, params, {"a", "b", "c"});
        require_model(name, sf, M::Euclidean);
        const double a = get(params, "a", 1.0), b = get(params, "b", 1.0), c = get(params, "c", 0.0);
        return [a, b, c](double u, double v, int order) {
            const Taylor U = Taylor::variable_u(u, order), V = Taylor::variable_v(v, order);
            return point(U, V, a * U * U + b * V * V + c * U * V, Taylor::constant(0.0, order));
        };
    }
    if (name == "geodesic_sphere_S3" || name == "geodesic_sphere_H3") {
        const bool spherical = name == "geodesic_sphere_S3";
        check_params(name, params, {"a"});
        require_model(name, sf, spherical ? M::Sphere : M::Hyperboloid);
        const double rho = sf.radius();
        const double a = get(params, "a", spherical ? std::numbers::pi / 4 * rho : 1.0 * rho);
        if (!(a > 0.0) || (spherical && !(a < std::numbers::pi * rho)))
            throw ValidationError(spherical ? "geodesic radius a must lie in (0, pi rho)"
                                            : "geodesic radius a must be positive");
        const double alpha = a / rho;
        const double s = rho * (spherical ? std::sin(alpha) : std::sinh(alpha));
        const double w = rho * (spherical ? std::cos(alpha) : std::cosh(alpha));
        return [s, w](double u, double v, int order) {
            const auto o = omega(Taylor::variable_u(u, order), Taylor::variable_v(v, order));
            return point(s * o[0], s * o[1], s * o[2], Taylor::constant(w, order));
        };
    }
    if (name == "clifford_torus_S3") {
        check_params(name, params, {});
        require_model(name, sf, M::Sphere);
        const double c = sf.radius() / std::numbers::sqrt2;
        return [c](double u, double v, int order) {
            const Taylor U = Taylor::variable_u(u, order), V = Taylor::variable_v(v, order);
            return point(c * cos(U), c * sin(U), c * cos(V), c * sin(V));
        };
    }
    throw ValidationError("unknown surface '" + name + "' (expected one of: sphere, torus, catenoid, graph, "
                          "geodesic_sphere_S3, clifford_torus_S3, geodesic_sphere_H3)");
}

std::string node_label(const PatchDomain& d, int n)
{
    std::ostringstream os;
    os << "node " << n << " (i=" << d.node_i(n) << ", j=" << d.node_j(n) << ", u=" << d.u_at(d.node_i(n))
       << ", v=" << d.v_at(d.node_j(n)) << ")";
    return os.str();
}

} // namespace

PointJet fd_jet(const PointMap& f, double u, double v, int order, double hu, double hv, bool richardson)
{
    if (order < 0 || order > 4) throw ValidationError("finite-difference jets support order <= 4");
    if (!(hu > 0.0) || !(hv > 0.0)) throw ValidationError("finite-difference step must be positive");
    std::vector<AmbientVector> coarse(Taylor::terms(order)), fine(Taylor::terms(order));
    for (int k = 0; k <= order; ++k) {
        const double su = hu * kStepScale[k], sv = hv * kStepScale[k];
        fd_level(f, u, v, k, su, sv, coarse);
        if (richardson && k > 0) fd_level(f, u, v, k, 0.5 * su, 0.5 * sv, fine);
    }
    PointJet jet;
    for (int c = 0; c < 4; ++c) jet[c] = Taylor::constant(0.0, order);
    for (int a = 0; a <= order; ++a)
        for (int b = 0; a + b <= order; ++b) {
            const int idx = Taylor::index(a, b);
            const AmbientVector d =
                (richardson && a + b > 0) ? AmbientVector((16.0 * fine[idx] - coarse[idx]) / 15.0) : coarse[idx];
            for (int c = 0; c < 4; ++c) jet[c].coeff(a, b) = d[c] / (factorial(a) * factorial(b));
        }
    return jet;
}

SurfaceSample::SurfaceSample(std::string name, ParamMap params, const PatchDomain& domain, const SpaceForm& sf,
                             JetMap map, Provenance provenance, int normal_sign, Orientation orientation,
                             bool spherical_chart)
    : name_(std::move(name)), params_(std::move(params)), domain_(domain), sf_(sf), map_(std::move(map)),
      provenance_(provenance), base_sign_(normal_sign), orientation_(orientation), spherical_chart_(spherical_chart)
{
    domain_.validate();
    if (!map_) throw ValidationError("surface map is empty");
    auto jets = std::make_shared<std::vector<ImmersionJet>>(domain_.size());
    parallel_for(domain_.size(), [&](int n) {
        (*jets)[n].position = map_(u_at_node(n), v_at_node(n), kJetOrder);
    });
    jets_ = std::move(jets);
    build_geometry();
}

SurfaceSample::SurfaceSample(std::string name, ParamMap params, const PatchDomain& domain, const SpaceForm& sf,
                             std::vector<ImmersionJet> jets, JetMap map, Provenance provenance, int normal_sign,
                             Orientation orientation, bool spherical_chart)
    : name_(std::move(name)), params_(std::move(params)), domain_(domain), sf_(sf), map_(std::move(map)),
      provenance_(provenance), base_sign_(normal_sign), orientation_(orientation), spherical_chart_(spherical_chart)
{
    domain_.validate();
    if (static_cast<int>(jets.size()) != domain_.size()) throw ValidationError("jet grid does not match the domain");
    jets_ = std::make_shared<const std::vector<ImmersionJet>>(std::move(jets));
    build_geometry();
}

void SurfaceSample::build_geometry()
{
    if (base_sign_ != 1 && base_sign_ != -1) throw ValidationError("normal sign must be +1 or -1");
    auto geo = std::make_shared<std::vector<NodeGeometry>>(domain_.size());
    const int sign = normal_sign();
    parallel_for(domain_.size(), [&](int n) {
        const ImmersionJet& jet = (*jets_)[n];
        if (jet.order() < kJetOrder) throw ValidationError("node jets must have order >= 4");
        if (sf_.model() != SpaceForm::Model::Euclidean) {
            const AmbientVector p = jet.partial(0, 0);
            if (sf_.quadric_defect(p) > 1e-10)
                throw ValidationError("position off the model quadric at " + node_label(domain_, n));
        }
        try {
            (*geo)[n] = node_geometry(jet, sf_, sign);
        } catch (const NumericalError& e) {
            throw NumericalError(std::string(e.what()) + " at " + node_label(domain_, n));
        }
    });
    geometry_ = std::move(geo);
}

double SurfaceSample::param(const std::string& key) const
{
    const auto it = params_.find(key);
    if (it == params_.end()) throw ValidationError("surface '" + name_ + "' has no parameter '" + key + "'");
    return it->second;
}

SurfaceSample SurfaceSample::flipped() const
{
    SurfaceSample s = *this;
    s.orientation_ = orientation_ == Orientation::Flip ? Orientation::AsComputed : Orientation::Flip;
    s.build_geometry();
    return s;
}

double SurfaceSample::min_curvature_radius() const
{
    double kmax = 0.0;
    for (int n = 0; n < size(); ++n) {
        const auto& c = geometry(n).scalars;
        kmax = std::max({kmax, std::abs(c.kappa1), std::abs(c.kappa2)});
    }
    return kmax > 0.0 ? 1.0 / kmax : std::numeric_limits<double>::infinity();
}

void SurfaceSample::write_csv(std::ostream& os) const
{
    const bool four = sf_.ambient_dim() == 4;
    os << (four ? "u,v,x,y,z,w\n" : "u,v,x,y,z\n") << std::setprecision(17);
    for (int n = 0; n < size(); ++n) {
        const AmbientVector p = geometry(n).position;
        os << u_at_node(n) << ',' << v_at_node(n) << ',' << p[0] << ',' << p[1] << ',' << p[2];
        if (four) os << ',' << p[3];
        os << '\n';
    }
}

std::vector<std::string> catalog_names()
{
    return {"sphere", "torus", "catenoid", "graph", "geodesic_sphere_S3", "clifford_torus_S3", "geodesic_sphere_H3"};
}

PatchDomain default_domain(const std::string& name, int nu, int nv, const ParamMap& params)
{
    auto pick = [](int n, int fallback) { return n > 0 ? n : fallback; };
    if (name == "sphere" || name == "geodesic_sphere_S3" || name == "geodesic_sphere_H3")
        return spherical_domain(pick(nu, 128), pick(nv, 64));
    if (name == "torus" || name == "clifford_torus_S3") return periodic_domain(pick(nu, 128), pick(nv, 64));
    if (name == "catenoid") {
        const double smax = get(params, "smax", 1.0);
        PatchDomain d;
        d.u_range = {0.0, 2.0 * std::numbers::pi};
        d.v_range = {-smax, smax};
        d.nu = pick(nu, 128);
        d.nv = pick(nv, 64);
        d.periodic_u = true;
        return d;
    }
    if (name == "graph") {
        PatchDomain d;
        d.u_range = {-1.0, 1.0};
        d.v_range = {-1.0, 1.0};
        d.nu = pick(nu, 64);
        d.nv = pick(nv, 64);
        return d;
    }
    catalog_map(name, {}, default_space_form(name)); // throws for unknown names
    return {};
}

SpaceForm default_space_form(const std::string& name)
{
    if (name == "geodesic_sphere_S3" || name == "clifford_torus_S3") return SpaceForm::sphere(1.0);
    if (name == "geodesic_sphere_H3") return SpaceForm::hyperbolic(1.0);
    return SpaceForm::euclidean();
}

SurfaceSample sample_builtin(const std::string& name, const ParamMap& params, const PatchDomain& domain,
                             const SpaceForm& sf, Orientation orientation)
{
    JetMap map = catalog_map(name, params, sf);
    domain.validate();
    // Orientation: the normal sign making H > 0 at the first node (minimal: raw normal).
    int sign = 1;
    {
        ImmersionJet jet{map(domain.u_at(0), domain.v_at(0), SurfaceSample::kJetOrder)};
        const double H = node_geometry(jet, sf, 1).scalars.H;
        if (H < -1e-12) sign = -1;
    }
    ParamMap full = params;
    if (name == "sphere") full.try_emplace("r", 1.0);
    if (name == "torus") full.try_emplace("R", 2.0), full.try_emplace("a", 1.0);
    if (name == "catenoid") full.try_emplace("c", 1.0), full.try_emplace("smax", 1.0);
    if (name == "graph") full.try_emplace("a", 1.0), full.try_emplace("b", 1.0), full.try_emplace("c", 0.0);
    if (name == "geodesic_sphere_S3") full.try_emplace("a", std::numbers::pi / 4 * sf.radius());
    if (name == "geodesic_sphere_H3") full.try_emplace("a", sf.radius());
    const bool spherical = name == "sphere" || name == "geodesic_sphere_S3" || name == "geodesic_sphere_H3";
    return SurfaceSample(name, full, domain, sf, std::move(map), Provenance::Analytic, sign, orientation,
                         spherical && domain.pole_offset);
}

SurfaceSample sample_builtin(const std::string& name, const ParamMap& params)
{
    return sample_builtin(name, params, default_domain(name, 0, 0, params), default_space_form(name));
}

SurfaceSample sample_callable(const PointMap& f, const PatchDomain& domain, const SpaceForm& sf, const FdConfig& fd,
                              const std::string& name)
{
    domain.validate();
    if (!f) throw ValidationError("surface map is empty");
    if (!(fd.relative_step > 0.0) && !(fd.step > 0.0)) throw ValidationError("finite-difference step must be positive");
    const double hu = fd.step > 0.0 ? fd.step : fd.relative_step * domain.u_range.length();
    const double hv = fd.step > 0.0 ? fd.step : fd.relative_step * domain.v_range.length();
    const bool rich = fd.richardson;
    JetMap map = [f, hu, hv, rich](double u, double v, int order) { return fd_jet(f, u, v, order, hu, hv, rich); };
    SurfaceSample s(name, {}, domain, sf, std::move(map), Provenance::NumericJets, 1);
    s.set_jet_map_capacity(4);
    return s;
}

struct DeformationFamily::Impl {
    SurfaceSample base;
    ScalarField u;
    FdConfig fd;
    bool exact = false;
    std::vector<PointJet> r, N;
    std::vector<Taylor> U;
};

DeformationFamily::DeformationFamily(const SurfaceSample& base, const ScalarField& u, const FdConfig& fd)
{
    if (!(u.domain() == base.domain())) throw ValidationError("variation field is not sampled on the surface grid");
    if (!base.has_jet_map()) throw ValidationError("surface has no position map to deform");
    auto impl = std::make_shared<Impl>(Impl{base, u, fd, false, {}, {}, {}});
    constexpr int order = SurfaceSample::kJetOrder;
    impl->exact = base.provenance() == Provenance::Analytic && base.jet_map_capacity() >= order + 1;
    if (impl->exact) {
        const int n = base.size();
        impl->r.resize(n);
        impl->N.resize(n);
        impl->U.resize(n);
        const SpaceForm& sf = base.space_form();
        const int sign = base.normal_sign();
        parallel_for(n, [&](int k) {
            const double uu = base.u_at_node(k), vv = base.v_at_node(k);
            const PointJet r5 = base.jet_map()(uu, vv, order + 1);
            impl->N[k] = local_frame(r5, sf, sign).N;
            for (int c = 0; c < 4; ++c) impl->r[k][c] = r5[c].truncated(order);
            impl->U[k] = u.node_jet(k, order);
        });
    }
    impl_ = std::move(impl);
}

DeformedScalars DeformationFamily::scalars_at(double t) const
{
    const Impl& m = *impl_;
    const int n = m.base.size();
    DeformedScalars out;
    out.H.resize(n);
    out.K.resize(n);
    out.dS_weight.resize(n);
    out.position.resize(n);
    out.N.resize(n);
    auto store = [&](int k, const AmbientVector& x, const FundamentalForms& ff, const CurvatureScalars& cs) {
        out.H[k] = cs.H;
        out.K[k] = cs.K;
        out.dS_weight[k] = ff.dS_weight;
        out.position[k] = x;
        out.N[k] = ff.N;
    };
    if (!m.exact) {
        const SurfaceSample s = at(t);
        for (int k = 0; k < n; ++k) store(k, s.geometry(k).position, s.geometry(k).forms, s.geometry(k).scalars);
        return out;
    }
    const SpaceForm& sf = m.base.space_form();
    const int sign = m.base.normal_sign();
    parallel_for(n, [&](int k) {
        PointJet r, N;
        for (int c = 0; c < 4; ++c) {
            r[c] = m.r[k][c].truncated(2);
            N[c] = m.N[k][c].truncated(2);
        }
        ImmersionJet jet{sf.geodesic_step(r, N, t * m.U[k].truncated(2))};
        const FundamentalForms ff = fundamental_forms(jet, sf, sign);
        AmbientVector x;
        for (int c = 0; c < 4; ++c) x[c] = jet.position[c].value();
        store(k, x, ff, curvature_scalars(ff, sf));
    });
    return out;
}

SurfaceSample DeformationFamily::at(double t) const
{
    const Impl& m = *impl_;
    const SurfaceSample& base = m.base;
    const SpaceForm sf = base.space_form();
    const int sign = base.normal_sign();
    const std::string name = base.name() + " (deformed)";

    if (m.exact) {
        std::vector<ImmersionJet> jets(base.size());
        parallel_for(base.size(), [&](int k) { jets[k].position = sf.geodesic_step(m.r[k], m.N[k], t * m.U[k]); });
        JetMap map = [bmap = base.jet_map(), sf, sign, u = m.u, t](double uu, double vv, int ord) {
            const PointJet r = bmap(uu, vv, ord + 1);
            const PointJet N = local_frame(r, sf, sign).N;
            return sf.geodesic_step(r, N, t * u.jet_at(uu, vv, ord));
        };
        SurfaceSample s(name, base.params(), base.domain(), sf, std::move(jets), std::move(map), Provenance::Analytic,
                        base.base_normal_sign(), base.orientation(), base.spherical_chart());
        s.set_jet_map_capacity(base.jet_map_capacity() - 1);
        return s;
    }

    // Finite differences of the deformed point map.
    PointMap f = [bmap = base.jet_map(), sf, sign, u = m.u, t](double uu, double vv) {
        const PointJet r = bmap(uu, vv, 1);
        const PointJet N = local_frame(r, sf, sign).N;
        const double s = t * u.jet_at(uu, vv, 0).value();
        AmbientVector p, n;
        for (int c = 0; c < 4; ++c) {
            p[c] = r[c].value();
            n[c] = N[c].value();
        }
        switch (sf.model()) {
        case SpaceForm::Model::Euclidean: return AmbientVector(p + s * n);
        case SpaceForm::Model::Sphere:
            return AmbientVector(p * std::cos(s / sf.radius()) + sf.radius() * std::sin(s / sf.radius()) * n);
        case SpaceForm::Model::Hyperboloid:
            return AmbientVector(p * std::cosh(s / sf.radius()) + sf.radius() * std::sinh(s / sf.radius()) * n);
        }
        return p;
    };
    const PatchDomain& d = base.domain();
    const double hu = m.fd.step > 0.0 ? m.fd.step : m.fd.relative_step * d.u_range.length();
    const double hv = m.fd.step > 0.0 ? m.fd.step : m.fd.relative_step * d.v_range.length();
    const bool rich = m.fd.richardson;
    JetMap map = [f, hu, hv, rich](double uu, double vv, int ord) { return fd_jet(f, uu, vv, ord, hu, hv, rich); };
    SurfaceSample s(name, base.params(), d, sf, std::move(map), Provenance::NumericJets, base.base_normal_sign(),
                    base.orientation(), base.spherical_chart());
    s.set_jet_map_capacity(4);
    return s;
}

SurfaceSample deform_normal(const SurfaceSample& s, const ScalarField& u, double t)
{
    return DeformationFamily(s, u).at(t);
}

} // namespace curvevar

namespace curvevar {

ScalarField codazzi_residual(const SurfaceSample& s, bool include_ambient)
{
    Eigen::VectorXd v(s.size());
    const int sign = s.normal_sign();
    parallel_for(s.size(), [&](int n) {
        v[n] = std::max(codazzi_defect(s.jet(n), s.space_form(), sign),
                        gauss_equation_defect(s.jet(n), s.space_form(), sign, include_ambient));
    });
    return ScalarField::from_values(s.domain(), std::move(v));
}

ScalarField intrinsic_curvature_defect(const SurfaceSample& s)
{
    Eigen::VectorXd v(s.size());
    parallel_for(s.size(), [&](int n) {
        const double Ki = intrinsic_gauss_curvature(s.jet(n), s.space_form());
        const double K = s.geometry(n).scalars.K;
        const auto& g = s.geometry(n).forms.g;
        v[n] = std::abs(Ki - K) / std::max(std::abs(K), 1.0 / g.trace());
    });
    return ScalarField::from_values(s.domain(), std::move(v));
}

} // namespace curvevar
