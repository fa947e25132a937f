#include "curvevar/acceptance.hpp"
#include "curvevar/calculus.hpp"
#include "curvevar/density.hpp"
#include "curvevar/error.hpp"
#include "curvevar/fields.hpp"
#include "curvevar/pwillmore.hpp"
#include "curvevar/surface.hpp"
#include "curvevar/variations.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace curvevar;

namespace {

SurfaceSample make_surface(const std::string& name, const ParamMap& params, int nu, int nv, bool flip,
                           std::optional<double> rho)
{
    SpaceForm sf = default_space_form(name);
    if (rho) {
        if (sf.model() == SpaceForm::Model::Euclidean) throw ValidationError("rho applies only to surfaces in S3 or H3");
        sf = sf.model() == SpaceForm::Model::Sphere ? SpaceForm::sphere(*rho) : SpaceForm::hyperbolic(*rho);
    }
    return sample_builtin(name, params, default_domain(name, nu, nv, params), sf,
                          flip ? Orientation::Flip : Orientation::AsComputed);
}

EnergyDensity make_density(const std::string& name, std::map<std::string, double> params, const SurfaceSample& s)
{
    params.try_emplace("k0", s.space_form().k0());
    return density::from_name(name, params);
}

py::dict report_dict(const VariationReport& r)
{
    py::dict d;
    d["quantity"] = r.quantity;
    d["order"] = r.order;
    d["formula_value"] = r.formula_value;
    d["oracle_value"] = r.oracle_value;
    d["abs_error"] = r.abs_error;
    d["rel_error"] = r.rel_error;
    d["convergence_order"] = r.convergence_order;
    d["h1"] = r.h1;
    d["h2"] = r.h2;
    d["lambda"] = r.lambda;
    d["augmented_formula"] = r.augmented_formula;
    d["validity"] = r.validity;
    return d;
}

} // namespace

PYBIND11_MODULE(_curvevar, m)
{
    m.doc() = "Curvature functionals of surfaces in space forms";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

    py::class_<ScalarField>(m, "ScalarField")
        .def_property_readonly("values", [](const ScalarField& f) { return f.values(); })
        .def("max_abs", &ScalarField::max_abs)
        .def("__len__", &ScalarField::size);

    py::class_<SurfaceSample>(m, "Surface")
        .def(py::init(&make_surface), py::arg("name"), py::arg("params") = ParamMap{}, py::arg("nu") = 0,
             py::arg("nv") = 0, py::arg("flip") = false, py::arg("rho") = std::nullopt)
        .def_property_readonly("name", &SurfaceSample::name)
        .def_property_readonly("params", &SurfaceSample::params)
        .def_property_readonly("k0", [](const SurfaceSample& s) { return s.space_form().k0(); })
        .def_property_readonly("size", &SurfaceSample::size)
        .def("field", [](const SurfaceSample& s, const std::string& spec) { return parse_field(spec, s); },
             py::arg("spec"))
        .def("field_from_values",
             [](const SurfaceSample& s, const Eigen::VectorXd& v) {
                 if (v.size() != s.size()) throw ValidationError("expected one value per node");
                 return ScalarField::from_values(s.domain(), v);
             })
        .def("curvature",
             [](const SurfaceSample& s) {
                 const int n = s.size();
                 Eigen::VectorXd u(n), v(n), H(n), K(n), KE(n), k1(n), k2(n);
                 for (int i = 0; i < n; ++i) {
                     const auto& c = s.geometry(i).scalars;
                     u[i] = s.u_at_node(i), v[i] = s.v_at_node(i);
                     H[i] = c.H, K[i] = c.K, KE[i] = c.K_E, k1[i] = c.kappa1, k2[i] = c.kappa2;
                 }
                 py::dict d;
                 d["u"] = u, d["v"] = v, d["H"] = H, d["K"] = K, d["K_E"] = KE, d["kappa1"] = k1, d["kappa2"] = k2;
                 return d;
             })
        .def("integrate", [](const SurfaceSample& s, const ScalarField& f) { return integrate(f, s, true); })
        .def("laplace_beltrami", [](const SurfaceSample& s, const ScalarField& f) { return laplace_beltrami(f, s); })
        .def("codazzi_residual", [](const SurfaceSample& s) { return codazzi_residual(s).max_abs(); })
        .def("intrinsic_curvature_defect", [](const SurfaceSample& s) { return intrinsic_curvature_defect(s).max_abs(); });

    m.def("catalog_names", &catalog_names);

    m.def("energy",
          [](const SurfaceSample& s, const std::string& d, const std::map<std::string, double>& p) {
              return functional_value(s, make_density(d, p, s));
          },
          py::arg("surface"), py::arg("density") = "willmore", py::arg("params") = std::map<std::string, double>{});
    m.def("first_variation",
          [](const SurfaceSample& s, const ScalarField& u, const std::string& d, const std::map<std::string, double>& p) {
              return first_variation(s, make_density(d, p, s), u);
          },
          py::arg("surface"), py::arg("u"), py::arg("density") = "willmore",
          py::arg("params") = std::map<std::string, double>{});
    m.def("second_variation",
          [](const SurfaceSample& s, const ScalarField& u, const std::string& d, const std::map<std::string, double>& p,
             bool force, bool volume_constrained) {
              SecondVariationOptions opt;
              opt.force = force;
              opt.volume_constrained = volume_constrained;
              const auto r = second_variation(s, make_density(d, p, s), u, opt);
              py::dict out;
              out["value"] = r.value;
              out["terms"] = std::vector<double>(r.terms.begin(), r.terms.end());
              out["lambda"] = r.lambda;
              out["augmented"] = r.augmented;
              out["critical"] = r.critical;
              out["validity"] = r.validity;
              return out;
          },
          py::arg("surface"), py::arg("u"), py::arg("density") = "willmore",
          py::arg("params") = std::map<std::string, double>{}, py::arg("force") = false,
          py::arg("volume_constrained") = false);
    m.def("el_residual",
          [](const SurfaceSample& s, const std::string& d, const std::map<std::string, double>& p) {
              return el_residual(s, make_density(d, p, s));
          },
          py::arg("surface"), py::arg("density") = "willmore", py::arg("params") = std::map<std::string, double>{});
    m.def("fd_check",
          [](const SurfaceSample& s, const ScalarField& u, int order, const std::string& d,
             const std::map<std::string, double>& p, bool force, bool volume_constrained) {
              OracleOptions opt;
              opt.second.force = force;
              opt.second.volume_constrained = volume_constrained;
              return report_dict(fd_variation_oracle(s, make_density(d, p, s), u, order, opt));
          },
          py::arg("surface"), py::arg("u"), py::arg("order") = 1, py::arg("density") = "willmore",
          py::arg("params") = std::map<std::string, double>{}, py::arg("force") = false,
          py::arg("volume_constrained") = false);
    m.def("evolution_check",
          [](const SurfaceSample& s, const ScalarField& u, const std::string& q, std::optional<ScalarField> f) {
              return report_dict(evolution_check(s, u, parse_evolution_quantity(q), f ? &*f : nullptr));
          },
          py::arg("surface"), py::arg("u"), py::arg("quantity"), py::arg("f") = std::nullopt);

    m.def("stability_sphere", &stability_sphere, py::arg("r") = 1.0, py::arg("nu") = 128, py::arg("nv") = 64);
    m.def("sphere_index_form",
          [](double p, double r, const SurfaceSample& s, const ScalarField& u) {
              return sphere_index_form({p, r}, s, u);
          },
          py::arg("p"), py::arg("r"), py::arg("surface"), py::arg("u"));
    m.def("sphere_stability",
          [](double p, double r, int lmax) {
              const auto rep = stability_report({p, r}, lmax);
              py::dict d;
              py::list es;
              for (const auto& e : rep.eigenspaces) {
                  py::dict x;
                  x["l"] = e.l, x["eigenvalue"] = e.eigenvalue, x["index"] = e.index, x["sign"] = e.sign;
                  es.append(x);
              }
              d["p"] = rep.p, d["r"] = rep.r, d["eigenspaces"] = es, d["sign_summary"] = rep.sign_summary;
              d["min_quotient"] = rep.min_quotient, d["coercivity_bound"] = rep.coercivity_bound;
              d["bound_holds"] = rep.bound_holds, d["verdict"] = rep.verdict;
              return d;
          },
          py::arg("p"), py::arg("r") = 1.0, py::arg("lmax") = 5);
    m.def("sphere_spectrum", &sphere_spectrum, py::arg("k"), py::arg("r") = 1.0);
    m.def("spectrum_check",
          [](const SurfaceSample& s, int k) {
              const auto c = spectrum_check(s, k);
              py::dict d;
              d["k"] = c.k, d["eigenvalue"] = c.eigenvalue, d["n_k"] = c.n_k, d["max_rel_error"] = c.max_rel_error;
              d["multiplicity"] = c.multiplicity, d["polynomial_rank"] = c.polynomial_rank;
              return d;
          },
          py::arg("surface"), py::arg("k"));
    m.def("poincare_check",
          [](const SurfaceSample& s, const ScalarField& u) {
              const auto r = poincare_check(s, u);
              py::dict d;
              d["u_sq"] = r.u_sq, d["grad_term"] = r.grad_term, d["lap_term"] = r.lap_term;
              d["ratio_grad"] = r.ratio_grad, d["ratio_lap"] = r.ratio_lap, d["holds"] = r.holds,
              d["equality"] = r.equality;
              return d;
          },
          py::arg("surface"), py::arg("u"));

    m.def("run_criterion",
          [](int id) {
              const auto r = run_criterion(id);
              py::dict d;
              d["id"] = r.id, d["title"] = r.title, d["passed"] = r.passed, d["detail"] = r.detail;
              return d;
          },
          py::arg("id"));
}
