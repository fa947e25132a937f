#include "curvevar/acceptance.hpp"
#include "curvevar/calculus.hpp"
#include "curvevar/density.hpp"
#include "curvevar/error.hpp"
#include "curvevar/fields.hpp"
#include "curvevar/pwillmore.hpp"
#include "curvevar/surface.hpp"
#include "curvevar/variations.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using json = nlohmann::ordered_json;
using namespace curvevar;

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitNumerical = 2;

struct Options {
    std::optional<std::string> surface, density, u, f, quantity, format, output;
    std::optional<double> p, k0, c0, kc, kbar, r, step, tol;
    std::optional<int> nu, nv, lmax, k;
    std::optional<bool> flip, check, force, volume_constrained;
    std::vector<int> criteria;
};

struct ToleranceFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Fills options not given on the command line from a JSON object.
void merge_config(Options& o, const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ValidationError("--config: cannot open '" + path + "'");
    json cfg;
    try {
        cfg = json::parse(in);
    } catch (const json::exception& e) {
        throw ValidationError("--config: '" + path + "' is not valid JSON (" + e.what() + ")");
    }
    if (!cfg.is_object()) throw ValidationError("--config: expected a JSON object of flag names to values");
    for (const auto& [key, value] : cfg.items()) {
        auto take = [&](auto& slot) {
            using T = typename std::decay_t<decltype(slot)>::value_type;
            if (slot) return;
            try {
                slot = value.template get<T>();
            } catch (const json::exception&) {
                throw ValidationError("--config: key '" + key + "' has the wrong type");
            }
        };
        if (key == "surface") take(o.surface);
        else if (key == "density") take(o.density);
        else if (key == "u") take(o.u);
        else if (key == "f") take(o.f);
        else if (key == "quantity") take(o.quantity);
        else if (key == "format") take(o.format);
        else if (key == "output") take(o.output);
        else if (key == "p") take(o.p);
        else if (key == "k0") take(o.k0);
        else if (key == "c0") take(o.c0);
        else if (key == "kc") take(o.kc);
        else if (key == "kbar") take(o.kbar);
        else if (key == "r") take(o.r);
        else if (key == "step") take(o.step);
        else if (key == "tol") take(o.tol);
        else if (key == "nu") take(o.nu);
        else if (key == "nv") take(o.nv);
        else if (key == "lmax") take(o.lmax);
        else if (key == "k") take(o.k);
        else if (key == "flip") take(o.flip);
        else if (key == "check") take(o.check);
        else if (key == "force") take(o.force);
        else if (key == "volume_constrained") take(o.volume_constrained);
        else throw ValidationError("--config: unknown key '" + key + "'");
    }
}

double parse_number(const std::string& text, const std::string& what)
{
    try {
        size_t pos = 0;
        const double x = std::stod(text, &pos);
        if (pos != text.size()) throw std::invalid_argument("trailing");
        return x;
    } catch (const std::logic_error&) {
        throw ValidationError(what + ": '" + text + "' is not a number");
    }
}

// "name" or "name:key=value,key=value"; rho sets the model radius of curved ambients.
SurfaceSample load_surface(const Options& o)
{
    const std::string spec = o.surface.value_or("sphere");
    const auto colon = spec.find(':');
    const std::string name = spec.substr(0, colon);
    ParamMap params;
    std::optional<double> rho;
    if (colon != std::string::npos) {
        std::stringstream ss(spec.substr(colon + 1));
        std::string item;
        while (std::getline(ss, item, ',')) {
            const auto eq = item.find('=');
            if (eq == std::string::npos || eq == 0)
                throw ValidationError("--surface '" + spec + "': expected name:key=value,key=value");
            const std::string key = item.substr(0, eq);
            const double value = parse_number(item.substr(eq + 1), "--surface " + key);
            if (key == "rho") rho = value;
            else params[key] = value;
        }
    }
    const auto names = catalog_names();
    if (std::find(names.begin(), names.end(), name) == names.end()) {
        std::string all;
        for (const auto& n : names) all += (all.empty() ? "" : ", ") + n;
        throw ValidationError("--surface: unknown surface '" + name + "' (expected one of " + all + ")");
    }
    SpaceForm sf = default_space_form(name);
    if (rho) {
        if (sf.model() == SpaceForm::Model::Euclidean)
            throw ValidationError("--surface: rho applies only to surfaces in S3 or H3");
        sf = sf.model() == SpaceForm::Model::Sphere ? SpaceForm::sphere(*rho) : SpaceForm::hyperbolic(*rho);
    }
    return sample_builtin(name, params, default_domain(name, o.nu.value_or(0), o.nv.value_or(0), params), sf,
                          o.flip.value_or(false) ? Orientation::Flip : Orientation::AsComputed);
}

EnergyDensity load_density(const Options& o, const SurfaceSample& s)
{
    const double ambient = s.space_form().k0();
    if (o.k0 && *o.k0 != ambient) {
        std::ostringstream msg;
        msg << "--k0 " << *o.k0 << " does not match the ambient curvature " << ambient << " of --surface " << s.name();
        throw ValidationError(msg.str());
    }
    std::map<std::string, double> params{{"k0", ambient}};
    if (o.p) params["p"] = *o.p;
    if (o.c0) params["c0"] = *o.c0;
    if (o.kc) params["kc"] = *o.kc;
    if (o.kbar) params["kbar"] = *o.kbar;
    return density::from_name(o.density.value_or("willmore"), params);
}

json number(double x)
{
    if (std::isfinite(x)) return x;
    if (std::isnan(x)) return nullptr;
    return x > 0 ? "inf" : "-inf";
}

json surface_json(const SurfaceSample& s)
{
    json j;
    j["name"] = s.name();
    json params = json::object();
    for (const auto& [k, v] : s.params()) params[k] = v;
    j["params"] = params;
    j["k0"] = s.space_form().k0();
    j["nodes"] = s.size();
    j["orientation"] = s.orientation() == Orientation::Flip ? "flip" : "as_computed";
    return j;
}

json report_json(const VariationReport& r)
{
    json j;
    j["quantity"] = r.quantity;
    j["order"] = r.order;
    j["formula_value"] = number(r.formula_value);
    j["oracle_value"] = number(r.oracle_value);
    j["abs_error"] = number(r.abs_error);
    j["rel_error"] = number(r.rel_error);
    j["convergence_order"] = number(r.convergence_order);
    j["h1"] = r.h1;
    j["h2"] = r.h2;
    if (r.order == 2) {
        j["lambda"] = r.lambda;
        j["augmented_formula"] = number(r.augmented_formula);
        j["validity"] = r.validity;
    }
    return j;
}

// Per-node CSV with chart coordinates.
void write_node_csv(std::ostream& os, const SurfaceSample& s, const std::vector<std::string>& cols,
                    const std::vector<const Eigen::VectorXd*>& data)
{
    os << "u,v";
    for (const auto& c : cols) os << ',' << c;
    os << '\n';
    os.precision(17);
    for (int n = 0; n < s.size(); ++n) {
        os << s.u_at_node(n) << ',' << s.v_at_node(n);
        for (const auto* d : data) os << ',' << (*d)[n];
        os << '\n';
    }
}

// Flat "key,value" rows for scalar reports.
void write_flat_csv(std::ostream& os, const json& j, const std::string& prefix = "")
{
    if (prefix.empty()) os << "key,value\n";
    for (const auto& [k, v] : j.items()) {
        const std::string key = prefix.empty() ? k : prefix + "." + k;
        if (v.is_object() || v.is_array()) write_flat_csv(os, v, key);
        else if (v.is_string()) os << key << ',' << v.get<std::string>() << '\n';
        else os << key << ',' << v.dump() << '\n';
    }
}

struct Output {
    json report;
    // Set for per-node commands in CSV mode.
    std::function<void(std::ostream&)> csv;
};

Output cmd_curvature(const Options& o)
{
    const auto s = load_surface(o);
    const int n = s.size();
    Eigen::VectorXd H(n), K(n), KE(n), k1(n), k2(n);
    for (int i = 0; i < n; ++i) {
        const auto& c = s.geometry(i).scalars;
        H[i] = c.H, K[i] = c.K, KE[i] = c.K_E, k1[i] = c.kappa1, k2[i] = c.kappa2;
    }
    Output out;
    out.report["surface"] = surface_json(s);
    json nodes;
    std::vector<double> us(n), vs(n);
    for (int i = 0; i < n; ++i) us[i] = s.u_at_node(i), vs[i] = s.v_at_node(i);
    nodes["u"] = us;
    nodes["v"] = vs;
    auto vec = [](const Eigen::VectorXd& x) { return std::vector<double>(x.data(), x.data() + x.size()); };
    nodes["H"] = vec(H);
    nodes["K"] = vec(K);
    nodes["K_E"] = vec(KE);
    nodes["kappa1"] = vec(k1);
    nodes["kappa2"] = vec(k2);
    out.report["nodes"] = nodes;
    out.csv = [s, H, K, KE, k1, k2](std::ostream& os) {
        write_node_csv(os, s, {"H", "K", "K_E", "kappa1", "kappa2"}, {&H, &K, &KE, &k1, &k2});
    };
    return out;
}

Output cmd_energy(const Options& o)
{
    const auto s = load_surface(o);
    const auto E = load_density(o, s);
    Output out;
    out.report["surface"] = surface_json(s);
    out.report["density"] = E.name;
    out.report["value"] = functional_value(s, E);
    return out;
}

OracleOptions oracle_options(const Options& o)
{
    OracleOptions opt;
    opt.step = o.step;
    opt.second.force = o.force.value_or(false);
    opt.second.volume_constrained = o.volume_constrained.value_or(false);
    return opt;
}

void check_report(const VariationReport& r, double tol, std::vector<std::string>& failures)
{
    if (!(r.rel_error <= tol) || !(r.convergence_order >= 1.9)) {
        std::ostringstream msg;
        msg << r.quantity << ": rel_error " << r.rel_error << " (tol " << tol << "), convergence order "
            << r.convergence_order << " (need >= 1.9)";
        failures.push_back(msg.str());
    }
}

Output cmd_first_variation(const Options& o, std::vector<std::string>& failures)
{
    const auto s = load_surface(o);
    const auto E = load_density(o, s);
    const auto u = parse_field(o.u.value_or("random:seed=1"), s);
    Output out;
    out.report["surface"] = surface_json(s);
    out.report["density"] = E.name;
    out.report["u"] = o.u.value_or("random:seed=1");
    out.report["value"] = first_variation(s, E, u);
    if (o.check.value_or(false)) {
        const auto rep = fd_variation_oracle(s, E, u, 1, oracle_options(o));
        out.report["check"] = report_json(rep);
        check_report(rep, o.tol.value_or(1e-5), failures);
    }
    return out;
}

Output cmd_second_variation(const Options& o, std::vector<std::string>& failures)
{
    const auto s = load_surface(o);
    const auto E = load_density(o, s);
    const auto u = parse_field(o.u.value_or("random:seed=1"), s);
    const auto opt = oracle_options(o);
    const auto r = second_variation(s, E, u, opt.second);
    Output out;
    out.report["surface"] = surface_json(s);
    out.report["density"] = E.name;
    out.report["u"] = o.u.value_or("random:seed=1");
    out.report["value"] = r.value;
    out.report["terms"] = std::vector<double>(r.terms.begin(), r.terms.end());
    out.report["lambda"] = r.lambda;
    out.report["augmented"] = r.augmented;
    out.report["criticality_residual"] = r.criticality_residual;
    out.report["criticality_scale"] = r.criticality_scale;
    out.report["validity"] = r.validity;
    if (o.check.value_or(false)) {
        const auto rep = fd_variation_oracle(s, E, u, 2, opt);
        out.report["check"] = report_json(rep);
        check_report(rep, o.tol.value_or(1e-4), failures);
    }
    return out;
}

Output cmd_el_residual(const Options& o)
{
    const auto s = load_surface(o);
    const auto E = load_density(o, s);
    const auto res = el_residual(s, E);
    const Eigen::VectorXd values = res.values();
    Output out;
    out.report["surface"] = surface_json(s);
    out.report["density"] = E.name;
    out.report["sup_norm"] = res.max_abs();
    out.report["scale"] = el_scale(s, E).max_abs();
    out.report["relative_sup_norm"] = res.max_abs() / std::max(el_scale(s, E).max_abs(), std::numeric_limits<double>::min());
    out.report["l2_norm"] = std::sqrt(integrate(values.cwiseAbs2(), s, true));
    out.csv = [s, values](std::ostream& os) { write_node_csv(os, s, {"residual"}, {&values}); };
    return out;
}

Output cmd_verify_evolution(const Options& o, std::vector<std::string>& failures)
{
    const auto s = load_surface(o);
    const auto u = parse_field(o.u.value_or("random:seed=7"), s);
    const auto f = parse_field(o.f.value_or("random:seed=11"), s);
    const std::string q = o.quantity.value_or("all");
    std::vector<EvolutionQuantity> qs;
    if (q == "all") qs = all_evolution_quantities();
    else qs.push_back(parse_evolution_quantity(q));
    const auto reps = evolution_check(s, u, qs, &f, o.step);
    Output out;
    out.report["surface"] = surface_json(s);
    out.report["u"] = o.u.value_or("random:seed=7");
    out.report["f"] = o.f.value_or("random:seed=11");
    json arr = json::array();
    for (const auto& r : reps) {
        arr.push_back(report_json(r));
        check_report(r, o.tol.value_or(1e-4), failures);
    }
    if (reps.size() == 1) {
        out.report["convergence_order"] = number(reps[0].convergence_order);
        out.report["rel_error"] = number(reps[0].rel_error);
    }
    out.report["checks"] = arr;
    return out;
}

Output cmd_sphere_stability(const Options& o)
{
    PWillmoreSetting setting{o.p.value_or(3.0), o.r.value_or(1.0), 0.0};
    const int lmax = o.lmax.value_or(5);
    const auto rep = stability_report(setting, lmax, o.nu.value_or(128), o.nv.value_or(64));
    Output out;
    out.report["p"] = rep.p;
    out.report["r"] = rep.r;
    out.report["lmax"] = lmax;
    json es = json::array();
    for (const auto& e : rep.eigenspaces) {
        es.push_back({{"l", e.l},
                      {"eigenvalue", e.eigenvalue},
                      {"index", e.index},
                      {"member_spread", e.member_spread},
                      {"sign", e.sign}});
    }
    out.report["l1_index"] = rep.eigenspaces.empty() ? json(nullptr) : json(rep.eigenspaces[0].index);
    out.report["eigenspaces"] = es;
    out.report["sign_summary"] = rep.sign_summary;
    out.report["min_quotient"] = number(rep.min_quotient);
    out.report["coercivity_bound"] = rep.coercivity_bound;
    out.report["bound_holds"] = rep.bound_holds;
    out.report["verdict"] = rep.verdict;
    return out;
}

Output cmd_spectrum(const Options& o)
{
    const int k = o.k.value_or(2);
    const auto s = stability_sphere(o.r.value_or(1.0), o.nu.value_or(128), o.nv.value_or(64));
    const auto c = spectrum_check(s, k);
    Output out;
    out.report["k"] = c.k;
    out.report["r"] = o.r.value_or(1.0);
    out.report["eigenvalue"] = c.eigenvalue;
    out.report["n_k"] = c.n_k;
    out.report["max_rel_error"] = c.max_rel_error;
    out.report["multiplicity"] = c.multiplicity;
    out.report["polynomial_rank"] = c.polynomial_rank;
    out.report["polynomial_eigenvalues"] = c.polynomial_eigenvalues;
    return out;
}

Output cmd_poincare(const Options& o)
{
    const auto s = stability_sphere(o.r.value_or(1.0), o.nu.value_or(128), o.nv.value_or(64));
    const auto u = parse_field(o.u.value_or("harmonic:2,0"), s);
    const auto rep = poincare_check(s, u);
    Output out;
    out.report["r"] = o.r.value_or(1.0);
    out.report["u"] = o.u.value_or("harmonic:2,0");
    out.report["u_sq"] = rep.u_sq;
    out.report["grad_term"] = rep.grad_term;
    out.report["lap_term"] = rep.lap_term;
    out.report["ratio_grad"] = rep.ratio_grad;
    out.report["ratio_lap"] = rep.ratio_lap;
    out.report["holds"] = rep.holds;
    out.report["equality"] = rep.equality;
    return out;
}

Output cmd_verify_all(const Options& o, std::vector<std::string>& failures)
{
    Output out;
    json arr = json::array();
    for (const auto& r : run_acceptance(o.criteria)) {
        std::cerr << format_result(r) << '\n';
        arr.push_back({{"id", r.id}, {"title", r.title}, {"passed", r.passed}, {"detail", r.detail}});
        if (!r.passed) failures.push_back("criterion " + std::to_string(r.id) + " failed");
    }
    out.report["criteria"] = arr;
    return out;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Curvature functionals of surfaces in space forms: energies, variations and sphere stability"};
    app.require_subcommand(1, 1);
    Options o;
    std::string config;
    app.add_option("--config", config, "JSON file of flag values; command-line flags win");

    auto add_common = [&](CLI::App* sub, bool surface, bool dens, bool field) {
        sub->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
        sub->add_option("-o,--output", o.output, "write the report to this file");
        sub->add_option("--config", config, "JSON file of flag values; command-line flags win");
        if (surface) {
            sub->add_option("--surface", o.surface, "catalog surface, e.g. torus:R=2,a=1");
            sub->add_option("--nu", o.nu, "grid nodes along u");
            sub->add_option("--nv", o.nv, "grid nodes along v");
            sub->add_flag("--flip", o.flip, "reverse the normal");
        }
        if (dens) {
            sub->add_option("--density", o.density, "willmore, bending, helfrich, pwillmore, ksquared, area or gauss");
            sub->add_option("--p", o.p, "p-Willmore exponent");
            sub->add_option("--k0", o.k0, "ambient curvature (defaults to the surface's)");
            sub->add_option("--c0", o.c0, "Helfrich spontaneous curvature");
            sub->add_option("--kc", o.kc, "Helfrich bending rigidity");
            sub->add_option("--kbar", o.kbar, "Helfrich Gaussian rigidity");
        }
        if (field) sub->add_option("--u", o.u, "const[:c], zero, harmonic:l,m, random:seed=N or a CSV file");
    };
    auto add_check = [&](CLI::App* sub) {
        sub->add_flag("--check", o.check, "compare with finite differences");
        sub->add_option("--step", o.step, "finite-difference step");
        sub->add_option("--tol", o.tol, "relative tolerance for --check");
    };

    auto* curvature = app.add_subcommand("curvature", "per-node H, K, K_E and principal curvatures");
    add_common(curvature, true, false, false);
    auto* energy = app.add_subcommand("energy", "value of the curvature functional");
    add_common(energy, true, true, false);
    auto* first = app.add_subcommand("first-variation", "first variation along u");
    add_common(first, true, true, true);
    add_check(first);
    auto* second = app.add_subcommand("second-variation", "second variation along u");
    add_common(second, true, true, true);
    add_check(second);
    second->add_flag("--force", o.force, "evaluate away from critical points");
    second->add_flag("--volume-constrained", o.volume_constrained, "accept critical points of F - lambda V");
    auto* el = app.add_subcommand("el-residual", "Euler-Lagrange residual");
    add_common(el, true, true, false);
    auto* evo = app.add_subcommand("verify-evolution", "check evolution formulas against finite differences");
    add_common(evo, true, false, true);
    evo->add_option("--f", o.f, "test function for laplacian_f and h_hess_f");
    evo->add_option("--quantity", o.quantity,
                    "metric, inverse_metric, area_element, 2H, K, laplacian_f, h_hess_f or all");
    evo->add_option("--step", o.step, "finite-difference step");
    evo->add_option("--tol", o.tol, "relative tolerance");
    auto* stab = app.add_subcommand("sphere-stability", "p-Willmore index form on sphere eigenspaces");
    add_common(stab, false, false, false);
    stab->add_option("--p", o.p, "exponent p >= 1");
    stab->add_option("--r", o.r, "sphere radius");
    stab->add_option("--lmax", o.lmax, "largest eigenspace");
    stab->add_option("--nu", o.nu, "longitude nodes");
    stab->add_option("--nv", o.nv, "latitude nodes");
    auto* spec = app.add_subcommand("spectrum", "Laplace-Beltrami eigenvalue check on the sphere");
    add_common(spec, false, false, false);
    spec->add_option("--k", o.k, "eigenvalue index");
    spec->add_option("--r", o.r, "sphere radius");
    spec->add_option("--nu", o.nu, "longitude nodes");
    spec->add_option("--nv", o.nv, "latitude nodes");
    auto* poin = app.add_subcommand("poincare", "Poincare inequalities on the sphere");
    add_common(poin, false, false, true);
    poin->add_option("--r", o.r, "sphere radius");
    poin->add_option("--nu", o.nu, "longitude nodes");
    poin->add_option("--nv", o.nv, "latitude nodes");
    auto* all = app.add_subcommand("verify-all", "run the acceptance suite");
    add_common(all, false, false, false);
    all->add_option("--criteria", o.criteria, "subset of criterion ids");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitValidation;
    }

    std::vector<std::string> failures;
    try {
        if (!config.empty()) merge_config(o, config);
        const std::string fmt = o.format.value_or("json");
        if (fmt != "json" && fmt != "csv") throw ValidationError("--format: expected json or csv, got '" + fmt + "'");
        CLI::App* sub = app.get_subcommands().front();
        const std::string name = sub->get_name();
        Output out;
        if (name == "curvature") out = cmd_curvature(o);
        else if (name == "energy") out = cmd_energy(o);
        else if (name == "first-variation") out = cmd_first_variation(o, failures);
        else if (name == "second-variation") out = cmd_second_variation(o, failures);
        else if (name == "el-residual") out = cmd_el_residual(o);
        else if (name == "verify-evolution") out = cmd_verify_evolution(o, failures);
        else if (name == "sphere-stability") out = cmd_sphere_stability(o);
        else if (name == "spectrum") out = cmd_spectrum(o);
        else if (name == "poincare") out = cmd_poincare(o);
        else out = cmd_verify_all(o, failures);

        json report;
        report["schema"] = "curvevar/1";
        report["command"] = name;
        for (auto& [k, v] : out.report.items()) report[k] = v;
        report["passed"] = failures.empty();
        if (!failures.empty()) report["failures"] = failures;

        std::ofstream file;
        if (o.output) {
            file.open(*o.output);
            if (!file) throw ValidationError("--output: cannot write '" + *o.output + "'");
        }
        std::ostream& os = o.output ? static_cast<std::ostream&>(file) : std::cout;
        if (fmt == "json") os << report.dump(2) << '\n';
        else if (out.csv) out.csv(os);
        else write_flat_csv(os, report);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
    for (const auto& f : failures) std::cerr << "tolerance failure: " << f << '\n';
    return failures.empty() ? 0 : kExitNumerical;
}
