#include "curvevar/acceptance.hpp"

#include "curvevar/calculus.hpp"
#include "curvevar/error.hpp"
#include "curvevar/fields.hpp"
#include "curvevar/harmonics.hpp"
#include "curvevar/pwillmore.hpp"
#include "curvevar/variations.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

namespace curvevar {

namespace {

using std::numbers::pi;

std::string fmt(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), std::numeric_limits<double>::min()); }

struct Outcome {
    bool passed = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what)
    {
        if (!ok) {
            passed = false;
            detail << "FAILED " << what << "; ";
        }
    }
};

SurfaceSample catalog(const std::string& name, const ParamMap& params = {}, int nu = 0, int nv = 0)
{
    return sample_builtin(name, params, default_domain(name, nu, nv, params), default_space_form(name));
}

// Willmore energy of the unit sphere.
void c1(Outcome& o)
{
    const double F = functional_value(catalog("sphere", {{"r", 1.0}}), density::willmore(0.0));
    const double e = rel(F, 4 * pi);
    o.require(e <= 1e-8, "relative error");
    o.detail << "W = " << fmt(F) << ", rel err " << fmt(e);
}

// p-Willmore energy of round spheres.
void c2(Outcome& o)
{
    double worst = 0.0;
    for (double r : {0.5, 1.0, 2.0}) {
        const auto s = catalog("sphere", {{"r", r}});
        for (double p : {1.0, 2.0, 3.0, 4.0}) {
            const double e = rel(functional_value(s, density::pwillmore(p)), 4 * pi * std::pow(r, 2.0 - p));
            worst = std::max(worst, e);
            o.require(e <= 1e-8, "p=" + fmt(p) + " r=" + fmt(r));
        }
    }
    o.detail << "12 cases, max rel err " << fmt(worst);
}

// First variation against finite differences.
void c3(Outcome& o)
{
    const std::vector<EnergyDensity> densities = {density::willmore(0.0),        density::bending(0.0),
                                                  density::helfrich(1.0, 0.3, 0.5), density::pwillmore(1.0),
                                                  density::pwillmore(3.0),        density::ksquared()};
    const std::vector<std::string> labels = {"willmore", "bending", "helfrich", "p=1", "p=3", "K^2"};
    double worst = 0.0, min_order = std::numeric_limits<double>::infinity();
    int cases = 0;
    for (const auto& [name, params] : std::vector<std::pair<std::string, ParamMap>>{
             {"sphere", {{"r", 1.0}}}, {"torus", {{"R", 2.0}, {"a", 1.0}}}, {"catenoid", {}}}) {
        const auto s = catalog(name, params);
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            const auto reps = fd_variation_oracle(s, densities, random_field(s, seed), 1);
            for (std::size_t i = 0; i < reps.size(); ++i) {
                ++cases;
                worst = std::max(worst, reps[i].rel_error);
                min_order = std::min(min_order, reps[i].convergence_order);
                o.require(reps[i].rel_error <= 1e-5 && reps[i].convergence_order >= 1.9,
                          name + "/" + labels[i] + "/seed " + std::to_string(seed) + " rel " +
                              fmt(reps[i].rel_error) + " order " + fmt(reps[i].convergence_order));
            }
        }
    }
    o.detail << cases << " cases, max rel err " << fmt(worst) << ", min order " << fmt(min_order);
}

// Sphere first variation with u = 1.
void c4(Outcome& o)
{
    double worst = 0.0;
    for (double r : {0.5, 1.0, 2.0}) {
        const auto s = catalog("sphere", {{"r", r}});
        const auto one = constant_field(s, 1.0);
        for (double p : {1.0, 2.0, 3.0, 4.0}) {
            const double v = first_variation(s, density::pwillmore(p), one);
            const double expect = 4 * pi * (p - 2.0) * std::pow(r, 1.0 - p);
            const double e = std::abs(v - expect) / std::max(std::abs(expect), 4 * pi * std::pow(r, 1.0 - p));
            worst = std::max(worst, e);
            o.require(e <= 1e-7, "p=" + fmt(p) + " r=" + fmt(r));
        }
    }
    o.detail << "12 cases, max rel err " << fmt(worst);
}

// Pointwise evolution equations.
void c5(Outcome& o)
{
    double worst = 0.0, min_order = std::numeric_limits<double>::infinity();
    for (const std::string name : {"torus", "geodesic_sphere_S3"}) {
        const auto s = catalog(name);
        const auto u = random_field(s, 7), f = random_field(s, 11);
        for (const auto& rep : evolution_check(s, u, all_evolution_quantities(), &f)) {
            worst = std::max(worst, rep.rel_error);
            min_order = std::min(min_order, rep.convergence_order);
            o.require(rep.rel_error <= 1e-4 && rep.convergence_order >= 1.9,
                      name + "/" + rep.quantity + " rel " + fmt(rep.rel_error) + " order " + fmt(rep.convergence_order));
        }
    }
    o.detail << "7 quantities x 2 surfaces, max rel err " << fmt(worst) << ", min order " << fmt(min_order);
}

// Second variation against finite differences at critical immersions.
void c6(Outcome& o)
{
    struct Case {
        std::string label, surface;
        EnergyDensity E;
        std::uint64_t seed;
    };
    const std::vector<Case> cases = {{"sphere/willmore", "sphere", density::willmore(0.0), 3},
                                     {"clifford/willmore k0=1", "clifford_torus_S3", density::willmore(1.0), 5},
                                     {"catenoid/p=3", "catenoid", density::pwillmore(3.0), 2}};
    for (const auto& c : cases) {
        const auto s = catalog(c.surface);
        const auto rep = fd_variation_oracle(s, c.E, random_field(s, c.seed), 2);
        o.require(rep.rel_error <= 1e-4, c.label + " rel " + fmt(rep.rel_error));
        o.detail << c.label << " rel " << fmt(rep.rel_error) << "; ";
    }
    // Volume-constrained sphere: the formula against the second difference of F - λV.
    const auto s = catalog("sphere", {{"r", 1.0}});
    const auto rep = fd_variation_oracle(s, density::pwillmore(3.0), random_harmonic_field(s, 4, 1, 4), 2);
    const double e = rep.abs_error / std::max(std::abs(rep.oracle_value), std::abs(rep.formula_value));
    const double ea = std::abs(rep.augmented_formula - rep.oracle_value) / std::abs(rep.oracle_value);
    o.require(e <= 1e-4, "sphere/p=3");
    o.detail << "sphere/p=3 lambda " << fmt(rep.lambda) << ": formula " << fmt(rep.formula_value) << " FD " << fmt(rep.oracle_value) << " rel " << fmt(e)
             << " (formula + 2 lambda int H u^2 = " << fmt(rep.augmented_formula) << ", rel " << fmt(ea) << ")";
}

// Sphere index form on the first eigenspace.
void c7(Outcome& o)
{
    const auto s = stability_sphere(1.0);
    const auto u = harmonic_field(s, 1, 0);
    const double v3 = sphere_index_form({3.0, 1.0}, s, u);
    const double v2 = sphere_index_form({2.0, 1.0}, s, u);
    o.require(rel(v3, -8 * pi / 3) <= 1e-6, "p=3 value");
    o.require(std::abs(v2) <= 1e-8, "p=2 value");
    o.detail << "p=3: " << fmt(v3) << " (rel err " << fmt(rel(v3, -8 * pi / 3)) << "), p=2: " << fmt(v2);
}

// Sign pattern of the index form by eigenspace.
void c8(Outcome& o)
{
    const std::vector<double> ps = {2.5, 3.0, 4.0, 5.0, 1.0, 2.0};
    std::vector<PWillmoreSetting> settings;
    for (double p : ps) settings.push_back({p, 1.0});
    const auto reps = stability_reports(settings, 6);
    for (const auto& r : reps) {
        bool ok = true;
        if (r.p > 2.0) {
            ok = r.eigenspaces[0].sign < 0;
            for (int l = 2; l <= 6; ++l) ok = ok && r.eigenspaces[l - 1].sign > 0;
        } else {
            for (const auto& e : r.eigenspaces) ok = ok && e.sign >= 0;
        }
        o.require(ok, "p=" + fmt(r.p) + " pattern " + r.sign_summary);
        o.detail << "p=" << fmt(r.p) << ":" << r.sign_summary << " ";
    }
}

// Coercivity on span{l = 2..6}.
void c9(Outcome& o)
{
    constexpr int lmin = 2, lmax = 6, seeds = 20;
    double worst_margin = std::numeric_limits<double>::infinity();
    std::ostringstream fails, below;
    for (double r : {0.5, 1.0, 2.0}) {
        const auto s = stability_sphere(r);
        const int nb = (lmax + 1) * (lmax + 1) - lmin * lmin;
        Eigen::MatrixXd B(s.size(), nb);
        for (int n = 0; n < s.size(); ++n) {
            const auto Y = real_harmonics_upto(lmax, Taylor::constant(s.v_at_node(n), 0), Taylor::constant(s.u_at_node(n), 0));
            for (int k = 0; k < nb; ++k) B(n, k) = Y[lmin * lmin + k].value() / r;
        }
        std::vector<double> qmin(5, std::numeric_limits<double>::infinity());
        const auto I2 = sphere_index_integrals(s, harmonic_field(s, 2, 0));
        for (int seed = 1; seed <= seeds; ++seed) {
            std::mt19937_64 rng(seed);
            std::normal_distribution<double> g;
            Eigen::VectorXd c(nb);
            for (int k = 0; k < nb; ++k) c[k] = g(rng);
            const auto I = sphere_index_integrals(s, ScalarField::from_values(s.domain(), B * c));
            for (int p = 1; p <= 4; ++p) qmin[p] = std::min(qmin[p], sphere_index_form({double(p), r}, I) / I.u_sq);
        }
        for (int p = 1; p <= 4; ++p) {
            const double bound = (2.0 * p * p - 3.0 * p + 4.0) / (2.0 * r * r);
            const double zonal2 = sphere_index_form({double(p), r}, I2) / I2.u_sq;
            if (zonal2 < bound - 1e-6)
                below << "p=" << p << " r=" << fmt(r) << ": " << fmt(zonal2) << " < " << fmt(bound) << "; ";
            worst_margin = std::min(worst_margin, qmin[p] - bound);
            if (qmin[p] < bound - 1e-6)
                fails << "p=" << p << " r=" << fmt(r) << ": min quotient " << fmt(qmin[p]) << " < " << fmt(bound)
                      << "; ";
            o.require(qmin[p] >= bound - 1e-6, "p=" + std::to_string(p) + " r=" + fmt(r));
        }
    }
    o.detail.str("");
    if (!o.passed) o.detail << fails.str();
    o.detail << "20 seeds, min(quotient - bound) over 12 (p, r) = " << fmt(worst_margin);
    if (!below.str().empty()) o.detail << "; zonal l=2 quotient below the bound at " << below.str();
}

// Poincaré inequalities.
void c10(Outcome& o)
{
    const auto s = stability_sphere(1.0);
    const auto eq = poincare_check(s, harmonic_field(s, 2, 0));
    const double target = 4 * pi / 5;
    const double e = std::max({rel(eq.u_sq, target), rel(eq.grad_term, target), rel(eq.lap_term, target)});
    o.require(e <= 1e-6, "l=2 equality case");
    const auto st = poincare_check(s, harmonic_field(s, 3, 0));
    o.require(rel(st.ratio_grad, 2.0) <= 1e-6 && rel(st.ratio_lap, 4.0) <= 1e-6 && st.holds && !st.equality,
              "l=3 ratios");
    o.detail << "l=2: " << fmt(eq.u_sq) << ", " << fmt(eq.grad_term) << ", " << fmt(eq.lap_term) << " (rel " << fmt(e)
             << "); l=3 ratios " << fmt(st.ratio_grad) << ", " << fmt(st.ratio_lap);
}

// Laplace–Beltrami spectrum and multiplicities.
void c11(Outcome& o)
{
    const auto s = stability_sphere(1.0, 256, 128);
    double worst = 0.0;
    std::ostringstream mult;
    for (int k = 0; k <= 6; ++k) {
        const auto c = spectrum_check(s, k);
        worst = std::max(worst, c.max_rel_error);
        o.require(c.max_rel_error <= 1e-6, "lambda_" + std::to_string(k));
        o.require(c.multiplicity == c.n_k, "k=" + std::to_string(k) + " multiplicity " + std::to_string(c.multiplicity) +
                                               " != N_k " + std::to_string(c.n_k));
        mult << k << ":" << c.multiplicity << "/" << c.n_k << "/" << c.polynomial_rank << " ";
    }
    o.detail << "max rel eigenvalue err " << fmt(worst) << "; k:multiplicity/N_k/degree-k polynomial rank " << mult.str();
}

// Clifford torus.
void c12(Outcome& o)
{
    const auto c = catalog("clifford_torus_S3");
    double Hmax = 0.0;
    for (int n = 0; n < c.size(); ++n) Hmax = std::max(Hmax, std::abs(c.geometry(n).scalars.H));
    const double el = el_residual(c, density::willmore(1.0)).max_abs();
    const double W = functional_value(c, density::willmore(1.0));
    o.require(Hmax <= 1e-8, "sup|H|");
    o.require(el <= 1e-6, "EL residual");
    o.require(rel(W, 2 * pi * pi) <= 1e-7, "energy");
    double gauss = 0.0;
    for (const std::string name : {"clifford_torus_S3", "geodesic_sphere_S3"}) {
        const auto s = catalog(name);
        for (int n = 0; n < s.size(); ++n) {
            const double Ki = intrinsic_gauss_curvature(s.jet(n), s.space_form());
            gauss = std::max(gauss, std::abs(s.geometry(n).scalars.K_E - (Ki - s.space_form().k0())));
        }
    }
    o.require(gauss <= 1e-9, "K_E = K - k0");
    o.detail << "sup|H| " << fmt(Hmax) << ", sup|EL| " << fmt(el) << ", W = " << fmt(W) << " (rel "
             << fmt(rel(W, 2 * pi * pi)) << "), sup|K_E - (K - k0)| " << fmt(gauss);
}

// Structure equations on the whole catalog.
void c13(Outcome& o)
{
    double cod = 0.0, egr = 0.0;
    for (const auto& name : catalog_names()) {
        const auto s = catalog(name);
        const double a = codazzi_residual(s).max_abs(), b = intrinsic_curvature_defect(s).max_abs();
        o.require(a <= 1e-6, name + " Codazzi " + fmt(a));
        o.require(b <= 1e-6, name + " intrinsic K " + fmt(b));
        cod = std::max(cod, a);
        egr = std::max(egr, b);
    }
    o.detail << catalog_names().size() << " surfaces, sup Codazzi residual " << fmt(cod) << ", sup intrinsic K defect "
             << fmt(egr);
}

// Gauss–Bonnet.
void c14(Outcome& o)
{
    for (const auto& [name, chi] : std::vector<std::pair<std::string, int>>{{"sphere", 2}, {"torus", 0}}) {
        const auto s = catalog(name);
        const double k0 = 0.0;
        const double GB = functional_value(s, density::gauss());
        const double gap = functional_value(s, density::bending(k0)) - functional_value(s, density::willmore(k0));
        const double area = functional_value(s, density::area());
        const double expect_gap = -2 * pi * chi + 2 * k0 * area;
        o.require(std::abs(GB - 2 * pi * chi) <= 1e-7 * 4 * pi, name + " Gauss-Bonnet");
        o.require(std::abs(gap - expect_gap) <= 1e-6, name + " gap");
        o.detail << name << ": int K = " << fmt(GB) << ", bending - Willmore = " << fmt(gap) << "; ";
    }
}

struct Entry {
    int id;
    const char* title;
    void (*fn)(Outcome&);
};

const std::vector<Entry>& entries()
{
    static const std::vector<Entry> e = {
        {1, "Willmore energy of the unit sphere is 4 pi", c1},
        {2, "p-Willmore energy of S^2(r) is 4 pi r^(2-p)", c2},
        {3, "first variation matches finite differences", c3},
        {4, "sphere first variation with u = 1", c4},
        {5, "evolution of g, g^-1, dS, 2H, K, Laplacian, <h, Hess f>", c5},
        {6, "second variation matches finite differences at critical surfaces", c6},
        {7, "sphere index form on cos(theta)", c7},
        {8, "index sign pattern by eigenspace", c8},
        {9, "coercivity on span{l = 2..6}", c9},
        {10, "Poincare inequalities on the sphere", c10},
        {11, "Laplace-Beltrami spectrum of the sphere", c11},
        {12, "Clifford torus is Willmore critical in S^3", c12},
        {13, "Codazzi and Gauss equations on the catalog", c13},
        {14, "Gauss-Bonnet and the Willmore-bending gap", c14},
    };
    return e;
}

} // namespace

std::vector<int> acceptance_ids()
{
    std::vector<int> ids;
    for (const auto& e : entries()) ids.push_back(e.id);
    return ids;
}

std::string acceptance_title(int id)
{
    for (const auto& e : entries())
        if (e.id == id) return e.title;
    throw ValidationError("unknown acceptance criterion " + std::to_string(id) + " (expected 1..14)");
}

CriterionResult run_criterion(int id)
{
    const Entry* entry = nullptr;
    for (const auto& e : entries())
        if (e.id == id) entry = &e;
    if (!entry) throw ValidationError("unknown acceptance criterion " + std::to_string(id) + " (expected 1..14)");
    CriterionResult r;
    r.id = id;
    r.title = entry->title;
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        entry->fn(o);
    } catch (const std::exception& ex) {
        o.passed = false;
        o.detail << "error: " << ex.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.passed = o.passed;
    r.detail = o.detail.str();
    while (!r.detail.empty() && (r.detail.back() == ' ' || r.detail.back() == ';')) r.detail.pop_back();
    return r;
}

std::vector<CriterionResult> run_acceptance(const std::vector<int>& ids)
{
    std::vector<CriterionResult> out;
    for (int id : ids.empty() ? acceptance_ids() : ids) out.push_back(run_criterion(id));
    return out;
}

std::string format_result(const CriterionResult& r)
{
    char head[16];
    std::snprintf(head, sizeof head, "%02d", r.id);
    std::ostringstream os;
    os << (r.passed ? "[PASS] " : "[FAIL] ") << head << " " << r.title << " | " << r.detail << " ("
       << fmt(r.seconds) << " s)";
    return os.str();
}

} // namespace curvevar
