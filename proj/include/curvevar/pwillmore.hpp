#pragma once

#include "curvevar/field.hpp"
#include "curvevar/surface.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace curvevar {

struct PWillmoreSetting {
    double p = 2.0;
    double r = 1.0;
    double k0 = 0.0;

    /// Throws ValidationError unless p >= 1 and r > 0.
    void validate() const;
};

/// (p/2)Δ(H^{p−1}) + p(2H² − K + 2k0)H^{p−1} − 2H^{p+1}. k0 must match the
/// sample's ambient curvature; non-integer p needs H > 0.
ScalarField pwillmore_el_residual(const SurfaceSample& s, double p, double k0);

/// Round sphere of radius r in R^3, oriented with H = 1/r, on the default grid.
SurfaceSample stability_sphere(double r, int nu = 128, int nv = 64);

/// (1/r^p) ∫ [p(p−1)r²/4 (Δu)² + (p²−p−1) uΔu + (p−1)(p−2)/r² u²] dS on the
/// sphere sample s of radius setting.r; requires ∫u dS = 0.
double sphere_index_form(const PWillmoreSetting& setting, const SurfaceSample& s, const ScalarField& u);

/// The p-independent integrals ∫(Δu)², ∫uΔu, ∫u² behind the index form.
struct SphereIndexIntegrals {
    double r = 1.0;
    double lap_sq = 0.0, u_lap = 0.0, u_sq = 0.0;
};
SphereIndexIntegrals sphere_index_integrals(const SurfaceSample& s, const ScalarField& u);
double sphere_index_form(const PWillmoreSetting& setting, const SphereIndexIntegrals& I);

/// (λ_k, N_k) = (k(k+1)/r², C(k+2, 2)).
std::pair<double, long> sphere_spectrum(int k, double r);

struct SpectrumCheck {
    int k = 0;
    double eigenvalue = 0.0;
    long n_k = 0;
    /// max over the 2k+1 sampled harmonics of sup|ΔY + λY| / (λ sup|Y|),
    /// with the grid Laplacian on node values.
    double max_rel_error = 0.0;
    /// Degree-k homogeneous polynomials restricted to the sphere: the rank of
    /// their span and how many Laplacian eigenvalues in it equal λ_k.
    int polynomial_rank = 0;
    int multiplicity = 0;
    std::vector<double> polynomial_eigenvalues;
};

SpectrumCheck spectrum_check(const SurfaceSample& s, int k);

struct HarmonicDecomposition {
    int l_max = 0;
    /// ∫ u Y_lm dS against the L²(dS)-orthonormal real harmonics.
    std::map<std::pair<int, int>, double> coefficients;
    /// ∫ (u − Σ c_lm Y_lm)² dS.
    double residual = 0.0;
    double norm_sq = 0.0; // ∫ u² dS

    double coefficient(int l, int m) const;
    /// |Σ c² + residual − ∫u²| / ∫u².
    double parseval_defect() const;
    /// (l, m) with |c_lm| > tol · ‖u‖.
    std::vector<std::pair<int, int>> nonzero(double tol = 1e-8) const;
    bool is_orthogonal_to_first_eigenspace(double tol = 1e-8) const;
    bool is_orthogonal_to_constants(double tol = 1e-8) const;
};

HarmonicDecomposition harmonic_project(const SurfaceSample& s, const ScalarField& u, int l_max);

struct PoincareReport {
    double u_sq = 0.0;      // ∫u²
    double grad_term = 0.0; // (r²/6) ∫|∇u|²
    double lap_term = 0.0;  // (r⁴/36) ∫(Δu)²
    double ratio_grad = 0.0, ratio_lap = 0.0;
    bool holds = false;
    bool equality = false;
};

/// Both Poincaré inequalities on the sphere sample; u must be nonconstant and
/// orthogonal to constants and to the first eigenspace.
PoincareReport poincare_check(const SurfaceSample& s, const ScalarField& u);

struct VolumeVariations {
    double first = 0.0;  // ∫ u dS
    double second = 0.0; // ∫ −2H u² dS
};

VolumeVariations volume_variations(const SurfaceSample& s, const ScalarField& u);

struct EigenspaceIndex {
    int l = 0;
    double eigenvalue = 0.0;
    /// Index of the zonal member normalized to ∫u² dS = 1.
    double index = 0.0;
    /// Largest relative deviation across the 2l+1 members.
    double member_spread = 0.0;
    int sign = 0;
};

struct StabilityReport {
    double p = 0.0, r = 0.0;
    std::vector<EigenspaceIndex> eigenspaces;
    std::string sign_summary; // e.g. "-+++"
    /// Smallest index per unit mass over l >= 2, and the comparison constant
    /// (2p² − 3p + 4)/(2r²).
    double min_quotient = 0.0;
    double coercivity_bound = 0.0;
    bool bound_holds = false;
    std::string verdict;
};

StabilityReport stability_report(const PWillmoreSetting& setting, int l_max, int nu = 128, int nv = 64);
/// Reports for several settings; eigenspace integrals are shared per radius.
std::vector<StabilityReport> stability_reports(const std::vector<PWillmoreSetting>& settings, int l_max, int nu = 128,
                                               int nv = 64);

} // namespace curvevar
