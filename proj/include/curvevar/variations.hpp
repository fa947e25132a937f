#pragma once

#include "curvevar/density.hpp"
#include "curvevar/field.hpp"
#include "curvevar/surface.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace curvevar {

/// F[r] = ∫ E(H, K) dS. Open patches need allow_open.
double functional_value(const SurfaceSample& s, const EnergyDensity& E, bool allow_open = false);

/// δF along the normal variation u N, from the pointwise evolution of H, K
/// and dS (no integration by parts). On open patches u must vanish on the
/// boundary rows.
double first_variation(const SurfaceSample& s, const EnergyDensity& E, const ScalarField& u);

/// Euler–Lagrange expression, δF = ∫ EL · u dS:
/// ½ΔE_H + (2H² − K + 2k0)E_H + 2HΔE_K − <h, Hess E_K> + 2HK E_K − 2HE.
ScalarField el_residual(const SurfaceSample& s, const EnergyDensity& E);

/// Per-node magnitude used to judge |EL| against: the sum of the absolute
/// values of the six EL terms.
ScalarField el_scale(const SurfaceSample& s, const EnergyDensity& E);

struct SecondVariationOptions {
    /// Evaluate even when the surface fails the criticality check.
    bool force = false;
    /// Relative criticality tolerance against el_scale.
    double tolerance = 1e-5;
    /// Accept EL ≡ λ (critical for F − λV) instead of EL ≡ 0.
    bool volume_constrained = false;
};

struct SecondVariationResult {
    static constexpr int kTerms = 10;

    double value = 0.0;
    /// The ten integrals summing to value.
    std::array<double, kTerms> terms{};
    /// Multiplier: 0, or the mean of EL when volume constrained.
    double lambda = 0.0;
    /// sup |EL − λ| and sup el_scale over the nodes.
    double criticality_residual = 0.0;
    double criticality_scale = 0.0;
    bool critical = false;
    /// "critical", "volume-constrained critical" or "formula outside stated validity".
    std::string validity;
    /// value + 2λ ∫ H u² dS, the second derivative of F − λV along the
    /// geodesic normal path.
    double augmented = 0.0;
};

/// Second variation of F at a critical immersion along the normal variation
/// u N with u fixed in chart coordinates. Throws NumericalError when the
/// criticality check fails and force is off.
SecondVariationResult second_variation(const SurfaceSample& s, const EnergyDensity& E, const ScalarField& u,
                                       const SecondVariationOptions& opt = {});

/// V = (1/3) ∫ <x, N> dS, so δV = ∫ u dS. Euclidean closed surfaces only.
double enclosed_volume(const SurfaceSample& s);

struct VariationReport {
    std::string quantity;
    int order = 1;
    double formula_value = 0.0;
    double oracle_value = 0.0; // Richardson-combined finite difference
    double abs_error = 0.0;
    double rel_error = 0.0;
    /// log2(e(h1) / e(h2)) of the plain differences; +inf when both sit
    /// below the round-off floor.
    double convergence_order = 0.0;
    double h1 = 0.0, h2 = 0.0;
    double lambda = 0.0;
    /// Second order only: formula value + 2λ∫Hu², and the criticality label.
    double augmented_formula = 0.0;
    std::string validity;
};

struct OracleOptions {
    /// Base step; default 1e-3 · (min curvature radius) / max|u|.
    std::optional<double> step;
    /// Multiplier for F − λV; defaults to 0 at critical points, else the mean of EL.
    std::optional<double> lambda;
    /// Compare against value + 2λ∫Hu² instead of the plain formula.
    bool compare_augmented = false;
    SecondVariationOptions second;
};

/// Compares first_variation (order 1) or second_variation (order 2) with
/// centered differences of t ↦ F(r_t) − λ V(r_t) along the geodesic normal
/// deformation, at steps h and h/2.
VariationReport fd_variation_oracle(const SurfaceSample& s, const EnergyDensity& E, const ScalarField& u, int order,
                                    const OracleOptions& opt = {});
/// Several densities along one shared deformation.
std::vector<VariationReport> fd_variation_oracle(const SurfaceSample& s, const std::vector<EnergyDensity>& Es,
                                                 const ScalarField& u, int order, const OracleOptions& opt = {});

enum class EvolutionQuantity { Metric, InverseMetric, AreaElement, MeanCurvature2H, GaussCurvature, LaplacianF, HHessF };

/// metric, inverse_metric, area_element, 2H, K, laplacian_f, h_hess_f.
EvolutionQuantity parse_evolution_quantity(const std::string& name);
std::string to_string(EvolutionQuantity q);
std::vector<EvolutionQuantity> all_evolution_quantities();

/// Pointwise first-order evolution of a geometric quantity (f fixed in the
/// chart for laplacian_f and h_hess_f) against centered differences in t.
/// Errors are sup norms over nodes and components, relative to the sup of
/// the absolute formula terms.
VariationReport evolution_check(const SurfaceSample& s, const ScalarField& u, EvolutionQuantity q,
                                const ScalarField* f = nullptr, std::optional<double> step = std::nullopt);
std::vector<VariationReport> evolution_check(const SurfaceSample& s, const ScalarField& u,
                                            const std::vector<EvolutionQuantity>& qs, const ScalarField* f = nullptr,
                                            std::optional<double> step = std::nullopt);

/// Default finite-difference step for deformations of s by u.
double default_deformation_step(const SurfaceSample& s, const ScalarField& u);

} // namespace curvevar
