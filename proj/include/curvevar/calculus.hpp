#pragma once

#include "curvevar/field.hpp"
#include "curvevar/surface.hpp"

#include <Eigen/Core>

#include <vector>

namespace curvevar {

/// Contravariant components ∇^i f = g^{ij} f_j per node.
using VectorField = std::vector<Eigen::Vector2d>;

/// Symmetric (0,2)-tensor per node, components in chart coordinates.
struct TensorField02 {
    std::vector<Eigen::Matrix2d> values;
    int size() const { return static_cast<int>(values.size()); }
    const Eigen::Matrix2d& operator[](int n) const { return values[n]; }
};

// Pointwise kernels on a local expansion of f (order >= 2 for second derivatives).
Eigen::Vector2d chart_gradient(const Taylor& f);
Eigen::Matrix2d covariant_hessian(const Taylor& f, const FundamentalForms& ff);
double laplacian(const Taylor& f, const FundamentalForms& ff);
/// <a, b> = g^{ik} g^{jl} a_ij b_kl.
double contract(const Eigen::Matrix2d& a, const Eigen::Matrix2d& b, const Eigen::Matrix2d& g_inv);
/// (h²)_ij = g^{kl} h_li h_kj.
Eigen::Matrix2d h_squared(const FundamentalForms& ff);

VectorField gradient(const ScalarField& f, const SurfaceSample& s);
/// |∇f|² = g^{ij} f_i f_j.
ScalarField gradient_norm_sq(const ScalarField& f, const SurfaceSample& s);
TensorField02 hessian(const ScalarField& f, const SurfaceSample& s);
ScalarField laplace_beltrami(const ScalarField& f, const SurfaceSample& s);
ScalarField contract(const TensorField02& a, const TensorField02& b, const SurfaceSample& s);
TensorField02 h_squared(const SurfaceSample& s);
TensorField02 metric_tensor(const SurfaceSample& s);
TensorField02 second_fundamental_form(const SurfaceSample& s);

/// Node weights w such that Σ w_n f_n ≈ ∫ f dS. Open domains need allow_open.
Eigen::VectorXd quadrature_weights(const SurfaceSample& s, bool allow_open = false);
double integrate(const ScalarField& f, const SurfaceSample& s, bool allow_open = false);
double integrate(const Eigen::VectorXd& values, const SurfaceSample& s, bool allow_open = false);
/// Neumaier-compensated Σ w_n f_n in node order.
double weighted_sum(const Eigen::VectorXd& w, const Eigen::VectorXd& f);

} // namespace curvevar
