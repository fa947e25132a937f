#pragma once

#include <Eigen/Core>

#include <array>
#include <memory>
#include <vector>

namespace curvevar {

struct Interval {
    double lo = 0.0;
    double hi = 1.0;
    double length() const { return hi - lo; }
    friend bool operator==(const Interval&, const Interval&) = default;
};

/// Structured parameter grid. Periodic directions sample lo + i·Δ with
/// Δ = length/n; open directions sample cell centres lo + (i + ½)Δ. With
/// pole_offset the v ends are chart poles (sphere-like charts, v = polar angle).
struct PatchDomain {
    Interval u_range{0.0, 1.0};
    Interval v_range{0.0, 1.0};
    int nu = 0;
    int nv = 0;
    bool periodic_u = false;
    bool periodic_v = false;
    bool pole_offset = false;

    /// Throws ValidationError when the invariants fail.
    void validate() const;

    int size() const { return nu * nv; }
    int node(int i, int j) const { return i + nu * j; }
    int node_i(int node) const { return node % nu; }
    int node_j(int node) const { return node / nu; }
    double u_step() const { return u_range.length() / nu; }
    double v_step() const { return v_range.length() / nv; }
    double u_at(int i) const;
    double v_at(int j) const;
    /// Both directions periodic, or periodic in u with poles in v.
    bool closed() const;

    friend bool operator==(const PatchDomain&, const PatchDomain&) = default;
};

PatchDomain periodic_domain(int nu, int nv, double u_length = 2.0 * 3.14159265358979323846,
                            double v_length = 2.0 * 3.14159265358979323846);
/// φ ∈ [0, 2π) periodic, θ ∈ [0, π] pole-offset.
PatchDomain spherical_domain(int nu, int nv);

/// 1-D quadrature weights for the u and v directions: trapezoid on periodic
/// directions, midpoint on open ones, Fejér's first rule in cos θ on
/// pole-offset directions (weights include 1/sin θ, since dS carries sin θ).
Eigen::VectorXd quadrature_weights_u(const PatchDomain& d);
Eigen::VectorXd quadrature_weights_v(const PatchDomain& d);

/// Differentiation of grid-sampled functions: spectral in periodic directions,
/// spectral on the doubled latitude circle for pole-offset charts, and
/// 9-point Fornberg stencils in open directions.
class GridDifferentiator {
public:
    static constexpr int kMaxOrder = 4;

    explicit GridDifferentiator(const PatchDomain& d);
    /// Shared instance for d from a small process-wide cache.
    static std::shared_ptr<const GridDifferentiator> cached(const PatchDomain& d);

    /// ∂^{a+b} F / ∂u^a ∂v^b at every node, F indexed by node.
    Eigen::VectorXd partial(const Eigen::VectorXd& F, int a, int b) const;
    /// All partials with a + b <= order, ordered by Taylor::index(a, b).
    std::vector<Eigen::VectorXd> partials(const Eigen::VectorXd& F, int order) const;

private:
    Eigen::MatrixXd apply_u(const Eigen::MatrixXd& F, int a) const;
    Eigen::MatrixXd apply_v(const Eigen::MatrixXd& F, int b) const;

    PatchDomain d_;
    std::array<Eigen::MatrixXd, kMaxOrder + 1> du_;
    std::array<Eigen::MatrixXd, kMaxOrder + 1> dv_;      // direct v matrices
    std::array<Eigen::MatrixXd, kMaxOrder + 1> dv_pole_; // reflected half for pole charts
};

/// Fornberg finite-difference weights for derivative k at x0 from nodes x.
Eigen::VectorXd fornberg_weights(double x0, const std::vector<double>& x, int k);

} // namespace curvevar
