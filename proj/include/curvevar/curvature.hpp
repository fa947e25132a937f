#pragma once

#include "curvevar/space_form.hpp"
#include "curvevar/taylor.hpp"

#include <Eigen/Core>

#include <array>

namespace curvevar {

/// Partials of the immersion r up to a fixed total order, stored as the Taylor
/// expansion of every ambient coordinate about one chart point.
struct ImmersionJet {
    PointJet position;

    int order() const { return position[0].order(); }
    /// ∂^{a+b} r / ∂u^a ∂v^b.
    AmbientVector partial(int a, int b) const;
};

struct FundamentalForms {
    Eigen::Matrix2d g;
    Eigen::Matrix2d g_inv;
    Eigen::Matrix2d h; // h_ij = <N, r_ij>
    AmbientVector N;
    std::array<Eigen::Matrix2d, 2> gamma; // gamma[k](i, j) = Γ^k_ij
    double dS_weight = 0.0;               // sqrt(det g)
};

struct CurvatureScalars {
    double H = 0.0;
    double K_E = 0.0;
    double K = 0.0;
    double h_norm_sq = 0.0;
    double kappa1 = 0.0; // kappa1 >= kappa2
    double kappa2 = 0.0;
};

/// Local expansions of first-order frame data about a node. An order-n
/// position jet yields order n-1 tangents, metric and normal, order n-2 h.
struct LocalFrame {
    PointJet r_u, r_v;
    std::array<Taylor, 3> g; // g11, g12, g22
    PointJet N;
    std::array<Taylor, 3> h; // h11, h12, h22
};

/// Everything the differential operators and variation formulas need at a node.
struct NodeGeometry {
    AmbientVector position;
    FundamentalForms forms;
    CurvatureScalars scalars;
    Taylor H;         // order >= 2 for order-4 position jets
    Taylor K;         // intrinsic, K_E + k0
    Taylor h_norm_sq; // |h|^2
};

/// Unit normal tangent to the model; normal_sign = ±1 selects the orientation.
LocalFrame local_frame(const PointJet& r, const SpaceForm& sf, int normal_sign);

/// Throws NumericalError("degenerate metric") when det g is not positive.
FundamentalForms fundamental_forms(const ImmersionJet& jet, const SpaceForm& sf, int normal_sign);
CurvatureScalars curvature_scalars(const FundamentalForms& ff, const SpaceForm& sf);
NodeGeometry node_geometry(const ImmersionJet& jet, const SpaceForm& sf, int normal_sign);

/// Gauss curvature from the metric alone (Christoffel-symbol form of the
/// Gauss equation); needs a position jet of order >= 3.
double intrinsic_gauss_curvature(const ImmersionJet& jet, const SpaceForm& sf);
double intrinsic_gauss_curvature(const ImmersionJet& jet);

/// max_{i,j,k} |∇_k h_ij - ∇_j h_ik| at a node.
double codazzi_defect(const ImmersionJet& jet, const SpaceForm& sf, int normal_sign);

/// |R_1212 / det g - (K_E + k0)|, with k0 omitted when include_ambient is false.
double gauss_equation_defect(const ImmersionJet& jet, const SpaceForm& sf, int normal_sign, bool include_ambient = true);

} // namespace curvevar
