#pragma once

#include "curvevar/taylor.hpp"

#include <Eigen/Core>

#include <cmath>
#include <limits>
#include <optional>

namespace curvevar {

using AmbientVector = Eigen::Vector4d;

/// Ambient 3-manifold of constant sectional curvature k0, realized as flat R^3,
/// the round 3-sphere of radius rho in R^4, or the hyperboloid
/// <x,x> = -rho^2 in Minkowski space with signature (+,+,+,-).
///
/// Points and vectors are stored in four components; the last one is unused
/// (zero) in the Euclidean model.
class SpaceForm {
public:
    enum class Model { Euclidean, Sphere, Hyperboloid };

    static constexpr double kTangencyTolerance = 1e-8;

    SpaceForm() = default;

    static SpaceForm euclidean() { return {}; }
    static SpaceForm sphere(double radius);
    static SpaceForm hyperbolic(double radius);
    /// Builds the model matching k0; an explicit radius must satisfy |k0| = 1/radius^2.
    static SpaceForm from_curvature(double k0, std::optional<double> model_radius = std::nullopt);

    Model model() const { return model_; }
    double k0() const { return k0_; }
    /// Model radius rho; infinite for the Euclidean model.
    double radius() const { return radius_; }
    int ambient_dim() const { return model_ == Model::Euclidean ? 3 : 4; }

    /// Sign of the ambient quadratic form on coordinate i.
    double metric_sign(int i) const { return (model_ == Model::Hyperboloid && i == 3) ? -1.0 : 1.0; }

    /// Ambient bilinear form (Euclidean or Minkowski), without tangency checks.
    double dot(const AmbientVector& a, const AmbientVector& b) const;
    Taylor dot(const PointJet& a, const PointJet& b) const;

    /// <v, w> at p; throws if v or w is not tangent to the model at p.
    double ambient_inner(const AmbientVector& p, const AmbientVector& v, const AmbientVector& w) const;

    /// Moves from p along the geodesic with initial unit direction n for arc length s.
    AmbientVector geodesic_step(const AmbientVector& p, const AmbientVector& n, double s) const;
    /// Jet version used for deformations; no precondition checks.
    PointJet geodesic_step(const PointJet& p, const PointJet& n, const Taylor& s) const;

    /// Relative violation of the model constraint <p,p> = ±rho^2 (0 for Euclidean).
    double quadric_defect(const AmbientVector& p) const;
    bool is_tangent(const AmbientVector& p, const AmbientVector& v) const;

private:
    Model model_ = Model::Euclidean;
    double k0_ = 0.0;
    double radius_ = std::numeric_limits<double>::infinity();
};

bool operator==(const SpaceForm& a, const SpaceForm& b);

} // namespace curvevar
