#include "curvevar/space_form.hpp"

#include "curvevar/error.hpp"

#include <string>

namespace curvevar {

SpaceForm SpaceForm::sphere(double radius)
{
    if (!(radius > 0.0) || !std::isfinite(radius)) throw ValidationError("sphere model radius must be positive");
    SpaceForm sf;
    sf.model_ = Model::Sphere;
    sf.radius_ = radius;
    sf.k0_ = 1.0 / (radius * radius);
    return sf;
}

SpaceForm SpaceForm::hyperbolic(double radius)
{
    if (!(radius > 0.0) || !std::isfinite(radius)) throw ValidationError("hyperboloid model radius must be positive");
    SpaceForm sf;
    sf.model_ = Model::Hyperboloid;
    sf.radius_ = radius;
    sf.k0_ = -1.0 / (radius * radius);
    return sf;
}

SpaceForm SpaceForm::from_curvature(double k0, std::optional<double> model_radius)
{
    if (!std::isfinite(k0)) throw ValidationError("k0 must be finite");
    if (k0 == 0.0) {
        if (model_radius && std::isfinite(*model_radius))
            throw ValidationError("k0 = 0 is inconsistent with a finite model_radius");
        return euclidean();
    }
    const double rho = 1.0 / std::sqrt(std::abs(k0));
    if (model_radius) {
        const double r = *model_radius;
        if (!(r > 0.0) || std::abs(1.0 / (r * r) - std::abs(k0)) > 1e-12 * std::abs(k0))
            throw ValidationError("k0 = " + std::to_string(k0) + " is inconsistent with model_radius = " +
                                  std::to_string(r) + " (need |k0| = 1/radius^2)");
    }
    const double r = model_radius.value_or(rho);
    return k0 > 0.0 ? sphere(r) : hyperbolic(r);
}

double SpaceForm::dot(const AmbientVector& a, const AmbientVector& b) const
{
    double s = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    if (model_ == Model::Sphere) s += a[3] * b[3];
    if (model_ == Model::Hyperboloid) s -= a[3] * b[3];
    return s;
}

Taylor SpaceForm::dot(const PointJet& a, const PointJet& b) const
{
    Taylor s = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    if (model_ == Model::Sphere) s += a[3] * b[3];
    if (model_ == Model::Hyperboloid) s -= a[3] * b[3];
    return s;
}

bool SpaceForm::is_tangent(const AmbientVector& p, const AmbientVector& v) const
{
    if (model_ == Model::Euclidean) return true;
    return std::abs(dot(p, v)) <= kTangencyTolerance * p.norm() * v.norm();
}

double SpaceForm::ambient_inner(const AmbientVector& p, const AmbientVector& v, const AmbientVector& w) const
{
    if (!is_tangent(p, v) || !is_tangent(p, w)) throw ValidationError("not tangent: vector is not tangent to the model at p");
    return dot(v, w);
}

double SpaceForm::quadric_defect(const AmbientVector& p) const
{
    switch (model_) {
    case Model::Euclidean: return 0.0;
    case Model::Sphere: return std::abs(dot(p, p) - radius_ * radius_) / (radius_ * radius_);
    case Model::Hyperboloid: return std::abs(dot(p, p) + radius_ * radius_) / (radius_ * radius_);
    }
    return 0.0;
}

AmbientVector SpaceForm::geodesic_step(const AmbientVector& p, const AmbientVector& n, double s) const
{
    if (!is_tangent(p, n)) throw ValidationError("not tangent: geodesic direction is not tangent to the model");
    if (std::abs(dot(n, n) - 1.0) > kTangencyTolerance) throw ValidationError("geodesic direction must be a unit vector");
    switch (model_) {
    case Model::Euclidean: return p + s * n;
    case Model::Sphere: return p * std::cos(s / radius_) + radius_ * std::sin(s / radius_) * n;
    case Model::Hyperboloid: return p * std::cosh(s / radius_) + radius_ * std::sinh(s / radius_) * n;
    }
    return p;
}

PointJet SpaceForm::geodesic_step(const PointJet& p, const PointJet& n, const Taylor& s) const
{
    PointJet out;
    const int dim = ambient_dim();
    if (model_ == Model::Euclidean) {
        for (int i = 0; i < dim; ++i) out[i] = p[i] + s * n[i];
        return out;
    }
    const Taylor arg = s / radius_;
    const Taylor c = model_ == Model::Sphere ? cos(arg) : cosh(arg);
    const Taylor sn = (model_ == Model::Sphere ? sin(arg) : sinh(arg)) * radius_;
    for (int i = 0; i < dim; ++i) out[i] = p[i] * c + sn * n[i];
    return out;
}

bool operator==(const SpaceForm& a, const SpaceForm& b)
{
    return a.model() == b.model() && a.k0() == b.k0() && (a.model() == SpaceForm::Model::Euclidean || a.radius() == b.radius());
}

} // namespace curvevar
