#pragma once

#include "curvevar/field.hpp"
#include "curvevar/surface.hpp"

#include <cstdint>
#include <string>

namespace curvevar {

ScalarField constant_field(const SurfaceSample& s, double c);
/// The chart coordinate u (axis 0) or v (axis 1) as a field.
ScalarField coordinate_field(const SurfaceSample& s, int axis);

/// P_l^{|m|}(cos θ)·{cos mφ | sin |m|φ} on a sphere chart (l = 1 gives cos θ).
ScalarField harmonic_field(const SurfaceSample& s, int l, int m);
/// Real harmonic with unit L²(dS) norm on a round sphere sample.
ScalarField orthonormal_harmonic_field(const SurfaceSample& s, int l, int m);
/// Radius R with area 4πR² for the sphere-like catalog entries.
double sphere_area_radius(const SurfaceSample& s);

/// Seeded band-limited smooth field scaled to max |u| = 1: harmonics l <= 4
/// on sphere charts, low Fourier modes on periodic charts, and a compactly
/// supported bump profile across open directions.
ScalarField random_field(const SurfaceSample& s, std::uint64_t seed);
/// Seeded combination of orthonormal harmonics with lmin <= l <= lmax (sphere charts).
ScalarField random_harmonic_field(const SurfaceSample& s, std::uint64_t seed, int lmin, int lmax);

/// Parses "const[:c]", "zero", "harmonic:l,m", "random:seed=N" or a CSV path.
ScalarField parse_field(const std::string& spec, const SurfaceSample& s);

} // namespace curvevar
