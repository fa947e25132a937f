#pragma once

#include "curvevar/taylor.hpp"

#include <vector>

namespace curvevar {

constexpr int kMaxHarmonicDegree = 8;

/// P_l^m(cos θ), 0 <= m <= l, without the Condon–Shortley phase.
Taylor associated_legendre(int l, int m, const Taylor& theta);

/// Factor making N·P_l^{|m|}(cos θ)·{cos mφ | sin |m|φ} orthonormal on the unit sphere.
double harmonic_normalization(int l, int m);

/// Real spherical harmonic; m > 0 cosine type, m < 0 sine type. With
/// normalized = false the plain P_l^{|m|}(cos θ)·trig product is returned.
Taylor real_harmonic(int l, int m, const Taylor& theta, const Taylor& phi, bool normalized = true);
/// All real_harmonic(l, m) with l <= l_max, stored at index l² + l + m.
std::vector<Taylor> real_harmonics_upto(int l_max, const Taylor& theta, const Taylor& phi, bool normalized = true);

} // namespace curvevar
