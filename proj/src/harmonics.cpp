#include "curvevar/harmonics.hpp"

#include "curvevar/error.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace curvevar {

namespace {

void check_degree(int l, int m)
{
    if (l < 0 || l > kMaxHarmonicDegree)
        throw ValidationError("harmonic degree l must lie in [0, " + std::to_string(kMaxHarmonicDegree) + "]");
    if (std::abs(m) > l) throw ValidationError("harmonic order m must satisfy |m| <= l");
}

} // namespace

Taylor associated_legendre(int l, int m, const Taylor& theta)
{
    check_degree(l, m);
    if (m < 0) throw ValidationError("associated Legendre order must be nonnegative");
    const Taylor x = cos(theta);
    const Taylor s = sin(theta);
    // P_m^m = (2m-1)!! sin^m θ
    double dfact = 1.0;
    for (int k = 1; k <= 2 * m - 1; k += 2) dfact *= k;
    Taylor pmm = dfact * ipow(s, m);
    if (l == m) return pmm;
    Taylor pm1 = (2.0 * m + 1.0) * x * pmm;
    for (int k = m + 2; k <= l; ++k) {
        Taylor pk = ((2.0 * k - 1.0) * x * pm1 - (k + m - 1.0) * pmm) / double(k - m);
        pmm = pm1;
        pm1 = pk;
    }
    return pm1;
}

double harmonic_normalization(int l, int m)
{
    check_degree(l, m);
    const int am = std::abs(m);
    double ratio = 1.0; // (l - |m|)! / (l + |m|)!
    for (int k = l - am + 1; k <= l + am; ++k) ratio /= k;
    const double n = std::sqrt((2.0 * l + 1.0) / (4.0 * std::numbers::pi) * ratio);
    return m == 0 ? n : std::numbers::sqrt2 * n;
}

Taylor real_harmonic(int l, int m, const Taylor& theta, const Taylor& phi, bool normalized)
{
    check_degree(l, m);
    const Taylor p = associated_legendre(l, std::abs(m), theta);
    Taylor y = m == 0 ? p : p * (m > 0 ? cos(double(m) * phi) : sin(double(-m) * phi));
    return normalized ? harmonic_normalization(l, m) * y : y;
}

std::vector<Taylor> real_harmonics_upto(int l_max, const Taylor& theta, const Taylor& phi, bool normalized)
{
    check_degree(l_max, 0);
    const int order = std::min(theta.order(), phi.order());
    std::vector<Taylor> out((l_max + 1) * (l_max + 1));
    const Taylor x = cos(theta), s = sin(theta);
    const Taylor c1 = cos(phi), s1 = sin(phi);
    Taylor cm = Taylor::constant(1.0, order), sm = Taylor::constant(0.0, order);
    Taylor pmm = Taylor::constant(1.0, order);
    for (int m = 0; m <= l_max; ++m) {
        if (m > 0) {
            pmm = (2.0 * m - 1.0) * s * pmm;
            const Taylor c = cm * c1 - sm * s1;
            sm = sm * c1 + cm * s1;
            cm = c;
        }
        Taylor plm2 = pmm, plm1 = pmm;
        for (int l = m; l <= l_max; ++l) {
            Taylor p;
            if (l == m)
                p = pmm;
            else if (l == m + 1)
                p = (2.0 * m + 1.0) * x * pmm;
            else
                p = ((2.0 * l - 1.0) * x * plm1 - (l + m - 1.0) * plm2) / double(l - m);
            if (l > m) plm2 = plm1;
            plm1 = p;
            const double nplus = normalized ? harmonic_normalization(l, m) : 1.0;
            if (m == 0) {
                out[l * l + l] = nplus * p;
            } else {
                out[l * l + l + m] = nplus * (p * cm);
                out[l * l + l - m] = (normalized ? harmonic_normalization(l, -m) : 1.0) * (p * sm);
            }
        }
    }
    return out;
}

} // namespace curvevar
