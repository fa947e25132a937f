#include "curvevar/density.hpp"

#include "curvevar/error.hpp"

#include <cmath>

namespace curvevar {

namespace {

Taylor zero_like(const Taylor& a, const Taylor& b) { return Taylor::constant(0.0, std::min(a.order(), b.order())); }
Taylor const_like(double c, const Taylor& a, const Taylor& b) { return Taylor::constant(c, std::min(a.order(), b.order())); }

bool is_integer(double p) { return std::floor(p) == p && std::abs(p) < 1e6; }

} // namespace

EnergyDensity::Values EnergyDensity::at(double H, double K) const
{
    const Taylor h = Taylor::constant(H, 0), k = Taylor::constant(K, 0);
    return {E(h, k).value(), E_H(h, k).value(), E_K(h, k).value(),
            E_HH(h, k).value(), E_HK(h, k).value(), E_KK(h, k).value()};
}

namespace density {

EnergyDensity willmore(double k0)
{
    EnergyDensity d;
    d.name = "willmore";
    d.E = [k0](const Taylor& H, const Taylor&) { return H * H + k0; };
    d.E_H = [](const Taylor& H, const Taylor&) { return 2.0 * H; };
    d.E_K = zero_like;
    d.E_HH = [](const Taylor& H, const Taylor& K) { return const_like(2.0, H, K); };
    d.E_HK = zero_like;
    d.E_KK = zero_like;
    return d;
}

EnergyDensity bending(double k0)
{
    EnergyDensity d;
    d.name = "bending";
    d.E = [k0](const Taylor& H, const Taylor& K) { return H * H - K + k0; };
    d.E_H = [](const Taylor& H, const Taylor&) { return 2.0 * H; };
    d.E_K = [](const Taylor& H, const Taylor& K) { return const_like(-1.0, H, K); };
    d.E_HH = [](const Taylor& H, const Taylor& K) { return const_like(2.0, H, K); };
    d.E_HK = zero_like;
    d.E_KK = zero_like;
    return d;
}

EnergyDensity helfrich(double kc, double c0, double kbar)
{
    EnergyDensity d;
    d.name = "helfrich";
    d.E = [=](const Taylor& H, const Taylor& K) {
        const Taylor m = 2.0 * H + c0;
        return kc * m * m + kbar * K;
    };
    d.E_H = [=](const Taylor& H, const Taylor&) { return 4.0 * kc * (2.0 * H + c0); };
    d.E_K = [=](const Taylor& H, const Taylor& K) { return const_like(kbar, H, K); };
    d.E_HH = [=](const Taylor& H, const Taylor& K) { return const_like(8.0 * kc, H, K); };
    d.E_HK = zero_like;
    d.E_KK = zero_like;
    return d;
}

EnergyDensity pwillmore(double p)
{
    if (!std::isfinite(p) || p < 0.0) throw ValidationError("p-Willmore exponent p must be finite and >= 0");
    EnergyDensity d;
    d.name = "pwillmore";
    // H^q with exact integer powers (H^0 = 1, negative powers never needed when their factor vanishes).
    auto power = [p](double shift, double factor) -> EnergyDensity::Fn {
        const double q = p - shift;
        if (factor == 0.0) return zero_like;
        if (is_integer(p)) {
            if (q < 0.0) return zero_like; // coefficient p(p-1)... vanishes
            const int n = static_cast<int>(q);
            return [n, factor](const Taylor& H, const Taylor&) { return factor * ipow(H, n); };
        }
        return [q, factor](const Taylor& H, const Taylor&) { return factor * pow(H, q); };
    };
    d.E = power(0.0, 1.0);
    d.E_H = power(1.0, p);
    d.E_HH = power(2.0, p * (p - 1.0));
    d.E_K = zero_like;
    d.E_HK = zero_like;
    d.E_KK = zero_like;
    if (!is_integer(p)) {
        d.guard = [](double H, double) { return H > 0.0; };
        d.guard_description = "H > 0 (non-integer p)";
    }
    return d;
}

EnergyDensity ksquared()
{
    EnergyDensity d;
    d.name = "ksquared";
    d.E = [](const Taylor&, const Taylor& K) { return K * K; };
    d.E_H = zero_like;
    d.E_K = [](const Taylor&, const Taylor& K) { return 2.0 * K; };
    d.E_HH = zero_like;
    d.E_HK = zero_like;
    d.E_KK = [](const Taylor& H, const Taylor& K) { return const_like(2.0, H, K); };
    return d;
}

EnergyDensity area()
{
    EnergyDensity d;
    d.name = "area";
    d.E = [](const Taylor& H, const Taylor& K) { return const_like(1.0, H, K); };
    d.E_H = d.E_K = d.E_HH = d.E_HK = d.E_KK = zero_like;
    return d;
}

EnergyDensity gauss()
{
    EnergyDensity d;
    d.name = "gauss";
    d.E = [](const Taylor&, const Taylor& K) { return K; };
    d.E_K = [](const Taylor& H, const Taylor& K) { return const_like(1.0, H, K); };
    d.E_H = d.E_HH = d.E_HK = d.E_KK = zero_like;
    return d;
}

EnergyDensity from_name(const std::string& name, const std::map<std::string, double>& params)
{
    auto get = [&](const char* key, double fallback) {
        const auto it = params.find(key);
        return it == params.end() ? fallback : it->second;
    };
    if (name == "willmore") return willmore(get("k0", 0.0));
    if (name == "bending") return bending(get("k0", 0.0));
    if (name == "helfrich") return helfrich(get("kc", 1.0), get("c0", 0.0), get("kbar", 0.0));
    if (name == "pwillmore") return pwillmore(get("p", 2.0));
    if (name == "ksquared") return ksquared();
    if (name == "area") return area();
    if (name == "gauss") return gauss();
    throw ValidationError("unknown density '" + name +
                          "' (expected willmore, bending, helfrich, pwillmore, ksquared, area or gauss)");
}

} // namespace density

} // namespace curvevar
