#pragma once

#include "curvevar/taylor.hpp"

#include <functional>
#include <map>
#include <string>

namespace curvevar {

/// Curvature density E(H, K) with its first and second partials. Every
/// callable works on local expansions, so surface derivatives of E_H, E_K
/// follow by the chain rule.
struct EnergyDensity {
    using Fn = std::function<Taylor(const Taylor& H, const Taylor& K)>;

    std::string name;
    Fn E, E_H, E_K, E_HH, E_HK, E_KK;
    /// Admissible (H, K); empty means everywhere.
    std::function<bool(double H, double K)> guard;
    std::string guard_description;

    struct Values {
        double E, EH, EK, EHH, EHK, EKK;
    };
    Values at(double H, double K) const;
    double operator()(double H, double K) const { return at(H, K).E; }
    bool admissible(double H, double K) const { return !guard || guard(H, K); }
};

namespace density {

/// H² + k0
EnergyDensity willmore(double k0 = 0.0);
/// H² − K + k0
EnergyDensity bending(double k0 = 0.0);
/// kc (2H + c0)² + kbar K
EnergyDensity helfrich(double kc, double c0, double kbar);
/// H^p; non-integer p requires H > 0.
EnergyDensity pwillmore(double p);
/// K²
EnergyDensity ksquared();
/// 1
EnergyDensity area();
/// K
EnergyDensity gauss();

/// Builds a density by name from keys p, k0, c0, kc, kbar.
EnergyDensity from_name(const std::string& name, const std::map<std::string, double>& params);

} // namespace density

} // namespace curvevar
