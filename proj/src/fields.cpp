#include "curvevar/fields.hpp"

#include "curvevar/error.hpp"
#include "curvevar/harmonics.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <string>
#include <vector>

namespace curvevar {

namespace {

void require_sphere_chart(const SurfaceSample& s)
{
    if (!s.spherical_chart())
        throw ValidationError("harmonic fields need a sphere chart (longitude, polar angle); surface '" + s.name() +
                              "' has none");
}

// exp(1 - 1/(1 - x²)) on |x| < 1, zero outside; peak value 1.
Taylor bump(const Taylor& x)
{
    if (std::abs(x.value()) >= 1.0) return Taylor::constant(0.0, x.order());
    return exp(1.0 - inverse(1.0 - x * x));
}

ScalarField normalized(const SurfaceSample& s, FieldMap map)
{
    ScalarField f = ScalarField::from_map(s.domain(), map);
    const double m = f.max_abs();
    if (!(m > 0.0)) return f;
    return ScalarField::from_map(s.domain(), [map = std::move(map), m](double u, double v, int order) {
        return map(u, v, order) / m;
    });
}

} // namespace

ScalarField constant_field(const SurfaceSample& s, double c) { return ScalarField::constant(s.domain(), c); }

ScalarField coordinate_field(const SurfaceSample& s, int axis)
{
    if (axis != 0 && axis != 1) throw ValidationError("coordinate axis must be 0 (u) or 1 (v)");
    return ScalarField::from_map(s.domain(), [axis](double u, double v, int order) {
        return axis == 0 ? Taylor::variable_u(u, order) : Taylor::variable_v(v, order);
    });
}

ScalarField harmonic_field(const SurfaceSample& s, int l, int m)
{
    require_sphere_chart(s);
    real_harmonic(l, m, 0.0, 0.0, false); // validates (l, m)
    return ScalarField::from_map(s.domain(), [l, m](double u, double v, int order) {
        return real_harmonic(l, m, Taylor::variable_v(v, order), Taylor::variable_u(u, order), false);
    });
}

double sphere_area_radius(const SurfaceSample& s)
{
    if (s.name() == "sphere") return s.param("r");
    if (s.name() == "geodesic_sphere_S3") return s.space_form().radius() * std::sin(s.param("a") / s.space_form().radius());
    if (s.name() == "geodesic_sphere_H3") return s.space_form().radius() * std::sinh(s.param("a") / s.space_form().radius());
    throw ValidationError("surface '" + s.name() + "' is not a round sphere");
}

ScalarField orthonormal_harmonic_field(const SurfaceSample& s, int l, int m)
{
    require_sphere_chart(s);
    const double R = sphere_area_radius(s);
    real_harmonic(l, m, 0.0, 0.0, true);
    return ScalarField::from_map(s.domain(), [l, m, R](double u, double v, int order) {
        return real_harmonic(l, m, Taylor::variable_v(v, order), Taylor::variable_u(u, order), true) / R;
    });
}

ScalarField random_harmonic_field(const SurfaceSample& s, std::uint64_t seed, int lmin, int lmax)
{
    require_sphere_chart(s);
    if (lmin < 0 || lmax < lmin || lmax > kMaxHarmonicDegree)
        throw ValidationError("random harmonic band must satisfy 0 <= lmin <= lmax <= 8");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    struct Term {
        int l, m;
        double c;
    };
    std::vector<Term> terms;
    for (int l = lmin; l <= lmax; ++l)
        for (int m = -l; m <= l; ++m) terms.push_back({l, m, g(rng)});
    return normalized(s, [terms, lmax](double u, double v, int order) {
        const auto Y = real_harmonics_upto(lmax, Taylor::variable_v(v, order), Taylor::variable_u(u, order));
        Taylor sum = Taylor::constant(0.0, order);
        for (const auto& t : terms) sum += t.c * Y[t.l * t.l + t.l + t.m];
        return sum;
    });
}

ScalarField random_field(const SurfaceSample& s, std::uint64_t seed)
{
    const PatchDomain& d = s.domain();
    if (s.spherical_chart()) return random_harmonic_field(s, seed, 0, 4);

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    constexpr int kModes = 3;
    // Fourier coefficients (cos, sin) per (k1, k2), weighted towards low modes.
    struct Mode {
        int k1, k2;
        double a, b;
    };
    std::vector<Mode> modes;
    const int k2max = d.periodic_v ? kModes : 0;
    const int k1max = d.periodic_u ? kModes : 0;
    for (int k1 = -k1max; k1 <= k1max; ++k1)
        for (int k2 = 0; k2 <= k2max; ++k2) {
            if (k2 == 0 && k1 < 0) continue;
            const double w = 1.0 / (1.0 + k1 * k1 + k2 * k2);
            modes.push_back({k1, k2, w * g(rng), (k1 == 0 && k2 == 0) ? 0.0 : w * g(rng)});
        }
    const double px = g(rng), py = g(rng), pxy = g(rng);
    const double wu = 2.0 * std::numbers::pi / d.u_range.length();
    const double wv = 2.0 * std::numbers::pi / d.v_range.length();
    const double cu = 0.5 * (d.u_range.lo + d.u_range.hi), hu = 0.4 * d.u_range.length();
    const double cv = 0.5 * (d.v_range.lo + d.v_range.hi), hv = 0.4 * d.v_range.length();
    const bool pu = d.periodic_u, pv = d.periodic_v;
    return normalized(s, [=](double u, double v, int order) {
        const Taylor U = Taylor::variable_u(u, order), V = Taylor::variable_v(v, order);
        // cos/sin of k·ω·U and k·ω·V for k = 0..kModes, combined by angle addition.
        std::array<Taylor, kModes + 1> cu_, su_, cv_, sv_;
        cu_[0] = cv_[0] = Taylor::constant(1.0, order);
        su_[0] = sv_[0] = Taylor::constant(0.0, order);
        const Taylor c1u = cos(wu * U), s1u = sin(wu * U), c1v = cos(wv * V), s1v = sin(wv * V);
        for (int k = 1; k <= kModes; ++k) {
            cu_[k] = cu_[k - 1] * c1u - su_[k - 1] * s1u;
            su_[k] = su_[k - 1] * c1u + cu_[k - 1] * s1u;
            cv_[k] = cv_[k - 1] * c1v - sv_[k - 1] * s1v;
            sv_[k] = sv_[k - 1] * c1v + cv_[k - 1] * s1v;
        }
        // Σ a cos(k1 ωu + k2 ωv) + b sin(...) = Σ_k2 cos(k2 ωv) P_k2 + sin(k2 ωv) Q_k2.
        std::array<Taylor, kModes + 1> P, Q;
        P.fill(Taylor::constant(0.0, order));
        Q.fill(Taylor::constant(0.0, order));
        for (const auto& m : modes) {
            const int a = std::abs(m.k1);
            const double sg = m.k1 < 0 ? -1.0 : 1.0;
            P[m.k2] += m.a * cu_[a] + (sg * m.b) * su_[a];
            Q[m.k2] += m.b * cu_[a] - (sg * m.a) * su_[a];
        }
        Taylor sum = Taylor::constant(0.0, order);
        for (int k = 0; k <= kModes; ++k) sum += cv_[k] * P[k] + sv_[k] * Q[k];
        if (!pu || !pv) {
            // compact support across open directions
            Taylor profile = Taylor::constant(1.0, order);
            Taylor x = Taylor::constant(0.0, order), y = Taylor::constant(0.0, order);
            if (!pu) {
                x = (U - cu) / hu;
                profile *= bump(x);
            }
            if (!pv) {
                y = (V - cv) / hv;
                profile *= bump(y);
            }
            sum = profile * (sum + 0.3 * (px * x + py * y + pxy * x * y));
        }
        return sum;
    });
}

ScalarField parse_field(const std::string& spec, const SurfaceSample& s)
{
    auto fail = [&](const std::string& why) {
        return ValidationError("--u '" + spec + "': " + why +
                               " (expected const[:c], zero, harmonic:l,m, random:seed=N, or a CSV file u,v,value)");
    };
    if (spec == "const") return constant_field(s, 1.0);
    if (spec == "zero") return constant_field(s, 0.0);
    if (spec.rfind("const:", 0) == 0) {
        try {
            return constant_field(s, std::stod(spec.substr(6)));
        } catch (const std::logic_error&) {
            throw fail("bad constant");
        }
    }
    if (spec.rfind("harmonic:", 0) == 0) {
        const std::string rest = spec.substr(9);
        const auto comma = rest.find(',');
        if (comma == std::string::npos) throw fail("missing m");
        int l = 0, m = 0;
        try {
            size_t p1 = 0, p2 = 0;
            l = std::stoi(rest.substr(0, comma), &p1);
            m = std::stoi(rest.substr(comma + 1), &p2);
            if (p1 != comma || p2 != rest.size() - comma - 1) throw std::invalid_argument("trailing");
        } catch (const std::logic_error&) {
            throw fail("l and m must be integers");
        }
        return harmonic_field(s, l, m);
    }
    if (spec.rfind("random:", 0) == 0) {
        const std::string rest = spec.substr(7);
        if (rest.rfind("seed=", 0) != 0) throw fail("missing seed=");
        try {
            size_t pos = 0;
            const unsigned long long seed = std::stoull(rest.substr(5), &pos);
            if (pos != rest.size() - 5) throw std::invalid_argument("trailing");
            return random_field(s, seed);
        } catch (const std::logic_error&) {
            throw fail("seed must be a nonnegative integer");
        }
    }
    std::ifstream in(spec);
    if (!in) throw fail("not a known field and no such file");
    return ScalarField::read_csv(s.domain(), in);
}

} // namespace curvevar
