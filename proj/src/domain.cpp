#include "curvevar/domain.hpp"

#include "curvevar/error.hpp"
#include "curvevar/taylor.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <mutex>
#include <numbers>
#include <string>

namespace curvevar {

namespace {

// Trigonometric-interpolation derivative of order k on n equispaced points of period L.
Eigen::MatrixXd spectral_matrix(int n, double L, int k)
{
    if (k == 0) return Eigen::MatrixXd::Identity(n, n);
    const double dx = L / n;
    const int M = (n % 2 == 0) ? n / 2 - 1 : (n - 1) / 2;
    Eigen::VectorXd kernel(n);
    for (int s = 0; s < n; ++s) {
        const double x = s * dx;
        double sum = 0.0;
        for (int m = 1; m <= M; ++m) {
            const double kappa = 2.0 * std::numbers::pi * m / L;
            const double kk = std::pow(kappa, k);
            if (k % 2 == 0)
                sum += 2.0 * ((k / 2) % 2 ? -1.0 : 1.0) * kk * std::cos(kappa * x);
            else
                sum += 2.0 * (((k - 1) / 2) % 2 ? 1.0 : -1.0) * kk * std::sin(kappa * x);
        }
        if (n % 2 == 0 && k % 2 == 0) {
            const double kappa = std::numbers::pi * n / L;
            sum += ((k / 2) % 2 ? -1.0 : 1.0) * std::pow(kappa, k) * std::cos(kappa * x);
        }
        kernel[s] = sum / n;
    }
    Eigen::MatrixXd D(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) D(i, j) = kernel[((i - j) % n + n) % n];
    return D;
}

Eigen::MatrixXd stencil_matrix(int n, double lo, double dx, int k)
{
    if (k == 0) return Eigen::MatrixXd::Identity(n, n);
    const int width = std::min(9, n);
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = lo + (i + 0.5) * dx;
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        const int start = std::clamp(i - width / 2, 0, n - width);
        const std::vector<double> nodes(x.begin() + start, x.begin() + start + width);
        const Eigen::VectorXd w = fornberg_weights(x[i], nodes, k);
        for (int j = 0; j < width; ++j) D(i, start + j) = w[j];
    }
    return D;
}

} // namespace

void PatchDomain::validate() const
{
    if (nu < 8 || nv < 8) throw ValidationError("grid counts nu, nv must be >= 8");
    if (!(u_range.length() > 0.0) || !std::isfinite(u_range.length()))
        throw ValidationError("u_range must be a finite interval with hi > lo");
    if (!(v_range.length() > 0.0) || !std::isfinite(v_range.length()))
        throw ValidationError("v_range must be a finite interval with hi > lo");
    if (pole_offset) {
        if (periodic_v) throw ValidationError("pole_offset applies to a non-periodic v direction");
        if (!periodic_u || nu % 2 != 0) throw ValidationError("pole_offset needs a periodic u direction with even nu");
        if (std::abs(v_range.length() - std::numbers::pi) > 1e-12)
            throw ValidationError("pole_offset needs a polar v_range of length pi");
    }
}

double PatchDomain::u_at(int i) const
{
    return periodic_u ? u_range.lo + i * u_step() : u_range.lo + (i + 0.5) * u_step();
}

double PatchDomain::v_at(int j) const
{
    return periodic_v ? v_range.lo + j * v_step() : v_range.lo + (j + 0.5) * v_step();
}

bool PatchDomain::closed() const { return periodic_u && (periodic_v || pole_offset); }

PatchDomain periodic_domain(int nu, int nv, double u_length, double v_length)
{
    PatchDomain d;
    d.u_range = {0.0, u_length};
    d.v_range = {0.0, v_length};
    d.nu = nu;
    d.nv = nv;
    d.periodic_u = d.periodic_v = true;
    return d;
}

PatchDomain spherical_domain(int nu, int nv)
{
    PatchDomain d;
    d.u_range = {0.0, 2.0 * std::numbers::pi};
    d.v_range = {0.0, std::numbers::pi};
    d.nu = nu;
    d.nv = nv;
    d.periodic_u = true;
    d.pole_offset = true;
    return d;
}

Eigen::VectorXd quadrature_weights_u(const PatchDomain& d) { return Eigen::VectorXd::Constant(d.nu, d.u_step()); }

Eigen::VectorXd quadrature_weights_v(const PatchDomain& d)
{
    if (!d.pole_offset) return Eigen::VectorXd::Constant(d.nv, d.v_step());
    const int n = d.nv;
    Eigen::VectorXd w(n);
    for (int j = 0; j < n; ++j) {
        const double psi = (j + 0.5) * std::numbers::pi / n;
        double s = 0.0;
        for (int k = 1; k <= n / 2; ++k) s += std::cos(2.0 * k * psi) / (4.0 * k * k - 1.0);
        w[j] = 2.0 / n * (1.0 - 2.0 * s) / std::sin(psi);
    }
    return w;
}

std::shared_ptr<const GridDifferentiator> GridDifferentiator::cached(const PatchDomain& d)
{
    static std::mutex mutex;
    static std::deque<std::pair<PatchDomain, std::shared_ptr<const GridDifferentiator>>> cache;
    constexpr std::size_t kCapacity = 6;
    {
        std::lock_guard<std::mutex> lock(mutex);
        for (const auto& [dom, diff] : cache)
            if (dom == d) return diff;
    }
    auto diff = std::make_shared<const GridDifferentiator>(d);
    std::lock_guard<std::mutex> lock(mutex);
    cache.emplace_back(d, diff);
    if (cache.size() > kCapacity) cache.pop_front();
    return diff;
}

Eigen::VectorXd fornberg_weights(double x0, const std::vector<double>& x, int k)
{
    const int n = static_cast<int>(x.size());
    if (k >= n) throw ValidationError("stencil too small for derivative order " + std::to_string(k));
    // c(j, m): weight of node j for derivative m.
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, k + 1);
    double c1 = 1.0, c4 = x[0] - x0;
    c(0, 0) = 1.0;
    for (int i = 1; i < n; ++i) {
        const int mn = std::min(i, k);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = x[i] - x0;
        for (int j = 0; j < i; ++j) {
            const double c3 = x[i] - x[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int m = mn; m >= 1; --m) c(i, m) = c1 * (m * c(i - 1, m - 1) - c5 * c(i - 1, m)) / c2;
                c(i, 0) = -c1 * c5 * c(i - 1, 0) / c2;
            }
            for (int m = mn; m >= 1; --m) c(j, m) = (c4 * c(j, m) - m * c(j, m - 1)) / c3;
            c(j, 0) = c4 * c(j, 0) / c3;
        }
        c1 = c2;
    }
    return c.col(k);
}

GridDifferentiator::GridDifferentiator(const PatchDomain& d) : d_(d)
{
    d.validate();
    for (int k = 0; k <= kMaxOrder; ++k) {
        du_[k] = d.periodic_u ? spectral_matrix(d.nu, d.u_range.length(), k)
                              : stencil_matrix(d.nu, d.u_range.lo, d.u_step(), k);
        if (d.pole_offset) {
            const int n = d.nv;
            const Eigen::MatrixXd D2 = spectral_matrix(2 * n, 2.0 * d.v_range.length(), k);
            dv_[k] = D2.topLeftCorner(n, n);
            dv_pole_[k].resize(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) dv_pole_[k](i, j) = D2(i, 2 * n - 1 - j);
        } else {
            dv_[k] = d.periodic_v ? spectral_matrix(d.nv, d.v_range.length(), k)
                                  : stencil_matrix(d.nv, d.v_range.lo, d.v_step(), k);
        }
    }
}

Eigen::MatrixXd GridDifferentiator::apply_u(const Eigen::MatrixXd& F, int a) const
{
    if (a == 0) return F;
    return du_[a] * F;
}

Eigen::MatrixXd GridDifferentiator::apply_v(const Eigen::MatrixXd& F, int b) const
{
    if (b == 0) return F;
    Eigen::MatrixXd out = F * dv_[b].transpose();
    if (d_.pole_offset) {
        // Across the pole, (θ, φ) continues as (-θ, φ + π).
        const int half = d_.nu / 2;
        Eigen::MatrixXd shifted(F.rows(), F.cols());
        for (int i = 0; i < d_.nu; ++i) shifted.row(i) = F.row((i + half) % d_.nu);
        out += shifted * dv_pole_[b].transpose();
    }
    return out;
}

Eigen::VectorXd GridDifferentiator::partial(const Eigen::VectorXd& F, int a, int b) const
{
    if (a < 0 || b < 0 || a + b > kMaxOrder) throw ValidationError("grid derivative order out of range");
    if (F.size() != d_.size()) throw ValidationError("field size does not match the grid");
    const Eigen::Map<const Eigen::MatrixXd> M(F.data(), d_.nu, d_.nv);
    const Eigen::MatrixXd R = apply_v(apply_u(M, a), b);
    return Eigen::Map<const Eigen::VectorXd>(R.data(), R.size());
}

std::vector<Eigen::VectorXd> GridDifferentiator::partials(const Eigen::VectorXd& F, int order) const
{
    if (order > kMaxOrder) throw ValidationError("grid derivative order out of range");
    std::vector<Eigen::VectorXd> out(Taylor::terms(order));
    if (F.size() != d_.size()) throw ValidationError("field size does not match the grid");
    const Eigen::Map<const Eigen::MatrixXd> M(F.data(), d_.nu, d_.nv);
    for (int a = 0; a <= order; ++a) {
        const Eigen::MatrixXd Ua = apply_u(M, a);
        for (int b = 0; a + b <= order; ++b) {
            const Eigen::MatrixXd R = apply_v(Ua, b);
            out[Taylor::index(a, b)] = Eigen::Map<const Eigen::VectorXd>(R.data(), R.size());
        }
    }
    return out;
}

} // namespace curvevar
