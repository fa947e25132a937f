#include "curvevar/field.hpp"

#include "curvevar/error.hpp"
#include "curvevar/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <string>

namespace curvevar {

namespace {

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

// Index of the node nearest to x along one direction and the signed offset to it.
std::pair<int, double> nearest(double x, const Interval& r, int n, bool periodic)
{
    const double h = r.length() / n;
    if (periodic) {
        double s = (x - r.lo) / h;
        int i = static_cast<int>(std::lround(s));
        const double off = (s - i) * h;
        i = ((i % n) + n) % n;
        return {i, off};
    }
    int i = static_cast<int>(std::lround((x - r.lo) / h - 0.5));
    i = std::clamp(i, 0, n - 1);
    return {i, x - (r.lo + (i + 0.5) * h)};
}

} // namespace

struct ScalarField::GridJets {
    std::once_flag once;
    std::vector<Taylor> jets;
};

ScalarField ScalarField::from_values(const PatchDomain& d, Eigen::VectorXd values)
{
    d.validate();
    if (values.size() != d.size())
        throw ValidationError("field has " + std::to_string(values.size()) + " values, grid has " +
                              std::to_string(d.size()) + " nodes");
    ScalarField f;
    f.domain_ = d;
    f.values_ = std::move(values);
    f.grid_jets_ = std::make_shared<GridJets>();
    return f;
}

ScalarField ScalarField::from_map(const PatchDomain& d, FieldMap map)
{
    d.validate();
    if (!map) throw ValidationError("field map is empty");
    ScalarField f;
    f.domain_ = d;
    f.values_.resize(d.size());
    parallel_for(d.size(), [&](int n) {
        f.values_[n] = map(d.u_at(d.node_i(n)), d.v_at(d.node_j(n)), 0).value();
    });
    f.map_ = std::move(map);
    f.grid_jets_ = std::make_shared<GridJets>();
    return f;
}

ScalarField ScalarField::constant(const PatchDomain& d, double c)
{
    return from_map(d, [c](double, double, int order) { return Taylor::constant(c, order); });
}

Taylor ScalarField::node_jet(int node, int order) const
{
    if (map_ && order > kJetOrder)
        return map_(domain_.u_at(domain_.node_i(node)), domain_.v_at(domain_.node_j(node)), order);
    if (!grid_jets_) throw ValidationError("field is empty");
    if (order > kJetOrder) throw ValidationError("grid fields carry derivatives up to order 4 only");
    std::call_once(grid_jets_->once, [this] {
        auto& jets = grid_jets_->jets;
        jets.resize(values_.size());
        if (map_) {
            for (int n = 0; n < size(); ++n)
                jets[n] = map_(domain_.u_at(domain_.node_i(n)), domain_.v_at(domain_.node_j(n)), kJetOrder);
            return;
        }
        const auto parts = GridDifferentiator::cached(domain_)->partials(values_, kJetOrder);
        for (int n = 0; n < size(); ++n) {
            Taylor t = Taylor::constant(0.0, kJetOrder);
            for (int a = 0; a <= kJetOrder; ++a)
                for (int b = 0; a + b <= kJetOrder; ++b)
                    t.coeff(a, b) = parts[Taylor::index(a, b)][n] / (factorial(a) * factorial(b));
            jets[n] = t;
        }
    });
    return grid_jets_->jets[node].truncated(order);
}

std::vector<Taylor> ScalarField::node_jets(int order) const
{
    std::vector<Taylor> out(size());
    parallel_for(size(), [&](int n) { out[n] = node_jet(n, order); });
    return out;
}

Taylor ScalarField::jet_at(double u, double v, int order) const
{
    if (map_) return map_(u, v, order);
    const auto [i, du] = nearest(u, domain_.u_range, domain_.nu, domain_.periodic_u);
    const auto [j, dv] = nearest(v, domain_.v_range, domain_.nv, domain_.periodic_v);
    const Taylor base = node_jet(domain_.node(i, j), std::min(order, kJetOrder));
    if (du == 0.0 && dv == 0.0) return base;
    return substitute(base, Taylor::variable_u(du, base.order()), Taylor::variable_v(dv, base.order()));
}

ScalarField operator+(const ScalarField& a, const ScalarField& b)
{
    if (!(a.domain_ == b.domain_)) throw ValidationError("fields live on different grids");
    if (a.map_ && b.map_) {
        return ScalarField::from_map(a.domain_, [fa = a.map_, fb = b.map_](double u, double v, int order) {
            return fa(u, v, order) + fb(u, v, order);
        });
    }
    return ScalarField::from_values(a.domain_, a.values_ + b.values_);
}

ScalarField operator-(const ScalarField& a, const ScalarField& b) { return a + (-1.0) * b; }

ScalarField operator*(double c, const ScalarField& a)
{
    if (a.map_) {
        return ScalarField::from_map(a.domain_, [fa = a.map_, c](double u, double v, int order) {
            return c * fa(u, v, order);
        });
    }
    return ScalarField::from_values(a.domain_, c * a.values_);
}

void ScalarField::write_csv(std::ostream& os) const
{
    os << "u,v,value\n" << std::setprecision(17);
    for (int n = 0; n < size(); ++n)
        os << domain_.u_at(domain_.node_i(n)) << ',' << domain_.v_at(domain_.node_j(n)) << ',' << values_[n] << '\n';
}

ScalarField ScalarField::read_csv(const PatchDomain& d, std::istream& is)
{
    d.validate();
    Eigen::VectorXd values(d.size());
    std::string line;
    int n = 0, lineno = 0;
    const double tol = 1e-9 * (1.0 + std::abs(d.u_range.length()) + std::abs(d.v_range.length()));
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        double u, v, val;
        if (!(row >> u >> v >> val)) {
            if (n == 0 && lineno == 1) continue; // header
            throw ValidationError("field CSV line " + std::to_string(lineno) + ": expected u,v,value");
        }
        if (n >= d.size()) throw ValidationError("field CSV has more rows than grid nodes");
        if (std::abs(u - d.u_at(d.node_i(n))) > tol || std::abs(v - d.v_at(d.node_j(n))) > tol)
            throw ValidationError("field CSV line " + std::to_string(lineno) + ": (u, v) does not match grid node " +
                                  std::to_string(n));
        values[n++] = val;
    }
    if (n != d.size())
        throw ValidationError("field CSV has " + std::to_string(n) + " rows, grid has " + std::to_string(d.size()) +
                              " nodes");
    return from_values(d, std::move(values));
}

} // namespace curvevar
