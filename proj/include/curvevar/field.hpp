#pragma once

#include "curvevar/domain.hpp"
#include "curvevar/taylor.hpp"

#include <Eigen/Core>

#include <functional>
#include <iosfwd>
#include <memory>
#include <vector>

namespace curvevar {

/// Local expansion of a scalar function about the chart point (u, v).
using FieldMap = std::function<Taylor(double u, double v, int order)>;

/// Grid-sampled scalar function, optionally backed by an analytic map that
/// supplies exact local expansions. Fields without a map are differentiated
/// on the grid (see GridDifferentiator).
class ScalarField {
public:
    static constexpr int kJetOrder = 4;

    ScalarField() = default;
    static ScalarField from_values(const PatchDomain& d, Eigen::VectorXd values);
    static ScalarField from_map(const PatchDomain& d, FieldMap map);
    static ScalarField constant(const PatchDomain& d, double c);

    const PatchDomain& domain() const { return domain_; }
    const Eigen::VectorXd& values() const { return values_; }
    double operator[](int node) const { return values_[node]; }
    int size() const { return static_cast<int>(values_.size()); }
    bool has_map() const { return static_cast<bool>(map_); }
    const FieldMap& map() const { return map_; }
    double max_abs() const { return values_.size() ? values_.cwiseAbs().maxCoeff() : 0.0; }

    /// Expansion at a node, exact when a map exists.
    Taylor node_jet(int node, int order) const;
    std::vector<Taylor> node_jets(int order) const;
    /// Expansion at an arbitrary chart point; map-less fields re-expand the
    /// jet of the nearest node.
    Taylor jet_at(double u, double v, int order) const;

    friend ScalarField operator+(const ScalarField& a, const ScalarField& b);
    friend ScalarField operator-(const ScalarField& a, const ScalarField& b);
    friend ScalarField operator*(double c, const ScalarField& a);
    friend ScalarField operator*(const ScalarField& a, double c) { return c * a; }

    /// CSV rows "u,v,value".
    void write_csv(std::ostream& os) const;
    /// Reads "u,v,value" rows (an optional header line is skipped) in node order.
    static ScalarField read_csv(const PatchDomain& d, std::istream& is);

private:
    PatchDomain domain_;
    Eigen::VectorXd values_;
    FieldMap map_;
    struct GridJets;
    std::shared_ptr<GridJets> grid_jets_; // node jets up to kJetOrder, built on first use
};

} // namespace curvevar
