#pragma once

#include "curvevar/curvature.hpp"
#include "curvevar/domain.hpp"
#include "curvevar/field.hpp"
#include "curvevar/space_form.hpp"

#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace curvevar {

enum class Orientation { AsComputed, Flip };
enum class Provenance { Analytic, NumericJets };

/// Local expansion of the immersion about (u, v), accurate to total degree `order`.
using JetMap = std::function<PointJet(double u, double v, int order)>;
using PointMap = std::function<AmbientVector(double u, double v)>;
using ParamMap = std::map<std::string, double>;

/// Finite-difference settings for numeric jets. The base step in each
/// direction is relative_step × the extent of that direction unless an
/// absolute step is given; third and fourth derivatives use 4× and 8× that.
struct FdConfig {
    double relative_step = 1e-3;
    double step = 0.0;
    bool richardson = true;
};

/// Jets of a plain point map by centered finite differences (accuracy 4,
/// one Richardson level), order <= 4.
PointJet fd_jet(const PointMap& f, double u, double v, int order, double hu, double hv, bool richardson = true);

class SurfaceSample {
public:
    static constexpr int kJetOrder = 4;

    /// Evaluates `map` at every node (order kJetOrder) and builds the geometry.
    /// `normal_sign` is the orientation before the flag is applied.
    SurfaceSample(std::string name, ParamMap params, const PatchDomain& domain, const SpaceForm& sf, JetMap map,
                  Provenance provenance, int normal_sign, Orientation orientation = Orientation::AsComputed,
                  bool spherical_chart = false);
    /// Builds from precomputed node jets; `map` may be empty.
    SurfaceSample(std::string name, ParamMap params, const PatchDomain& domain, const SpaceForm& sf,
                  std::vector<ImmersionJet> jets, JetMap map, Provenance provenance, int normal_sign,
                  Orientation orientation, bool spherical_chart);

    const std::string& name() const { return name_; }
    const ParamMap& params() const { return params_; }
    double param(const std::string& key) const;
    const PatchDomain& domain() const { return domain_; }
    const SpaceForm& space_form() const { return sf_; }
    Orientation orientation() const { return orientation_; }
    Provenance provenance() const { return provenance_; }
    /// Sign applied to the raw normal, orientation flag included.
    int normal_sign() const { return orientation_ == Orientation::Flip ? -base_sign_ : base_sign_; }
    int base_normal_sign() const { return base_sign_; }
    /// Chart is (longitude φ, polar angle θ) of a round sphere-like surface.
    bool spherical_chart() const { return spherical_chart_; }

    int size() const { return domain_.size(); }
    double u_at_node(int n) const { return domain_.u_at(domain_.node_i(n)); }
    double v_at_node(int n) const { return domain_.v_at(domain_.node_j(n)); }
    const ImmersionJet& jet(int node) const { return (*jets_)[node]; }
    const NodeGeometry& geometry(int node) const { return (*geometry_)[node]; }

    bool has_jet_map() const { return static_cast<bool>(map_); }
    const JetMap& jet_map() const { return map_; }
    /// Highest order the jet map can deliver.
    int jet_map_capacity() const { return map_capacity_; }
    void set_jet_map_capacity(int c) { map_capacity_ = c; }

    SurfaceSample flipped() const;
    /// 1 / max |κ| over the grid (infinite for flat samples).
    double min_curvature_radius() const;
    /// CSV rows "u,v,x,y,z[,w]".
    void write_csv(std::ostream& os) const;

private:
    void build_geometry();

    std::string name_;
    ParamMap params_;
    PatchDomain domain_;
    SpaceForm sf_;
    JetMap map_;
    int map_capacity_ = Taylor::kMaxOrder;
    Provenance provenance_ = Provenance::Analytic;
    int base_sign_ = 1;
    Orientation orientation_ = Orientation::AsComputed;
    bool spherical_chart_ = false;
    std::shared_ptr<const std::vector<ImmersionJet>> jets_;
    std::shared_ptr<const std::vector<NodeGeometry>> geometry_;
};

/// Catalog names: sphere, torus, catenoid, graph, geodesic_sphere_S3,
/// clifford_torus_S3, geodesic_sphere_H3.
std::vector<std::string> catalog_names();
/// Default chart domain for a catalog entry.
PatchDomain default_domain(const std::string& name, int nu = 0, int nv = 0, const ParamMap& params = {});
/// Space form a catalog entry lives in when none is given (k0 = 1 for S3 entries).
SpaceForm default_space_form(const std::string& name);

SurfaceSample sample_builtin(const std::string& name, const ParamMap& params, const PatchDomain& domain,
                             const SpaceForm& sf, Orientation orientation = Orientation::AsComputed);
SurfaceSample sample_builtin(const std::string& name, const ParamMap& params = {});

SurfaceSample sample_callable(const PointMap& f, const PatchDomain& domain, const SpaceForm& sf,
                              const FdConfig& fd = {}, const std::string& name = "callable");

/// Node values of a deformed surface: enough to integrate curvature densities.
struct DeformedScalars {
    std::vector<double> H, K, dS_weight;
    std::vector<AmbientVector> position, N;
};

/// Normal geodesic deformation r_t = exp_{r}(t u N), precomputed for repeated t.
class DeformationFamily {
public:
    DeformationFamily(const SurfaceSample& base, const ScalarField& u, const FdConfig& fd = {});
    SurfaceSample at(double t) const;
    /// Same surface as at(t), reduced to node scalars (cheaper).
    DeformedScalars scalars_at(double t) const;

private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
};

SurfaceSample deform_normal(const SurfaceSample& s, const ScalarField& u, double t);

} // namespace curvevar

namespace curvevar {

/// Per-node Gauss–Codazzi consistency: the larger of the Codazzi defect
/// max|∇_k h_ij − ∇_j h_ik| and the Gauss-equation defect
/// |K_metric − (K_E + k0)|. With include_ambient = false the k0 term of the
/// Gauss equation is dropped (a deliberately wrong structure equation).
ScalarField codazzi_residual(const SurfaceSample& s, bool include_ambient = true);

/// Per-node |K_metric − K| / max(|K|, 1/L²) with L the chart's typical length.
ScalarField intrinsic_curvature_defect(const SurfaceSample& s);

} // namespace curvevar
