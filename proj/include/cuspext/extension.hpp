#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cuspext/squeeze.hpp"

namespace cuspext {

enum class DomainKind { CuspFamily, Cardioid };
enum class ConstructionKind { Simple, Squeezed };

struct Scenario {
    DomainKind domain = DomainKind::CuspFamily;
    double s = 1.5;  // cusp degree (CuspFamily mode)
    int j0 = 6;
    ConstructionKind construction = ConstructionKind::Simple;
    SqueezeParams squeeze{};
    unsigned seed = 12345;
};

struct RegionInfo {
    enum class Tag { Conformal, Cells, Outer, Boundary };
    Tag tag = Tag::Outer;
    int cell_index = -1;
    std::string name() const;
};

// Matched sampling of the two inner boundaries: the glued boundary values of
// the plane map together with cumulative arclength on both sides.
struct BoundaryCorrespondence {
    std::vector<double> theta;
    std::vector<Vec2> source;      // points of the inner boundary of the outer region
    std::vector<Vec2> image;       // their prescribed images
    std::vector<double> s_source;  // cumulative arclength along source
    std::vector<double> s_image;   // cumulative arclength along image
};

// The full-plane homeomorphism: complex square on the model domain, dyadic
// cell maps in the punctured ball at the cusp, and a collar blend outside.
class PlaneExtension {
  public:
    explicit PlaneExtension(const Scenario& scenario);

    const Scenario& scenario() const { return scenario_; }
    const CuspProfile& profile() const { return profile_; }
    const DyadicExtension& cells() const { return cells_; }
    const BoundaryCurve* boundary() const { return boundary_ ? &*boundary_ : nullptr; }

    int first_cell_index() const { return cells_.first_index(); }
    double inner_radius() const { return inner_radius_; }   // outer radius of the cell band
    double fill_depth() const { return fill_depth_; }       // depth of the flat fill
    double collar_radius() const { return collar_radius_; } // far-field switch radius
    double far_coefficient() const { return kappa_; }
    double cardioid_c1() const { return c1_; }
    double cardioid_c2() const { return c2_; }

    RegionInfo classify(Vec2 z, double tol = 1e-10) const;
    bool in_conformal_region(Vec2 z) const;

    Vec2 eval(Vec2 z) const;
    Vec2 eval_conformal(Vec2 z) const;  // complex square
    Vec2 eval_cells(Vec2 z) const;
    Vec2 eval_outer(Vec2 z) const;
    Vec2 eval_inverse_cells(Vec2 w) const;

    // Analytic derivative where one exists (conformal region and cells).
    Mat2 jacobian(Vec2 z) const;
    bool has_analytic_jacobian(Vec2 z) const;

    // collar internals, exposed for verification
    double source_boundary_radius(double theta) const;
    double target_boundary_radius(double theta_hat) const;
    double boundary_angle_map(double theta) const;
    Vec2 collar_map(Vec2 z) const;  // the square-root-plane homeomorphism

    BoundaryCorrespondence boundary_correspondence(int n) const;

    std::string descriptor_json() const;

  private:
    double wall_corner_angle() const;  // angle of the corner point of the inner boundary
    double segment_arc_radius(double theta_hat, double depth, double vlo, double vhi) const;
    double boundary_speed_ratio(double theta) const;
    double graded_speed(double theta) const;  // smoothed table lookup
    void build_speed_table();

    Scenario scenario_;
    CuspProfile profile_;
    std::optional<BoundaryCurve> boundary_;  // CuspFamily only
    DyadicExtension cells_;
    double inner_radius_ = 0;
    double fill_depth_ = 0;
    double collar_radius_ = 0;
    double kappa_ = 1.0;
    double c1_ = 0, c2_ = 0;
    double source_vlo_ = 0, source_vhi_ = 0;  // cardioid edge-segment bump range
    double target_vhi_ = 0;                   // target edge-segment extent
    double corner_angle_ = 0;
    double gap_at_rim_ = 0;  // angular gap of the cell band at the rim radius
    std::vector<double> speed_table_;  // smoothed boundary speed ratio on [0, pi]
};

// Full-plane extension of z -> (z+1)^2 off the unit disk (cardioid scenario).
Vec2 cardioid_f0(const PlaneExtension& cardioid_extension, Vec2 z);

}  // namespace cuspext
