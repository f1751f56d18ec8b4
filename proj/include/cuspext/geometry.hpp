#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "cuspext/types.hpp"

namespace cuspext {

// Power-type cusp half-width profile: the model boundary walls are
// (-x, +-P(x)) with P(x) = coeff * x^expo, expo > 1. The standard family
// uses coeff = 1, expo = s; the cardioid specialization uses coeff = sqrt(c1),
// expo = 3/2.
struct CuspProfile {
    double coeff = 1.0;
    double expo = 1.5;

    double half_width(double x) const;     // P(x), x >= 0
    double half_width_d(double x) const;   // P'(x), x > 0
    double wall_radius(double x) const;    // radius of sqrt of (-x, P(x)); 0 at 0
    double wall_radius_d(double x) const;  // derivative of wall_radius, x > 0
    double wall_depth(double r) const;     // inverse of wall_radius, r >= 0
    double wall_angle(double x) const;     // polar angle of the upper wall point at depth x
    double gap_angle_at_depth(double x) const;  // angular width of the complement wedge
};

struct CuspArcPoint {
    double u = 0;      // parameter in [-1, 0]
    double r = 0;      // radius
    double theta = 0;  // angle, radians
    double x = 0;
    double y = 0;
};

enum class Branch { Upper, Lower };

// Cusp curve in the image plane: (u, (-u)^s) or (u, -(-u)^s), u in [-1, 0].
Vec2 ell1_point(double s, double u, Branch branch);

// The same curve seen through the square root: r = sqrt(-u)(1+(-u)^{2(s-1)})^{1/4},
// theta = (pi - atan((-u)^{s-1})) / 2 on the upper branch (mirrored below).
CuspArcPoint ellm_point(double s, double u, Branch branch);

struct ClosingArc {
    double cx = 0;      // center on the real axis
    double radius = 0;
    double psi1 = 0;    // arc spans psi in [-psi1, psi1] about the center
    Vec2 point(double psi) const { return {cx + radius * std::cos(psi), radius * std::sin(psi)}; }
};

enum class Location { Inside, Outside, Boundary };

// Jordan boundary of the model domain: two cusp walls plus the unique circle
// arc tangent to both wall endpoints, closing on the right of the chord.
class BoundaryCurve {
  public:
    static BoundaryCurve build(double s, int min_vertices = 4096);

    double degree() const { return s_; }
    const CuspProfile& profile() const { return profile_; }
    const ClosingArc& closing_arc() const { return arc_; }
    Vec2 z1() const { return z1_; }

    // Radial extent of the closed domain in direction theta (0 outside
    // |theta| < pi/2 except where the closing arc reaches past).
    double radial_extent(double theta) const;
    double max_radial_extent() const { return max_radius_; }

    // Point membership against the sampled polygon (ray crossing), with the
    // 1e-10 boundary band. locate_squared tests the squared-image domain.
    Location locate(Vec2 z, double tol = 1e-10) const;
    Location locate_squared(Vec2 w, double tol = 1e-10) const;

    // Analytic membership for the interior machinery (exact near the cusp).
    bool contains_analytic(Vec2 z) const;

    const std::vector<Vec2>& polyline() const { return polyline_; }

  private:
    double s_ = 1.5;
    CuspProfile profile_;
    ClosingArc arc_;
    Vec2 z1_;
    double max_radius_ = 0;
    std::vector<Vec2> polyline_;  // counterclockwise, closed implicitly
};

// Tangent of the upper model wall at parameter u (derivative in u).
Vec2 wall_tangent(const CuspProfile& profile, double u);

// Defining polynomial of the standard cardioid: negative inside.
double cardioid_defining(Vec2 w);

// Vertical half-thickness squared of the standard cardioid boundary near the
// cusp: y^2 = cardioid_d(x) on the near branch, x in [-2^-j0, 0].
double cardioid_d(double x);

struct CardioidLocalData {
    int j0 = 6;
    double c1 = 0;  // inf of d(x)/|x|^3 over the window
    double c2 = 0;  // sup of d(x)/|x|^3 over the window
};

CardioidLocalData fit_cardioid_constants(int j0, int samples = 4096);

// Segment-sweep self-intersection test for a closed polyline (grid hashed).
bool polyline_self_intersects(const std::vector<Vec2>& pts);

// Strict interior crossing of two segments (touching endpoints do not count).
bool segments_cross(Vec2 a, Vec2 b, Vec2 c, Vec2 d);
bool any_segment_pair_crosses(const std::vector<std::array<Vec2, 2>>& segs);

}  // namespace cuspext
