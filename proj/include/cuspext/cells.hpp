#pragma once

#include <memory>
#include <vector>

#include "cuspext/geometry.hpp"
#include "cuspext/types.hpp"

namespace cuspext {

// One dyadic scale: annular band radii and strip square side.
struct CellScale {
    double t = 0;
    double L1 = 0;     // wall_radius((t/2)^2)
    double L2 = 0;     // wall_radius(t^2)
    double sigma = 0;  // L2 - L1, the strip square side
};

CellScale make_cell_scale(const CuspProfile& profile, double t);

struct SqueezeParams {
    enum class Mode { Exp, PowerLog };
    Mode mode = Mode::Exp;
    double p = 2.0;  // PowerLog exponent, > 1
};

struct DeltaValue {
    long double value = 0;
    bool clamped = false;  // true when the exact value underflows long double
};

DeltaValue delta_value(double t, const SqueezeParams& params);

// Sample of a chart over the unit square. For strip charts (x, y) is the
// strip point, image/jac describe the map into the flat rectangle. For rect
// charts (x, y) is the rectangle point and image/jac describe the way back.
struct ChartSample {
    double x = 0, y = 0;
    Vec2 image;
    Mat2 jac;
    long double area = 0;  // |d(x,y)/d(a,b)|
};

// Homeomorphism between the strip square R = [L1,L2] x [-sigma/2, sigma/2]
// and the flat rectangle [m1,m2] x [-beta/2, beta/2].
class RectMap {
  public:
    virtual ~RectMap() = default;
    virtual Vec2 to_rect(double x, double y) const = 0;
    virtual Mat2 to_rect_jac(double x, double y) const = 0;
    virtual Vec2 from_rect(double X, double Y) const = 0;
    virtual Mat2 from_rect_jac(double X, double Y) const = 0;
    virtual int strip_patch_count() const = 0;
    virtual void strip_sample(int patch, double a, double b, ChartSample& out) const = 0;
    virtual int rect_patch_count() const = 0;
    virtual void rect_sample(int patch, double a, double b, ChartSample& out) const = 0;
    // interior a-coordinates where the derivative field has a narrow feature
    // (quadrature panels must not straddle them)
    virtual std::vector<double> strip_splits(int patch) const { (void)patch; return {}; }
    virtual std::vector<double> rect_splits(int patch) const { (void)patch; return {}; }
};

class SimpleRectMap final : public RectMap {
  public:
    SimpleRectMap(const CuspProfile& profile, const CellScale& scale);
    Vec2 to_rect(double x, double y) const override;
    Mat2 to_rect_jac(double x, double y) const override;
    Vec2 from_rect(double X, double Y) const override;
    Mat2 from_rect_jac(double X, double Y) const override;
    int strip_patch_count() const override { return 1; }
    void strip_sample(int patch, double a, double b, ChartSample& out) const override;
    int rect_patch_count() const override { return 1; }
    void rect_sample(int patch, double a, double b, ChartSample& out) const override;

  private:
    CuspProfile profile_;
    CellScale scale_;
    double m1_, m2_, alpha_, B_;
};

struct PatchSample {
    Vec2 target;            // point in the flat cusp cell
    Mat2 deriv;             // forward: DF; inverse: D(F^{-1})
    long double det = 0;    // determinant accumulated factor by factor; the
                            // dense product cancels catastrophically when the
                            // squeeze width is exponentially small
    long double weight = 0; // measure element per unit chart area
};

// The full cell map F_t: annular cusp cell -> flat cusp cell, composed from
// the polar chart, the angular-gap strip chart, the rectangle stage, and the
// spike flattening.
class CellMap {
  public:
    CellMap(const CuspProfile& profile, double t, std::shared_ptr<const RectMap> rect);

    const CellScale& scale() const { return scale_; }
    const CuspProfile& profile() const { return profile_; }
    const RectMap& rect_map() const { return *rect_; }

    double gap_angle(double r) const;    // angular width of the cell at radius r
    double gap_angle_d(double r) const;

    Vec2 strip_from_source(Vec2 z) const;                  // polar + gap normalization
    Vec2 source_from_strip(double x, double y) const;
    Mat2 source_from_strip_jac(double x, double y) const;

    Vec2 spike_map(Vec2 w) const;        // flat cusp cell -> rectangle
    Mat2 spike_jac(Vec2 w) const;
    Vec2 spike_inv(Vec2 W) const;
    Mat2 spike_inv_jac(Vec2 W) const;

    // Image of an exact strip point. Edge rows (y = +-sigma/2, x = L1 or L2)
    // dispatch exactly, which matters when the squeeze band is thinner than
    // one ulp of the source coordinates.
    Vec2 map_from_strip(double x, double y) const;

    bool contains(Vec2 z, double tol = 1e-12) const;
    bool target_contains(Vec2 w, double tol = 1e-12) const;

    Vec2 map(Vec2 z) const;
    Mat2 jacobian(Vec2 z) const;
    Vec2 inverse(Vec2 w) const;
    Mat2 inverse_jacobian(Vec2 w) const;

    // Quadrature charts. Forward samples carry DF and the source measure,
    // inverse samples carry D(F^{-1}) and the target measure.
    int forward_patch_count() const;
    void forward_sample(int patch, double a, double b, PatchSample& out) const;
    std::vector<double> forward_splits(int patch) const { return rect_->strip_splits(patch); }
    int inverse_patch_count() const;
    void inverse_sample(int patch, double a, double b, PatchSample& out) const;
    std::vector<double> inverse_splits(int patch) const { return rect_->rect_splits(patch); }

    double target_area() const;  // Lebesgue area of the flat cusp cell

  private:
    CuspProfile profile_;
    CellScale scale_;
    double m1_, m2_, B_;
    std::shared_ptr<const RectMap> rect_;
};

CellMap make_cell_map(const CuspProfile& profile, double t, bool squeezed,
                      const SqueezeParams& params = {});

// Dyadic union of cells: dispatch + evaluation of the glued map.
class DyadicExtension {
  public:
    static constexpr int kMaxCellIndex = 240;

    DyadicExtension(const CuspProfile& profile, int first_index, bool squeezed,
                    const SqueezeParams& params = {});

    int first_index() const { return j_start_; }
    int max_index() const { return j_cap_; }
    double outer_radius() const { return outer_radius_; }
    double min_radius() const { return min_radius_; }
    CellMap cell(int j) const;

    // j with L1_j <= rho <= L2_j; interface points resolve to the lower j.
    int dispatch_radius(double rho) const;
    int dispatch_depth(double depth) const;

    bool contains(Vec2 z) const;
    Vec2 eval(Vec2 z) const;
    Mat2 jacobian(Vec2 z) const;
    Vec2 eval_inverse(Vec2 w) const;
    Mat2 inverse_jacobian(Vec2 w) const;

  private:
    CuspProfile profile_;
    int j_start_;
    bool squeezed_;
    SqueezeParams params_;
    double outer_radius_;
    int j_cap_ = kMaxCellIndex;
    double min_radius_ = 0;
};

}  // namespace cuspext
