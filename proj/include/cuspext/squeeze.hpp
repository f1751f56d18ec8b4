#pragma once

#include "cuspext/cells.hpp"

namespace cuspext {

// Bookkeeping for the five-piece split of the strip square and of the flat
// rectangle: inner concentric square plus four isosceles trapezoid bands.
struct TrapezoidDecomposition {
    CellScale scale;
    double m1 = 0, m2 = 0, alpha = 0, beta = 0;
    long double delta = 0;
    bool delta_clamped = false;

    double gamma() const { return scale.sigma; }
    double xc() const { return 0.5 * (scale.L1 + scale.L2); }
    double Xc() const { return 0.5 * (m1 + m2); }

    long double inner_half() const { return 0.5L * (1.0L - 2.0L * delta) * scale.sigma; }
    long double rect_inner_half() const { return beta / 4.0L; }
    long double area_inner() const { long double s = 2.0L * inner_half(); return s * s; }
    long double area_band() const {
        long double g = scale.sigma;
        return delta * g * g * (1.0L - delta);
    }
};

// The squeezed rectangle stage: piecewise charts (top/right/bottom/left bands
// plus the core) gluing continuously, with the same outer-edge action as the
// plain diagonal map so dyadic neighbors still match.
class SqueezedRectMap final : public RectMap {
  public:
    // piece ids
    static constexpr int kCore = 0;
    static constexpr int kTop = 1;
    static constexpr int kRight = 2;
    static constexpr int kBottom = 3;
    static constexpr int kLeft = 4;

    SqueezedRectMap(const CuspProfile& profile, const CellScale& scale, DeltaValue delta);

    const TrapezoidDecomposition& decomposition() const { return dec_; }

    int classify_strip(double x, double y) const;
    int classify_rect(double X, double Y) const;

    // chart evaluation: (a, zeta) in [0,1]^2 with zeta the band coordinate
    Vec2 chart_value(int piece, double a, long double zeta) const;
    void chart_strip_point(int piece, double a, long double zeta, double& x, double& y) const;
    Mat2 chart_jacobian(int piece, double a, long double zeta) const;

    Vec2 to_rect(double x, double y) const override;
    Mat2 to_rect_jac(double x, double y) const override;
    Vec2 from_rect(double X, double Y) const override;
    Mat2 from_rect_jac(double X, double Y) const override;

    int strip_patch_count() const override { return 5; }
    void strip_sample(int patch, double a, double b, ChartSample& out) const override;
    int rect_patch_count() const override { return 5; }
    void rect_sample(int patch, double a, double b, ChartSample& out) const override;
    std::vector<double> strip_splits(int patch) const override;
    std::vector<double> rect_splits(int patch) const override;

  private:
    struct ChartCoords { int piece; double a; long double zeta; };
    ChartCoords strip_coords(double x, double y) const;
    ChartCoords rect_coords(double X, double Y) const;

    // core formulas in band coordinates (top and right bands; the other two
    // are reflections)
    long double band_len(long double zeta) const;        // slice length in the strip, top band
    long double rect_len(long double zeta) const;        // slice length in the rectangle
    long double rect_anchor(long double zeta) const;     // left end of the rectangle slice
    long double top_a2(long double zeta) const;
    void top_values(double a, long double zeta, double& A1, double& A2) const;
    void top_partials(double a, long double zeta, Mat2& jac) const;
    void right_values(double a, long double zeta, double& B1, double& B2) const;
    void right_partials(double a, long double zeta, Mat2& jac) const;
    void core_values(double a, double b, double& C1, double& C2) const;
    void core_partials(double a, Mat2& jac) const;

    CuspProfile profile_;
    CellScale scale_;
    TrapezoidDecomposition dec_;
    long double delta_, acoef_, bcoef_;
    double gamma_, xc_, Xc_, m1_, m2_, alpha_, beta_;
    long double stretch_;  // log(2 alpha / beta), band quadrature grading
};

}  // namespace cuspext
