#include "cuspext/squeeze.hpp"

#include <cfloat>
#include <cmath>
#include <stdexcept>

namespace cuspext {

DeltaValue delta_value(double t, const SqueezeParams& params) {
    if (!(t > 0.0) || t > 0.125 + 1e-15)
        throw std::domain_error("squeeze parameter t must lie in (0, 1/8]");
    DeltaValue out;
    if (params.mode == SqueezeParams::Mode::Exp) {
        long double e = -1.0L / (long double)t;
        if (e < std::log((long double)LDBL_MIN) + 1.0L) {
            out.value = LDBL_MIN;
            out.clamped = true;
        } else {
            out.value = expl(e);
        }
    } else {
        if (!(params.p > 1.0)) throw std::domain_error("power-log squeeze needs p > 1");
        long double lt = (long double)t;
        long double lg = logl(1.0L / lt);
        out.value = powl(lt, (params.p + 2.0L) / (params.p - 1.0L)) *
                    powl(lg, params.p / (params.p - 1.0L));
    }
    if (!(out.value > 0.0L) || out.value >= 0.5L)
        throw std::domain_error("squeeze width must lie in (0, 1/2)");
    return out;
}

CellMap make_cell_map(const CuspProfile& profile, double t, bool squeezed,
                      const SqueezeParams& params) {
    CellScale scale = make_cell_scale(profile, t);
    std::shared_ptr<const RectMap> rect;
    if (squeezed)
        rect = std::make_shared<SqueezedRectMap>(profile, scale, delta_value(t, params));
    else
        rect = std::make_shared<SimpleRectMap>(profile, scale);
    return CellMap(profile, t, std::move(rect));
}

SqueezedRectMap::SqueezedRectMap(const CuspProfile& profile, const CellScale& scale,
                                 DeltaValue delta)
    : profile_(profile), scale_(scale) {
    m1_ = 0.25 * scale.t * scale.t;
    m2_ = scale.t * scale.t;
    alpha_ = m2_ - m1_;
    beta_ = 2.0 * profile.half_width(m2_);
    gamma_ = scale.sigma;
    xc_ = 0.5 * (scale.L1 + scale.L2);
    Xc_ = 0.5 * (m1_ + m2_);
    delta_ = delta.value;
    acoef_ = (long double)beta_ / (4.0L * delta_ * gamma_);
    bcoef_ = (long double)beta_ / 2.0L - acoef_ * gamma_ / 2.0L;
    stretch_ = logl(2.0L * (long double)alpha_ / (long double)beta_);
    dec_.scale = scale;
    dec_.m1 = m1_;
    dec_.m2 = m2_;
    dec_.alpha = alpha_;
    dec_.beta = beta_;
    dec_.delta = delta_;
    dec_.delta_clamped = delta.clamped;
}

long double SqueezedRectMap::band_len(long double zeta) const {
    return (long double)gamma_ * (1.0L - 2.0L * delta_ * (1.0L - zeta));
}

long double SqueezedRectMap::rect_len(long double zeta) const {
    return (long double)beta_ / 2.0L + zeta * (2.0L * (long double)alpha_ - beta_) / 2.0L;
}

long double SqueezedRectMap::rect_anchor(long double zeta) const {
    return (2.0L * (long double)alpha_ - beta_) * (1.0L - zeta) / 4.0L + m1_;
}

long double SqueezedRectMap::top_a2(long double zeta) const {
    return (long double)beta_ * (1.0L + zeta) / 4.0L;
}

void SqueezedRectMap::top_values(double a, long double zeta, double& A1, double& A2) const {
    double u = scale_.L1 + gamma_ * a;
    double d = profile_.wall_depth(u);
    long double lt = rect_len(zeta);
    A1 = (double)(lt / alpha_ * (d - m1_) + rect_anchor(zeta));
    A2 = (double)top_a2(zeta);
}

void SqueezedRectMap::top_partials(double a, long double zeta, Mat2& jac) const {
    double u = scale_.L1 + gamma_ * a;
    double d = profile_.wall_depth(u);
    double etad = profile_.wall_radius_d(d);
    long double lt = rect_len(zeta);
    long double ell = band_len(zeta);
    long double dA1dx = lt * gamma_ / ((long double)alpha_ * ell * etad);
    long double dA1dy = (2.0L * alpha_ - beta_) * acoef_ / beta_ *
                            (2.0L * ((long double)d - m1_) / alpha_ - 1.0L) +
                        lt * gamma_ * (1.0L - 2.0L * a) / ((long double)alpha_ * ell * etad);
    jac = {dA1dx, dA1dy, 0.0L, acoef_};
}

void SqueezedRectMap::right_values(double a, long double zeta, double& B1, double& B2) const {
    // a is the vertical chart coordinate (y = (2a-1) * slice half-height)
    long double n = (long double)beta_ * (1.0L + zeta) / 4.0L;
    B1 = (double)((long double)m2_ -
                  (2.0L * (long double)alpha_ - beta_) * (1.0L - zeta) / 4.0L);
    B2 = (double)((2.0 * a - 1.0) * n);
}

void SqueezedRectMap::right_partials(double a, long double zeta, Mat2& jac) const {
    long double xoff = (long double)gamma_ * (0.5L - delta_ * (1.0L - zeta));
    long double n = (long double)beta_ * (1.0L + zeta) / 4.0L;
    long double y = (2.0L * a - 1.0L) * xoff;
    long double dB1dx = (2.0L * (long double)alpha_ - beta_) / (4.0L * delta_ * gamma_);
    long double dB2dy = n / xoff;
    long double dB2dx = -y * bcoef_ / (xoff * xoff);
    jac = {dB1dx, 0.0L, dB2dx, dB2dy};
}

void SqueezedRectMap::core_values(double a, double b, double& C1, double& C2) const {
    double u = scale_.L1 + gamma_ * a;
    double d = profile_.wall_depth(u);
    C1 = (double)((long double)beta_ / 2.0L / alpha_ * (d - m1_) + (long double)Xc_ - beta_ / 4.0L);
    C2 = (double)((2.0 * b - 1.0) * (long double)beta_ / 4.0L);
}

void SqueezedRectMap::core_partials(double a, Mat2& jac) const {
    double u = scale_.L1 + gamma_ * a;
    double d = profile_.wall_depth(u);
    double etad = profile_.wall_radius_d(d);
    long double ell0 = band_len(0.0L);
    long double dC1dx = (long double)beta_ / 2.0L * gamma_ / ((long double)alpha_ * ell0 * etad);
    long double dC2dy = (long double)beta_ / (4.0L * (long double)gamma_ * (0.5L - delta_));
    jac = {dC1dx, 0.0L, 0.0L, dC2dy};
}

int SqueezedRectMap::classify_strip(double x, double y) const {
    // edge-anchored distances stay exact on the square's boundary
    long double ex = std::min((long double)x - scale_.L1, (long double)scale_.L2 - x) / gamma_;
    long double ey = ((long double)gamma_ / 2.0L - fabsl((long double)y)) / gamma_;
    if (ex >= delta_ && ey >= delta_) return kCore;
    if (ey <= ex) return y >= 0 ? kTop : kBottom;
    return x - scale_.L1 >= scale_.L2 - x ? kRight : kLeft;
}

int SqueezedRectMap::classify_rect(double X, double Y) const {
    long double dX = (long double)X - Xc_;
    long double q = (long double)beta_ / 4.0L;
    if (fabsl(dX) <= q) {
        if (fabsl((long double)Y) <= q) return kCore;
        return Y >= 0 ? kTop : kBottom;
    }
    bool right = dX > 0;
    long double edge = right ? (long double)m2_ - X : (long double)X - m1_;
    long double zeta = 1.0L - edge * 4.0L / (2.0L * (long double)alpha_ - beta_);
    long double n = (long double)beta_ * (1.0L + zeta) / 4.0L;
    if (fabsl((long double)Y) <= n) return right ? kRight : kLeft;
    return Y >= 0 ? kTop : kBottom;
}

SqueezedRectMap::ChartCoords SqueezedRectMap::strip_coords(double x, double y) const {
    int piece = classify_strip(x, y);
    ChartCoords c{piece, 0.0, 0.0L};
    long double dx = (long double)x - xc_;
    switch (piece) {
        case kCore: {
            long double half = (long double)gamma_ * (0.5L - delta_);
            c.a = (double)((dx + half) / (2.0L * half));
            c.zeta = (((long double)y + half) / (2.0L * half));
            break;
        }
        case kTop:
        case kBottom: {
            long double ay = fabsl((long double)y);
            c.zeta = 1.0L - ((long double)gamma_ / 2.0L - ay) / (delta_ * gamma_);
            c.zeta = std::min(1.0L, std::max(0.0L, c.zeta));
            long double ell = 2.0L * ay;
            c.a = (double)((dx + ay) / ell);
            break;
        }
        case kRight: {
            c.zeta = 1.0L - ((long double)scale_.L2 - x) / (delta_ * gamma_);
            c.zeta = std::min(1.0L, std::max(0.0L, c.zeta));
            long double axo = (long double)gamma_ / 2.0L - delta_ * gamma_ * (1.0L - c.zeta);
            c.a = (double)(((long double)y + axo) / (2.0L * axo));
            break;
        }
        case kLeft: {
            c.zeta = 1.0L - ((long double)x - scale_.L1) / (delta_ * gamma_);
            c.zeta = std::min(1.0L, std::max(0.0L, c.zeta));
            long double axo = (long double)gamma_ / 2.0L - delta_ * gamma_ * (1.0L - c.zeta);
            c.a = (double)(((long double)y + axo) / (2.0L * axo));
            break;
        }
    }
    return c;
}

SqueezedRectMap::ChartCoords SqueezedRectMap::rect_coords(double X, double Y) const {
    int piece = classify_rect(X, Y);
    ChartCoords c{piece, 0.0, 0.0L};
    long double dX = (long double)X - Xc_;
    long double q = (long double)beta_ / 4.0L;
    switch (piece) {
        case kCore: {
            c.a = (double)((dX + q) / (2.0L * q));
            c.zeta = ((long double)Y + q) / (2.0L * q);
            break;
        }
        case kTop:
        case kBottom: {
            c.zeta = std::min(1.0L, std::max(0.0L, fabsl((long double)Y) * 4.0L / beta_ - 1.0L));
            long double lt = rect_len(c.zeta);
            long double anchor = rect_anchor(c.zeta);
            c.a = (double)(((long double)X - anchor) / lt);
            break;
        }
        case kRight:
        case kLeft: {
            long double edge =
                piece == kRight ? (long double)m2_ - X : (long double)X - m1_;
            c.zeta = std::min(
                1.0L, std::max(0.0L, 1.0L - edge * 4.0L / (2.0L * (long double)alpha_ - beta_)));
            long double n = (long double)beta_ * (1.0L + c.zeta) / 4.0L;
            c.a = (double)(((long double)Y + n) / (2.0L * n));
            break;
        }
    }
    return c;
}

void SqueezedRectMap::chart_strip_point(int piece, double a, long double zeta, double& x,
                                        double& y) const {
    switch (piece) {
        case kCore: {
            long double half = (long double)gamma_ * (0.5L - delta_);
            x = (double)((long double)xc_ + (2.0L * a - 1.0L) * half);
            y = (double)((2.0L * zeta - 1.0L) * half);
            break;
        }
        case kTop:
        case kBottom: {
            long double ay = (long double)gamma_ / 2.0L - delta_ * gamma_ * (1.0L - zeta);
            long double ell = 2.0L * ay;
            x = (double)((long double)xc_ - ay + a * ell);
            y = (double)(piece == kTop ? ay : -ay);
            break;
        }
        case kRight:
        case kLeft: {
            long double off = delta_ * gamma_ * (1.0L - zeta);
            x = (double)(piece == kRight ? (long double)scale_.L2 - off
                                         : (long double)scale_.L1 + off);
            long double xoff = (long double)gamma_ / 2.0L - off;
            y = (double)((2.0L * a - 1.0L) * xoff);
            break;
        }
        default:
            throw std::domain_error("bad piece id");
    }
}

Vec2 SqueezedRectMap::chart_value(int piece, double a, long double zeta) const {
    double v1, v2;
    switch (piece) {
        case kCore:
            core_values(a, (double)zeta, v1, v2);
            return {v1, v2};
        case kTop:
            top_values(a, zeta, v1, v2);
            return {v1, v2};
        case kBottom:
            top_values(a, zeta, v1, v2);
            return {v1, -v2};
        case kRight:
            right_values(a, zeta, v1, v2);
            return {v1, v2};
        case kLeft:
            right_values(a, zeta, v1, v2);
            return {(double)((long double)m1_ +
                             (2.0L * (long double)alpha_ - beta_) * (1.0L - zeta) / 4.0L),
                    v2};
        default:
            throw std::domain_error("bad piece id");
    }
}

Mat2 SqueezedRectMap::chart_jacobian(int piece, double a, long double zeta) const {
    Mat2 j;
    switch (piece) {
        case kCore:
            core_partials(a, j);
            return j;
        case kTop:
            top_partials(a, zeta, j);
            return j;
        case kBottom:
            top_partials(a, zeta, j);
            return {j.a11, -j.a12, 0.0L, j.a22};
        case kRight:
            right_partials(a, zeta, j);
            return j;
        case kLeft:
            right_partials(a, zeta, j);
            return {j.a11, 0.0L, -j.a21, j.a22};
        default:
            throw std::domain_error("bad piece id");
    }
}

Vec2 SqueezedRectMap::to_rect(double x, double y) const {
    ChartCoords c = strip_coords(x, y);
    return chart_value(c.piece, c.a, c.zeta);
}

Mat2 SqueezedRectMap::to_rect_jac(double x, double y) const {
    ChartCoords c = strip_coords(x, y);
    return chart_jacobian(c.piece, c.a, c.zeta);
}

Vec2 SqueezedRectMap::from_rect(double X, double Y) const {
    ChartCoords c = rect_coords(X, Y);
    switch (c.piece) {
        case kCore: {
            double d = m1_ + alpha_ * c.a;
            // invert the core horizontal chart: X-chart coordinate is the
            // depth fraction, map back through the wall radius
            double u = profile_.wall_radius(d);
            double a = (u - scale_.L1) / gamma_;
            double x, y;
            chart_strip_point(kCore, a, c.zeta, x, y);
            return {x, y};
        }
        case kTop:
        case kBottom: {
            long double lt = rect_len(c.zeta);
            double d = (double)((long double)m1_ +
                                (long double)alpha_ * ((long double)X - rect_anchor(c.zeta)) / lt);
            double u = profile_.wall_radius(d);
            double a = (u - scale_.L1) / gamma_;
            double x, y;
            chart_strip_point(c.piece, a, c.zeta, x, y);
            return {x, y};
        }
        case kRight:
        case kLeft: {
            double x, y;
            chart_strip_point(c.piece, c.a, c.zeta, x, y);
            return {x, y};
        }
        default:
            throw std::domain_error("bad piece id");
    }
}

Mat2 SqueezedRectMap::from_rect_jac(double X, double Y) const {
    ChartCoords c = rect_coords(X, Y);
    // chart coordinates of the matching strip point
    double a_strip = c.a;
    if (c.piece == kCore) {
        double d = m1_ + alpha_ * c.a;
        a_strip = (profile_.wall_radius(d) - scale_.L1) / gamma_;
    } else if (c.piece == kTop || c.piece == kBottom) {
        long double lt = rect_len(c.zeta);
        double d = (double)((long double)m1_ +
                            (long double)alpha_ * ((long double)X - rect_anchor(c.zeta)) / lt);
        a_strip = (profile_.wall_radius(d) - scale_.L1) / gamma_;
    }
    return chart_jacobian(c.piece, a_strip, c.zeta).inverse();
}

void SqueezedRectMap::strip_sample(int patch, double a, double b, ChartSample& out) const {
    long double zeta;
    long double band_area;  // |d(x,y)/d(a,b)| for the patch chart
    switch (patch) {
        case kCore: {
            zeta = (long double)b;
            long double half = (long double)gamma_ * (0.5L - delta_);
            band_area = 4.0L * half * half;
            break;
        }
        case kTop:
        case kBottom: {
            // geometric grading in the rectangle slice length
            long double lt = (long double)beta_ / 2.0L * expl((long double)b * stretch_);
            zeta = (2.0L * lt - beta_) / (2.0L * (long double)alpha_ - beta_);
            zeta = std::min(1.0L, std::max(0.0L, zeta));
            long double dzeta_db = 2.0L * lt * stretch_ / (2.0L * (long double)alpha_ - beta_);
            band_area = band_len(zeta) * delta_ * gamma_ * dzeta_db;
            break;
        }
        case kRight:
        case kLeft: {
            zeta = (long double)b;
            long double xoff = (long double)gamma_ * (0.5L - delta_ * (1.0L - zeta));
            band_area = delta_ * gamma_ * 2.0L * xoff;
            break;
        }
        default:
            throw std::domain_error("bad patch id");
    }
    chart_strip_point(patch, a, zeta, out.x, out.y);
    out.image = chart_value(patch, a, zeta);
    out.jac = chart_jacobian(patch, a, zeta);
    out.area = band_area;
}

namespace {

std::vector<double> window_splits(double center, double width) {
    std::vector<double> out;
    for (double v : {center - width, center, center + width})
        if (v > 1e-6 && v < 1.0 - 1e-6) out.push_back(v);
    return out;
}

}  // namespace

std::vector<double> SqueezedRectMap::strip_splits(int patch) const {
    if (patch != kTop && patch != kBottom) return {};
    // the dominant off-diagonal chart derivative changes sign where the flat
    // depth passes the midpoint; the operator norm dips there over a width of
    // order beta/alpha
    double a0 = (profile_.wall_radius(m1_ + alpha_ / 2) - scale_.L1) / gamma_;
    double w = std::min(0.1, 32.0 * beta_ / (2.0 * alpha_));
    return window_splits(a0, w);
}

std::vector<double> SqueezedRectMap::rect_splits(int patch) const {
    if (patch != kTop && patch != kBottom) return {};
    double w = std::min(0.1, 32.0 * beta_ / (2.0 * alpha_));
    return window_splits(0.5, w);
}

void SqueezedRectMap::rect_sample(int patch, double a, double b, ChartSample& out) const {
    long double zeta;
    long double area;
    switch (patch) {
        case kCore: {
            zeta = (long double)b;
            long double q = (long double)beta_ / 4.0L;
            area = 4.0L * q * q;
            break;
        }
        case kTop:
        case kBottom: {
            long double lt = (long double)beta_ / 2.0L * expl((long double)b * stretch_);
            zeta = (2.0L * lt - beta_) / (2.0L * (long double)alpha_ - beta_);
            zeta = std::min(1.0L, std::max(0.0L, zeta));
            long double dzeta_db = 2.0L * lt * stretch_ / (2.0L * (long double)alpha_ - beta_);
            area = rect_len(zeta) * ((long double)beta_ / 4.0L) * dzeta_db;
            break;
        }
        case kRight:
        case kLeft: {
            zeta = (long double)b;
            long double n = (long double)beta_ * (1.0L + zeta) / 4.0L;
            area = (2.0L * (long double)alpha_ - beta_) / 4.0L * 2.0L * n;
            break;
        }
        default:
            throw std::domain_error("bad patch id");
    }
    // rectangle point of the patch chart
    double X, Y;
    switch (patch) {
        case kCore: {
            long double q = (long double)beta_ / 4.0L;
            X = (double)((long double)Xc_ + (2.0L * a - 1.0L) * q);
            Y = (double)((2.0L * zeta - 1.0L) * q);
            break;
        }
        case kTop:
        case kBottom: {
            long double lt = rect_len(zeta);
            X = (double)(rect_anchor(zeta) + (long double)a * lt);
            Y = (double)(top_a2(zeta));
            if (patch == kBottom) Y = -Y;
            break;
        }
        default: {  // kRight / kLeft
            long double off = (2.0L * (long double)alpha_ - beta_) * (1.0L - zeta) / 4.0L;
            X = (double)(patch == kRight ? (long double)m2_ - off : (long double)m1_ + off);
            long double n = (long double)beta_ * (1.0L + zeta) / 4.0L;
            Y = (double)((2.0L * a - 1.0L) * n);
            break;
        }
    }
    out.x = X;
    out.y = Y;
    // strip chart coordinate matching this rectangle point
    double a_strip = a;
    if (patch == kCore || patch == kTop || patch == kBottom) {
        long double lt = (patch == kCore) ? 0.0L : rect_len(zeta);
        double d = (patch == kCore)
                       ? m1_ + alpha_ * a
                       : (double)((long double)m1_ +
                                  (long double)alpha_ * ((long double)X - rect_anchor(zeta)) / lt);
        a_strip = (profile_.wall_radius(d) - scale_.L1) / gamma_;
    }
    double sx, sy;
    chart_strip_point(patch, a_strip, zeta, sx, sy);
    out.image = {sx, sy};
    out.jac = chart_jacobian(patch, a_strip, zeta).inverse();
    out.area = area;
}

}  // namespace cuspext
