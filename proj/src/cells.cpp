#include "cuspext/cells.hpp"

#include <cmath>
#include <stdexcept>

namespace cuspext {

CellScale make_cell_scale(const CuspProfile& profile, double t) {
    if (!(t > 0.0) || t > 0.125 + 1e-15)
        throw std::domain_error("cell scale t must lie in (0, 1/8]");
    CellScale s;
    s.t = t;
    s.L1 = profile.wall_radius(0.25 * t * t);
    s.L2 = profile.wall_radius(t * t);
    s.sigma = s.L2 - s.L1;
    return s;
}

SimpleRectMap::SimpleRectMap(const CuspProfile& profile, const CellScale& scale)
    : profile_(profile), scale_(scale) {
    m1_ = 0.25 * scale.t * scale.t;
    m2_ = scale.t * scale.t;
    alpha_ = m2_ - m1_;
    B_ = profile.half_width(m2_);
}

Vec2 SimpleRectMap::to_rect(double x, double y) const {
    return {profile_.wall_depth(x), 2.0 * B_ * y / scale_.sigma};
}

Mat2 SimpleRectMap::to_rect_jac(double x, double y) const {
    (void)y;
    double d = profile_.wall_depth(x);
    return {1.0L / profile_.wall_radius_d(d), 0, 0, 2.0L * B_ / scale_.sigma};
}

Vec2 SimpleRectMap::from_rect(double X, double Y) const {
    return {profile_.wall_radius(X), scale_.sigma * Y / (2.0 * B_)};
}

Mat2 SimpleRectMap::from_rect_jac(double X, double Y) const {
    (void)Y;
    return {profile_.wall_radius_d(X), 0, 0, scale_.sigma / (2.0L * B_)};
}

void SimpleRectMap::strip_sample(int patch, double a, double b, ChartSample& out) const {
    (void)patch;
    out.x = scale_.L1 + scale_.sigma * a;
    out.y = (b - 0.5) * scale_.sigma;
    out.image = to_rect(out.x, out.y);
    out.jac = to_rect_jac(out.x, out.y);
    out.area = (long double)scale_.sigma * scale_.sigma;
}

void SimpleRectMap::rect_sample(int patch, double a, double b, ChartSample& out) const {
    (void)patch;
    out.x = m1_ + alpha_ * a;
    out.y = (b - 0.5) * 2.0 * B_;
    out.image = from_rect(out.x, out.y);
    out.jac = from_rect_jac(out.x, out.y);
    out.area = (long double)alpha_ * 2.0 * B_;
}

CellMap::CellMap(const CuspProfile& profile, double t, std::shared_ptr<const RectMap> rect)
    : profile_(profile), scale_(make_cell_scale(profile, t)), rect_(std::move(rect)) {
    m1_ = 0.25 * t * t;
    m2_ = t * t;
    B_ = profile.half_width(m2_);
}

double CellMap::gap_angle(double r) const {
    return profile_.gap_angle_at_depth(profile_.wall_depth(r));
}

double CellMap::gap_angle_d(double r) const {
    double x = profile_.wall_depth(r);
    double P = profile_.half_width(x);
    double Pd = profile_.half_width_d(x);
    double datan_dx = (Pd * x - P) / (x * x + P * P);
    return datan_dx / profile_.wall_radius_d(x);
}

Vec2 CellMap::strip_from_source(Vec2 z) const {
    double r = norm(z);
    double th = std::atan2(z.y, z.x);
    if (th < 0) th += 2.0 * kPi;
    return {r, scale_.sigma * (kPi - th) / gap_angle(r)};
}

Vec2 CellMap::source_from_strip(double x, double y) const {
    double phi = gap_angle(x) * y / scale_.sigma;
    return {-x * std::cos(phi), x * std::sin(phi)};
}

Mat2 CellMap::source_from_strip_jac(double x, double y) const {
    double ell = gap_angle(x);
    double elld = gap_angle_d(x);
    double phi = ell * y / scale_.sigma;
    double c = std::cos(phi), s = std::sin(phi);
    double A = x * y * elld / scale_.sigma;
    double R = x * ell / scale_.sigma;
    return {-c + A * s, R * s, s + A * c, R * c};
}

Vec2 CellMap::spike_map(Vec2 w) const {
    double X = -w.x;
    return {X, B_ * w.y / profile_.half_width(X)};
}

Mat2 CellMap::spike_jac(Vec2 w) const {
    double X = -w.x;
    double P = profile_.half_width(X);
    double Pd = profile_.half_width_d(X);
    return {-1.0L, 0, (long double)B_ * w.y * Pd / (P * P), (long double)B_ / P};
}

Vec2 CellMap::spike_inv(Vec2 W) const {
    return {-W.x, profile_.half_width(W.x) * W.y / B_};
}

Mat2 CellMap::spike_inv_jac(Vec2 W) const {
    double P = profile_.half_width(W.x);
    double Pd = profile_.half_width_d(W.x);
    return {-1.0L, 0, (long double)W.y * Pd / B_, (long double)P / B_};
}

bool CellMap::contains(Vec2 z, double tol) const {
    double r = norm(z);
    if (r < scale_.L1 * (1.0 - tol) || r > scale_.L2 * (1.0 + tol)) return false;
    double th = std::atan2(z.y, z.x);
    if (th < 0) th += 2.0 * kPi;
    double rc = std::clamp(r, scale_.L1, scale_.L2);
    return std::fabs(kPi - th) <= gap_angle(rc) / 2.0 + tol;
}

bool CellMap::target_contains(Vec2 w, double tol) const {
    double X = -w.x;
    if (X < m1_ * (1.0 - tol) || X > m2_ * (1.0 + tol)) return false;
    return std::fabs(w.y) <= profile_.half_width(std::clamp(X, m1_, m2_)) * (1.0 + tol) + tol;
}

Vec2 CellMap::map_from_strip(double x, double y) const {
    return spike_inv(rect_->to_rect(x, y));
}

Vec2 CellMap::map(Vec2 z) const {
    Vec2 s = strip_from_source(z);
    Vec2 W = rect_->to_rect(s.x, s.y);
    return spike_inv(W);
}

Mat2 CellMap::jacobian(Vec2 z) const {
    Vec2 s = strip_from_source(z);
    Mat2 m1 = source_from_strip_jac(s.x, s.y).inverse();
    Mat2 m2 = rect_->to_rect_jac(s.x, s.y);
    Vec2 W = rect_->to_rect(s.x, s.y);
    Mat2 m3 = spike_inv_jac(W);
    return m3 * (m2 * m1);
}

Vec2 CellMap::inverse(Vec2 w) const {
    Vec2 W = spike_map(w);
    Vec2 s = rect_->from_rect(W.x, W.y);
    return source_from_strip(s.x, s.y);
}

Mat2 CellMap::inverse_jacobian(Vec2 w) const {
    Vec2 W = spike_map(w);
    Mat2 m3 = spike_jac(w);
    Mat2 m2 = rect_->from_rect_jac(W.x, W.y);
    Vec2 s = rect_->from_rect(W.x, W.y);
    Mat2 m1 = source_from_strip_jac(s.x, s.y);
    return m1 * (m2 * m3);
}

int CellMap::forward_patch_count() const { return rect_->strip_patch_count(); }

void CellMap::forward_sample(int patch, double a, double b, PatchSample& out) const {
    ChartSample cs;
    rect_->strip_sample(patch, a, b, cs);
    Mat2 strip = source_from_strip_jac(cs.x, cs.y);
    Mat2 m1 = strip.inverse();
    Mat2 m3 = spike_inv_jac(cs.image);
    out.deriv = m3 * (cs.jac * m1);
    out.det = m3.det() * cs.jac.det() / strip.det();
    out.target = spike_inv(cs.image);
    out.weight = cs.area * (long double)(cs.x * gap_angle(cs.x) / scale_.sigma);
}

int CellMap::inverse_patch_count() const { return rect_->rect_patch_count(); }

void CellMap::inverse_sample(int patch, double a, double b, PatchSample& out) const {
    ChartSample cs;
    rect_->rect_sample(patch, a, b, cs);
    Vec2 w = spike_inv({cs.x, cs.y});
    Mat2 m1 = source_from_strip_jac(cs.image.x, cs.image.y);
    Mat2 m3 = spike_jac(w);
    out.deriv = m1 * (cs.jac * m3);
    out.det = m1.det() * cs.jac.det() * m3.det();
    out.target = w;
    out.weight = cs.area * (long double)(profile_.half_width(cs.x) / B_);
}

double CellMap::target_area() const {
    // integral of 2 P(x) over [m1, m2]
    double e1 = profile_.expo + 1.0;
    return 2.0 * profile_.coeff * (std::pow(m2_, e1) - std::pow(m1_, e1)) / e1;
}

DyadicExtension::DyadicExtension(const CuspProfile& profile, int first_index, bool squeezed,
                                 const SqueezeParams& params)
    : profile_(profile), j_start_(first_index), squeezed_(squeezed), params_(params) {
    if (first_index < 3) throw std::domain_error("first cell index must be at least 3");
    outer_radius_ = profile.wall_radius(std::pow(2.0, -2.0 * first_index));
    // keep the cell half-height above the subnormal range
    j_cap_ = std::min<int>(kMaxCellIndex, (int)std::floor(500.0 / (2.0 * profile.expo)));
    min_radius_ = profile.wall_radius(std::pow(2.0, -2.0 * j_cap_ - 2.0));
}

CellMap DyadicExtension::cell(int j) const {
    if (j < j_start_ || j > j_cap_) throw std::domain_error("cell index out of range");
    return make_cell_map(profile_, std::pow(2.0, -j), squeezed_, params_);
}

int DyadicExtension::dispatch_radius(double rho) const {
    if (!(rho > 0) || rho > outer_radius_ * (1 + 1e-12))
        throw std::domain_error("radius outside the dyadic band");
    double tau = std::sqrt(profile_.wall_depth(std::min(rho, outer_radius_)));
    double xlog = -std::log2(tau);
    int j = (int)std::floor(xlog);
    if (xlog - j <= 1e-11 && j - 1 >= j_start_) j -= 1;
    return std::min(std::max(j, j_start_), j_cap_);
}

int DyadicExtension::dispatch_depth(double depth) const {
    if (!(depth > 0) || depth > std::pow(2.0, -2.0 * j_start_) * (1 + 1e-12))
        throw std::domain_error("depth outside the dyadic band");
    double m = -0.5 * std::log2(depth);
    int j = (int)std::floor(m);
    if (m - j <= 1e-11 && j - 1 >= j_start_) j -= 1;
    return std::min(std::max(j, j_start_), j_cap_);
}

bool DyadicExtension::contains(Vec2 z) const {
    double rho = norm(z);
    if (!(rho > 0) || rho > outer_radius_ * (1 + 1e-12)) return false;
    double tau = std::sqrt(profile_.wall_depth(std::min(rho, outer_radius_)));
    if (-std::log2(tau) > j_cap_) return false;
    double th = std::atan2(z.y, z.x);
    return std::fabs(th) >= profile_.wall_angle(profile_.wall_depth(rho)) - 1e-12;
}

Vec2 DyadicExtension::eval(Vec2 z) const {
    CellMap cm = cell(dispatch_radius(norm(z)));
    if (!cm.contains(z, 1e-9)) throw std::domain_error("point outside the dyadic cells");
    return cm.map(z);
}

Mat2 DyadicExtension::jacobian(Vec2 z) const {
    return cell(dispatch_radius(norm(z))).jacobian(z);
}

Vec2 DyadicExtension::eval_inverse(Vec2 w) const {
    CellMap cm = cell(dispatch_depth(-w.x));
    if (!cm.target_contains(w, 1e-9)) throw std::domain_error("point outside the flat cells");
    return cm.inverse(w);
}

Mat2 DyadicExtension::inverse_jacobian(Vec2 w) const {
    return cell(dispatch_depth(-w.x)).inverse_jacobian(w);
}

}  // namespace cuspext
