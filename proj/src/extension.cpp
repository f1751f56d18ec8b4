#include "cuspext/extension.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace cuspext {

namespace {

Vec2 complex_square(Vec2 z) { return {z.x * z.x - z.y * z.y, 2.0 * z.x * z.y}; }

}  // namespace

std::string RegionInfo::name() const {
    switch (tag) {
        case Tag::Conformal: return "Ms_closure";
        case Tag::Cells: return "Omega1(" + std::to_string(cell_index) + ")";
        case Tag::Outer: return "Omega2";
        case Tag::Boundary: return "boundary";
    }
    return "?";
}

PlaneExtension::PlaneExtension(const Scenario& scenario)
    : scenario_(scenario),
      profile_(),
      cells_(
          [&]() -> DyadicExtension {
              if (scenario.domain == DomainKind::CuspFamily) {
                  if (!(scenario.s > 1.0)) throw std::domain_error("cusp degree must exceed 1");
                  if (scenario.j0 < 3) throw std::domain_error("j0 must be at least 3");
                  profile_ = CuspProfile{1.0, scenario.s};
                  return DyadicExtension(profile_, scenario.j0,
                                         scenario.construction == ConstructionKind::Squeezed,
                                         scenario.squeeze);
              }
              if (scenario.j0 < 6 || scenario.j0 % 2 != 0)
                  throw std::domain_error("cardioid scenario needs an even j0 >= 6");
              CardioidLocalData data = fit_cardioid_constants(scenario.j0);
              c1_ = data.c1;
              c2_ = data.c2;
              profile_ = CuspProfile{std::sqrt(c1_), 1.5};
              return DyadicExtension(profile_, scenario.j0 / 2,
                                     scenario.construction == ConstructionKind::Squeezed,
                                     scenario.squeeze);
          }()) {
    if (scenario_.domain == DomainKind::CuspFamily) boundary_.emplace(BoundaryCurve::build(scenario_.s));
    inner_radius_ = cells_.outer_radius();
    fill_depth_ = std::pow(2.0, -2.0 * cells_.first_index());
    corner_angle_ = profile_.wall_angle(fill_depth_);
    gap_at_rim_ = profile_.gap_angle_at_depth(fill_depth_);
    if (scenario_.domain == DomainKind::Cardioid) {
        source_vlo_ = profile_.half_width(fill_depth_);
        source_vhi_ = std::sqrt(cardioid_d(-fill_depth_));
        target_vhi_ = source_vhi_;
    } else {
        source_vlo_ = source_vhi_ = 0.0;
        target_vhi_ = profile_.half_width(fill_depth_);
    }
    double ra_max = 0;
    for (int i = 0; i <= 2048; ++i) ra_max = std::max(ra_max, source_boundary_radius(kPi * i / 2048));
    collar_radius_ = 4.0 * ra_max;
    kappa_ = 1.0;
    build_speed_table();
}

void PlaneExtension::build_speed_table() {
    // Target value of the radial derivative at the inner boundary, per angle.
    // Two constraints shape it: the square root of the boundary speed ratio
    // splits the tangential compression evenly between the two principal
    // stretches (the correspondence squeezes the whole rim piece into a tiny
    // arc), and a fold floor keeps the radial advance ahead of the boundary
    // tilt swept by the angular drift of the fibers. The speed profile jumps
    // at the rim corner, so the graded value is held constant across the rim
    // piece and transitions on the wall side, where the angular derivative of
    // the blend is of order one.
    const int n = 2048;
    double rim = std::sqrt(kappa_) * collar_radius_;
    std::vector<double> logg(n + 1), floor_raw(n + 1);
    for (int i = 0; i <= n; ++i) {
        double th = kPi * i / n;
        logg[i] = std::log(boundary_speed_ratio(th));
        double ain = boundary_angle_map(th);
        double drift = std::fabs(th / 2.0 - ain);
        double h = 1e-5;
        double rbp = (target_boundary_radius(std::min(ain + h, kPi / 2)) -
                      target_boundary_radius(std::max(ain - h, 0.0))) /
                     (2 * h);
        floor_raw[i] =
            1.5 * std::fabs(rbp) * drift / std::max(collar_radius_ - source_boundary_radius(th), 1e-9);
        (void)rim;
    }
    auto smooth_at = [&](const std::vector<double>& v, int i, int w) {
        double acc = 0;
        int cnt = 0;
        for (int k = -w; k <= w; ++k) {
            int idx = std::clamp(i + k, 0, n);
            acc += v[idx];
            ++cnt;
        }
        return acc / cnt;
    };
    double lo = std::min(corner_angle_ + 0.02, kPi - 0.02);
    double hi = std::min(corner_angle_ + 0.35, kPi);
    double rim_level = 0;
    int rim_count = 0;
    for (int i = 0; i <= n; ++i) {
        double th = kPi * i / n;
        if (th >= lo && th <= hi) {
            rim_level += logg[i];
            ++rim_count;
        }
    }
    rim_level /= std::max(rim_count, 1);
    double blend_hi = corner_angle_ - 0.03;
    double blend_lo = corner_angle_ - 0.30;
    // widen the fold floor toward the wall side only: any gradient of the
    // graded value on the rim side of the corner folds the fibers there
    std::vector<double> floor_max(n + 1, 0.0);
    int fw = (int)(0.05 / kPi * n);
    int corner_idx = (int)(corner_angle_ / kPi * n);
    for (int i = 0; i <= std::min(corner_idx, n); ++i) {
        double m = 0;
        for (int k = -fw; k <= fw; ++k) {
            int idx = std::clamp(i + k, 0, std::min(corner_idx, n));
            m = std::max(m, floor_raw[idx]);
        }
        floor_max[i] = m;
    }
    speed_table_.assign(n + 1, 0.0);
    for (int i = 0; i <= n; ++i) {
        double th = kPi * i / n;
        double s;
        if (th >= blend_hi) {
            s = rim_level;
        } else if (th <= blend_lo) {
            s = smooth_at(logg, i, 8);
        } else {
            double u = (blend_hi - th) / (blend_hi - blend_lo);
            s = u * smooth_at(logg, i, 8) + (1.0 - u) * rim_level;
        }
        double base = std::exp(0.5 * s);
        double fl = th <= corner_angle_ ? smooth_at(floor_max, i, 8) : 0.0;
        speed_table_[i] = std::clamp(std::max(base, fl), 0.02, 1.9);
    }
}

double PlaneExtension::graded_speed(double theta) const {
    double th = std::clamp(std::fabs(theta), 0.0, kPi);
    double pos = th / kPi * (double)(speed_table_.size() - 1);
    int i = std::min((int)pos, (int)speed_table_.size() - 2);
    double frac = pos - i;
    return speed_table_[i] * (1 - frac) + speed_table_[i + 1] * frac;
}

double PlaneExtension::wall_corner_angle() const { return corner_angle_; }

double PlaneExtension::segment_arc_radius(double theta_hat, double depth, double vlo,
                                          double vhi) const {
    if (vhi <= vlo) return 0.0;
    double nu = kPi - 2.0 * theta_hat;
    if (nu < 0) return 0.0;
    double v = depth * std::tan(nu);
    if (v < vlo - 1e-300 || v > vhi * (1.0 + 1e-12)) return 0.0;
    return std::pow(depth * depth + v * v, 0.25);
}

double PlaneExtension::source_boundary_radius(double theta) const {
    double th = std::fabs(theta);
    double best = inner_radius_;
    if (scenario_.domain == DomainKind::CuspFamily) {
        best = std::max(best, boundary_->radial_extent(th));
    } else {
        if (th < kPi / 2) best = std::max(best, 2.0 * std::cos(th));
        best = std::max(best, segment_arc_radius(th, fill_depth_, source_vlo_, source_vhi_));
    }
    return best;
}

double PlaneExtension::target_boundary_radius(double theta_hat) const {
    double th = std::fabs(theta_hat);
    double best = segment_arc_radius(th, fill_depth_, 0.0, target_vhi_);
    if (scenario_.domain == DomainKind::CuspFamily) {
        best = std::max(best, boundary_->radial_extent(th));
    } else if (th < kPi / 2) {
        best = std::max(best, 2.0 * std::cos(th));
    }
    return best;
}

double PlaneExtension::boundary_angle_map(double theta) const {
    double th = std::fabs(theta);
    if (th > kPi + 1e-12) throw std::domain_error("boundary angle outside (-pi, pi]");
    double out;
    if (th <= corner_angle_) {
        out = th;
    } else {
        double v = profile_.half_width(fill_depth_) * 2.0 * (kPi - th) / gap_at_rim_;
        out = (kPi - std::atan(v / fill_depth_)) / 2.0;
    }
    return theta < 0 ? -out : out;
}

double PlaneExtension::boundary_speed_ratio(double theta) const {
    double h = 1e-6;
    double lo = std::max(theta - h, 0.0), hi = std::min(theta + h, kPi);
    auto src = [&](double t) {
        double r = source_boundary_radius(t);
        return Vec2{r * std::cos(t), r * std::sin(t)};
    };
    auto dst = [&](double t) {
        double a = boundary_angle_map(t);
        double r = target_boundary_radius(a);
        return Vec2{r * std::cos(a), r * std::sin(a)};
    };
    double ds = dist(src(hi), src(lo));
    double dt = dist(dst(hi), dst(lo));
    if (ds <= 0) return 1.0;
    return dt / ds;
}

Vec2 PlaneExtension::collar_map(Vec2 z) const {
    double rho = norm(z);
    double th = std::atan2(z.y, z.x);
    double sign = th < 0 ? -1.0 : 1.0;
    double at = std::fabs(th);
    double rim = std::sqrt(kappa_) * collar_radius_;
    if (rho >= collar_radius_) {
        double ang = th / 2.0;
        return {std::sqrt(kappa_) * rho * std::cos(ang), std::sqrt(kappa_) * rho * std::sin(ang)};
    }
    double ra = source_boundary_radius(at);
    double lam = (rho - ra) / (collar_radius_ - ra);
    if (lam < -1e-9) throw std::domain_error("point not in the outer region");
    lam = std::clamp(lam, 0.0, 1.0);
    double ain = boundary_angle_map(at);
    double ease = lam * lam * (3.0 - 2.0 * lam);  // angular motion eases in and out
    double ahat = (1.0 - ease) * ain + ease * at / 2.0;
    double rb = target_boundary_radius(ahat);
    double g = graded_speed(at);
    double G = std::clamp(g * (collar_radius_ - ra) / (rim - rb), 0.02, 1.9);
    // the speed grading acts only in a thin layer: beyond it the fibers are
    // identical for every G, so angular variation of G cannot fold them
    const double layer = 0.3;
    double B = lam * (G + (1.0 - G) * std::min(1.0, lam / layer));
    double rhat = rb + (rim - rb) * B;
    double ang = sign * ahat;
    return {rhat * std::cos(ang), rhat * std::sin(ang)};
}

Vec2 PlaneExtension::eval_outer(Vec2 z) const { return complex_square(collar_map(z)); }

bool PlaneExtension::in_conformal_region(Vec2 z) const {
    if (scenario_.domain == DomainKind::CuspFamily) return boundary_->contains_analytic(z);
    if (std::hypot(z.x - 1.0, z.y) < 1.0) return true;
    Vec2 w = complex_square(z);
    double depth = -w.x;
    if (depth <= 0 || depth > fill_depth_) return false;
    double yy = w.y * w.y;
    double inner = profile_.half_width(depth);
    if (yy < inner * inner) return false;
    return yy <= cardioid_d(-depth);
}

Vec2 PlaneExtension::eval_conformal(Vec2 z) const { return complex_square(z); }

Vec2 PlaneExtension::eval_cells(Vec2 z) const {
    int j = cells_.dispatch_radius(norm(z));
    return cells_.cell(j).map(z);
}

Vec2 PlaneExtension::eval_inverse_cells(Vec2 w) const { return cells_.eval_inverse(w); }

Vec2 PlaneExtension::eval(Vec2 z) const {
    double rho = norm(z);
    if (rho == 0.0) return {0.0, 0.0};
    if (in_conformal_region(z)) return complex_square(z);
    if (rho <= inner_radius_ * (1.0 + 1e-12)) {
        if (rho < cells_.min_radius()) return complex_square(z);  // beyond the cell cap
        return eval_cells(z);
    }
    return eval_outer(z);
}

RegionInfo PlaneExtension::classify(Vec2 z, double tol) const {
    double rho = norm(z);
    RegionInfo info;
    if (rho <= tol) {
        info.tag = RegionInfo::Tag::Boundary;
        return info;
    }
    bool conformal = in_conformal_region(z);
    if (scenario_.domain == DomainKind::CuspFamily) {
        if (boundary_->locate(z, tol) == Location::Boundary) {
            info.tag = RegionInfo::Tag::Boundary;
            return info;
        }
    } else {
        if (std::fabs(std::hypot(z.x - 1.0, z.y) - 1.0) <= tol) {
            info.tag = RegionInfo::Tag::Boundary;
            return info;
        }
    }
    if (!conformal && std::fabs(rho - inner_radius_) <= tol) {
        info.tag = RegionInfo::Tag::Boundary;
        return info;
    }
    if (conformal) {
        info.tag = RegionInfo::Tag::Conformal;
        return info;
    }
    if (rho < inner_radius_) {
        info.tag = RegionInfo::Tag::Cells;
        info.cell_index = cells_.dispatch_radius(rho);
        return info;
    }
    info.tag = RegionInfo::Tag::Outer;
    return info;
}

Mat2 PlaneExtension::jacobian(Vec2 z) const {
    if (in_conformal_region(z))
        return {2.0L * z.x, -2.0L * z.y, 2.0L * z.y, 2.0L * z.x};
    double rho = norm(z);
    if (rho <= inner_radius_ && rho >= cells_.min_radius()) return cells_.jacobian(z);
    throw std::domain_error("no analytic derivative in the outer region");
}

bool PlaneExtension::has_analytic_jacobian(Vec2 z) const {
    if (in_conformal_region(z)) return true;
    double rho = norm(z);
    return rho <= inner_radius_ && rho >= cells_.min_radius();
}

BoundaryCorrespondence PlaneExtension::boundary_correspondence(int n) const {
    BoundaryCorrespondence bc;
    bc.theta.resize(n + 1);
    bc.source.resize(n + 1);
    bc.image.resize(n + 1);
    bc.s_source.assign(n + 1, 0.0);
    bc.s_image.assign(n + 1, 0.0);
    for (int i = 0; i <= n; ++i) {
        double th = -kPi + 2.0 * kPi * i / n;
        double r = source_boundary_radius(th);
        bc.theta[i] = th;
        bc.source[i] = {r * std::cos(th), r * std::sin(th)};
        double sign = th < 0 ? -1.0 : 1.0;
        double a = boundary_angle_map(std::fabs(th)) * sign;
        double rb = target_boundary_radius(a);
        bc.image[i] = complex_square({rb * std::cos(a), rb * std::sin(a)});
        if (i > 0) {
            bc.s_source[i] = bc.s_source[i - 1] + dist(bc.source[i], bc.source[i - 1]);
            bc.s_image[i] = bc.s_image[i - 1] + dist(bc.image[i], bc.image[i - 1]);
        }
    }
    return bc;
}

std::string PlaneExtension::descriptor_json() const {
    nlohmann::json j;
    j["domain"] = scenario_.domain == DomainKind::CuspFamily ? "ms" : "cardioid";
    j["s"] = scenario_.domain == DomainKind::CuspFamily ? scenario_.s : 1.5;
    j["j0"] = scenario_.j0;
    j["construction"] =
        scenario_.construction == ConstructionKind::Simple ? "simple" : "squeezed";
    if (scenario_.construction == ConstructionKind::Squeezed) {
        j["delta_mode"] = scenario_.squeeze.mode == SqueezeParams::Mode::Exp ? "exp" : "powerlog";
        if (scenario_.squeeze.mode == SqueezeParams::Mode::PowerLog) j["p"] = scenario_.squeeze.p;
    }
    j["R_in"] = inner_radius_;
    j["R0"] = collar_radius_;
    j["kappa"] = kappa_;
    if (scenario_.domain == DomainKind::Cardioid) {
        j["c1"] = c1_;
        j["c2"] = c2_;
    }
    j["seed"] = scenario_.seed;
    return j.dump();
}

Vec2 cardioid_f0(const PlaneExtension& ext, Vec2 z) {
    if (ext.scenario().domain != DomainKind::Cardioid)
        throw std::invalid_argument("cardioid_f0 needs a cardioid scenario");
    return ext.eval({z.x + 1.0, z.y});
}

}  // namespace cuspext
