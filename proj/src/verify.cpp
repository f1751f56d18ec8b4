#include "cuspext/verify.hpp"

#include <cmath>
#include <random>

#include "cuspext/io.hpp"
#include "cuspext/probes.hpp"
#include "cuspext/quadrature.hpp"
#include "cuspext/squeeze.hpp"
#include "json.hpp"

namespace cuspext {

namespace {

Vec2 complex_square(Vec2 z) { return {z.x * z.x - z.y * z.y, 2.0 * z.x * z.y}; }

void add_check(VerifyReport& rep, const std::string& name, double measured, double limit,
               bool smaller_is_pass = true, const std::string& note = "") {
    VerifyCheck c;
    c.name = name;
    c.measured = measured;
    c.limit = limit;
    c.pass = smaller_is_pass ? (measured <= limit) : (measured >= limit);
    c.note = note;
    rep.checks.push_back(c);
}

}  // namespace

bool image_grid_injective(const std::vector<Vec2>& pts, int w, int h, std::string* why) {
    auto at = [&](int i, int k) { return pts[(size_t)k * w + i]; };
    // per quad: signed area of the image quadrilateral (valid for simple
    // quads, convex or pinched; bowties are caught by the edge crossing test)
    int sign = 0;
    for (int k = 0; k + 1 < h; ++k) {
        for (int i = 0; i + 1 < w; ++i) {
            Vec2 q[4] = {at(i, k), at(i + 1, k), at(i + 1, k + 1), at(i, k + 1)};
            double area = 0;
            for (int v = 0; v < 4; ++v) area += cross(q[v], q[(v + 1) % 4]);
            double scale = 0;
            for (int v = 0; v < 4; ++v) scale += dot(q[(v + 1) % 4] - q[v], q[(v + 1) % 4] - q[v]);
            if (std::fabs(area) < 1e-12 * scale) continue;
            int s = area > 0 ? 1 : -1;
            if (sign == 0) sign = s;
            if (s != sign) {
                if (why) *why = "quad orientation flip at (" + std::to_string(i) + "," +
                                std::to_string(k) + ")";
                return false;
            }
        }
    }
    std::vector<std::array<Vec2, 2>> segs;
    segs.reserve((size_t)(w - 1) * h + (size_t)w * (h - 1));
    for (int k = 0; k < h; ++k)
        for (int i = 0; i + 1 < w; ++i) segs.push_back({at(i, k), at(i + 1, k)});
    for (int k = 0; k + 1 < h; ++k)
        for (int i = 0; i < w; ++i) segs.push_back({at(i, k), at(i, k + 1)});
    if (any_segment_pair_crosses(segs)) {
        if (why) *why = "image grid edges cross";
        return false;
    }
    return true;
}

VerifyReport run_verification(const Scenario& scenario, int threads, bool full) {
    VerifyReport rep;
    PlaneExtension ext(scenario);
    const CuspProfile& pr = ext.profile();
    std::mt19937_64 rng(scenario.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int j0 = ext.first_cell_index();
    bool family = scenario.domain == DomainKind::CuspFamily;
    bool squeezed = scenario.construction == ConstructionKind::Squeezed;

    // --- curve-level checks -------------------------------------------------
    if (family) {
        double s = scenario.s;
        double worst = 0;
        for (int i = 1; i <= 200; ++i) {
            double u = -double(i) / 200;
            for (Branch b : {Branch::Upper, Branch::Lower}) {
                CuspArcPoint p = ellm_point(s, u, b);
                Vec2 sq = complex_square({p.x, p.y});
                Vec2 ref = ell1_point(s, u, b);
                worst = std::max(worst, dist(sq, ref));
            }
        }
        add_check(rep, "wall square round-trip", worst, 1e-12);

        const BoundaryCurve* bc = ext.boundary();
        double sym = 0;
        for (int i = 0; i <= 400; ++i) {
            double u = -double(i) / 400;
            CuspArcPoint up = ellm_point(s, u, Branch::Upper);
            CuspArcPoint dn = ellm_point(s, u, Branch::Lower);
            sym = std::max(sym, dist({up.x, -up.y}, {dn.x, dn.y}));
        }
        add_check(rep, "boundary mirror symmetry", sym, 1e-14);
        add_check(rep, "boundary is simple (no self-crossing)",
                  polyline_self_intersects(bc->polyline()) ? 1.0 : 0.0, 0.0);
        add_check(rep, "boundary sample size", (double)bc->polyline().size(), 4096.0, false);

        const ClosingArc& arc = bc->closing_arc();
        Vec2 t = wall_tangent(pr, -1.0);
        Vec2 radial = bc->z1() - Vec2{arc.cx, 0.0};
        double tang = std::fabs(dot(t, radial)) / (norm(t) * norm(radial));
        add_check(rep, "closing arc tangency", tang, 1e-8);
        add_check(rep, "closing arc radius match",
                  std::fabs(dist(bc->z1(), {arc.cx, 0.0}) - arc.radius), 1e-10);

        double rprev = pr.wall_radius(1e-4);
        bool monotone = true;
        for (int i = 1; i <= 100; ++i) {
            double r = pr.wall_radius(1e-4 * (1.0 - double(i) / 101));
            if (r >= rprev) monotone = false;
            rprev = r;
        }
        add_check(rep, "wall radius monotone toward the tip", monotone ? 0.0 : 1.0, 0.0);
    }

    // --- distortion identity -------------------------------------------------
    {
        double worst = 0;
        for (int i = 0; i < 200; ++i) {
            int j = j0 + (int)(unit(rng) * 6);
            CellMap cm = ext.cells().cell(j);
            PatchSample ps;
            cm.forward_sample(0, 0.1 + 0.8 * unit(rng), 0.1 + 0.8 * unit(rng), ps);
            long double det = ps.deriv.det();
            if (det <= 0) continue;
            Svd2 sv = svd2(ps.deriv);
            long double k1 = sv.smax / sv.smin;
            long double k2 = sv.smax * sv.smax / det;
            worst = std::max(worst, (double)(fabsl(k1 - k2) / k1));
        }
        add_check(rep, "distortion singular-value identity", worst, 1e-10);
    }

    // --- wall compatibility and dyadic interfaces ----------------------------
    {
        // wall rows evaluated at the exact strip edge (the squeezed band is
        // thinner than one ulp of the source point)
        double worst = 0;
        for (int j = j0; j < j0 + 5; ++j) {
            CellMap cm = ext.cells().cell(j);
            double t = cm.scale().t;
            for (int i = 1; i < 40; ++i) {
                double depth = 0.25 * t * t + (t * t - 0.25 * t * t) * i / 40.0;
                double ang = pr.wall_angle(depth);
                double r = pr.wall_radius(depth);
                for (double sgn : {1.0, -1.0}) {
                    Vec2 z{r * std::cos(ang), sgn * r * std::sin(ang)};
                    Vec2 got = cm.map_from_strip(r, sgn * cm.scale().sigma / 2);
                    Vec2 want = complex_square(z);
                    worst = std::max(worst, dist(got, want));
                }
            }
        }
        add_check(rep, "wall compatibility with the square map", worst, 1e-9);
        if (!squeezed) {
            double worst2 = 0;
            CellMap cm = ext.cells().cell(j0 + 1);
            double t = cm.scale().t;
            for (int i = 1; i < 40; ++i) {
                double depth = 0.25 * t * t + (t * t - 0.25 * t * t) * i / 40.0;
                double ang = pr.wall_angle(depth);
                double r = pr.wall_radius(depth);
                Vec2 z{r * std::cos(ang), r * std::sin(ang)};
                worst2 = std::max(worst2, dist(cm.map(z), complex_square(z)));
            }
            add_check(rep, "wall compatibility from rounded source points", worst2, 1e-9);
        }
    }
    {
        double worst = 0;
        for (int j = j0; j < j0 + 6; ++j) {
            CellMap outer = ext.cells().cell(j);
            CellMap inner = ext.cells().cell(j + 1);
            double rho = outer.scale().L1;
            double gap = outer.gap_angle(rho);
            for (int i = 0; i <= 60; ++i) {
                double th = kPi - gap / 2 + gap * i / 60.0;
                Vec2 a = outer.map_from_strip(outer.scale().L1,
                                              outer.scale().sigma * (kPi - th) / gap);
                Vec2 b = inner.map_from_strip(inner.scale().L2,
                                              inner.scale().sigma * (kPi - th) / gap);
                worst = std::max(worst, dist(a, b));
            }
        }
        add_check(rep, "dyadic interface continuity", worst, 1e-9);
    }

    // --- derivatives ----------------------------------------------------------
    {
        double worst = 0;
        for (int i = 0; i < 100; ++i) {
            int j = j0 + (int)(unit(rng) * 4);
            CellMap cm = ext.cells().cell(j);
            double rho = cm.scale().L1 + (0.15 + 0.7 * unit(rng)) * cm.scale().sigma;
            double gap = cm.gap_angle(rho);
            double th = kPi + gap * (unit(rng) - 0.5) * 0.7;
            Vec2 z{rho * std::cos(th), rho * std::sin(th)};
            Mat2 an = cm.jacobian(z);
            Mat2 fd = jacobian_fd([&](Vec2 p) { return cm.map(p); }, z, 1e-7 * cm.scale().t, true);
            double num = (double)(fabsl(an.a11 - fd.a11) + fabsl(an.a12 - fd.a12) +
                                  fabsl(an.a21 - fd.a21) + fabsl(an.a22 - fd.a22));
            double den = (double)(fabsl(an.a11) + fabsl(an.a12) + fabsl(an.a21) + fabsl(an.a22));
            worst = std::max(worst, num / den);
        }
        add_check(rep, "analytic vs finite-difference derivatives", worst, 1e-6);
    }
    {
        bool positive = true;
        for (int i = 0; i < 10000; ++i) {
            int j = j0 + (int)(unit(rng) * 8);
            CellMap cm = ext.cells().cell(j);
            int patch = (int)(unit(rng) * cm.forward_patch_count());
            PatchSample ps;
            cm.forward_sample(patch, 0.01 + 0.98 * unit(rng), 0.01 + 0.98 * unit(rng), ps);
            if (!(ps.det > 0.0L)) positive = false;
        }
        add_check(rep, "orientation (determinant positive)", positive ? 1.0 : 0.0, 1.0, false);
    }

    // --- global continuity ----------------------------------------------------
    {
        double worst = 0;
        // cells against the outer blend on the rim circle
        double rho = ext.inner_radius();
        CellMap cm = ext.cells().cell(j0);
        double gap = cm.gap_angle(rho * (1 - 1e-13));
        for (int i = 1; i < 200; ++i) {
            double th = kPi - gap / 2 + gap * i / 200.0;
            Vec2 z{rho * std::cos(th), rho * std::sin(th)};
            Vec2 from_cells =
                cm.map_from_strip(cm.scale().L2, cm.scale().sigma * (kPi - th) / gap);
            worst = std::max(worst, dist(from_cells, ext.eval_outer(z)));
        }
        add_check(rep, "rim continuity (cells vs outer blend)", worst, 1e-8);
    }
    {
        // conformal boundary against the outer blend away from the cells
        double worst = 0;
        for (int i = 0; i <= 300; ++i) {
            double th = -kPi + 2 * kPi * i / 300.0;
            double ra = ext.source_boundary_radius(th);
            if (ra <= ext.inner_radius() * (1 + 1e-9)) continue;
            Vec2 z{ra * std::cos(th), ra * std::sin(th)};
            worst = std::max(worst, dist(ext.eval_outer(z), complex_square(z)));
        }
        add_check(rep, "conformal boundary continuity (square vs outer blend)", worst, 1e-8);
    }
    {
        double worst = 0;
        double R0 = ext.collar_radius();
        for (int i = 0; i < 100; ++i) {
            double th = -kPi + 2 * kPi * i / 100.0;
            Vec2 z{R0 * std::cos(th), R0 * std::sin(th)};
            Vec2 far{ext.far_coefficient() * z.x * R0, ext.far_coefficient() * z.y * R0};
            worst = std::max(worst, dist(ext.eval_outer(z), far));
        }
        add_check(rep, "far-field continuity at the control circle", worst, 1e-9);
        Vec2 z{2 * R0, 0};
        Vec2 want{ext.far_coefficient() * z.x * 2 * R0, 0};
        add_check(rep, "far-field law at twice the control radius", dist(ext.eval(z), want), 0.0);
    }

    // --- outer blend homeomorphism + distortion -------------------------------
    {
        int n = full ? 256 : 96;
        std::vector<Vec2> img((size_t)(n + 1) * (n + 1));
        parallel_for(n + 1, threads, [&](int k) {
            for (int i = 0; i <= n; ++i) {
                Vec2 z{-2.0 + 4.0 * i / n, -2.0 + 4.0 * k / n};
                img[(size_t)k * (n + 1) + i] = ext.eval(z);
            }
        });
        std::string why;
        bool ok = image_grid_injective(img, n + 1, n + 1, &why);
        add_check(rep, "grid injectivity over the square window", ok ? 0.0 : 1.0, 0.0, true, why);
    }
    {
        double kmax = 0;
        int nt = 72, nl = 24;
        for (int i = 0; i < nt; ++i) {
            double th = -kPi + 2 * kPi * (i + 0.5) / nt;
            double ra = ext.source_boundary_radius(th);
            for (int k = 1; k < nl; ++k) {
                double lam = double(k) / nl;
                double rho = ra + lam * (ext.collar_radius() - ra);
                Vec2 z{rho * std::cos(th), rho * std::sin(th)};
                Mat2 fd = jacobian_fd([&](Vec2 p) { return ext.eval_outer(p); }, z, 1e-7 * rho);
                kmax = std::max(kmax, (double)distortion(fd));
            }
        }
        add_check(rep, "outer blend sampled distortion", kmax, 50.0);
    }

    // --- squeezed-specific checks ---------------------------------------------
    if (squeezed) {
        CellMap cm = ext.cells().cell(j0 + 2);
        const auto* sq = dynamic_cast<const SqueezedRectMap*>(&cm.rect_map());
        double worst = 0;
        for (int i = 0; i <= 1000; ++i) {
            double a = double(i) / 1000;
            worst = std::max(worst, dist(sq->chart_value(SqueezedRectMap::kCore, a, 1.0L),
                                         sq->chart_value(SqueezedRectMap::kTop, a, 0.0L)));
            worst = std::max(worst, dist(sq->chart_value(SqueezedRectMap::kCore, 1.0, a),
                                         sq->chart_value(SqueezedRectMap::kRight, a, 0.0L)));
            worst = std::max(worst, dist(sq->chart_value(SqueezedRectMap::kTop, 1.0, a),
                                         sq->chart_value(SqueezedRectMap::kRight, 1.0, a)));
            worst = std::max(worst, dist(sq->chart_value(SqueezedRectMap::kTop, 0.0, a),
                                         sq->chart_value(SqueezedRectMap::kLeft, 1.0, a)));
            worst = std::max(worst, dist(sq->chart_value(SqueezedRectMap::kCore, a, 0.0L),
                                         sq->chart_value(SqueezedRectMap::kBottom, a, 0.0L)));
            worst = std::max(worst, dist(sq->chart_value(SqueezedRectMap::kBottom, 1.0, a),
                                         sq->chart_value(SqueezedRectMap::kRight, 0.0, a)));
        }
        add_check(rep, "trapezoid interface continuity", worst, 1e-10);

        const TrapezoidDecomposition& dec = sq->decomposition();
        long double g = dec.gamma();
        long double total = dec.area_inner() + 4.0L * dec.area_band();
        add_check(rep, "trapezoid partition area identity",
                  (double)fabsl(total - g * g) / (double)(g * g), 1e-12);

        SimpleRectMap plain(pr, cm.scale());
        double edge = 0;
        for (int i = 0; i <= 500; ++i) {
            double a = double(i) / 500;
            Vec2 got = sq->chart_value(SqueezedRectMap::kRight, a, 1.0L);
            Vec2 want = plain.to_rect(cm.scale().L2, (2 * a - 1) * cm.scale().sigma / 2);
            edge = std::max(edge, dist(got, want));
        }
        add_check(rep, "outer edge matches the plain rectangle stage", edge, 1e-12);
    }

    // --- slope spot checks ------------------------------------------------------
    if (full) {
        CellFamily fam{pr, squeezed, scenario.squeeze};
        QuadratureParams qp;
        double s_eff = pr.expo;
        if (!squeezed) {
            double qc = 1.0 / (s_eff - 1.0);
            SeriesReport r1 = dyadic_series(fam, Quantity::Kf, qc, j0, j0 + 6, qp, 0.15, threads);
            add_check(rep, "distortion series critical slope", std::fabs(r1.slope), 0.2, true,
                      "q=" + format_g17(qc) + " verdict=" + r1.verdict);
            double pc = 2.0 * (s_eff + 1.0) / (2.0 * s_eff - 1.0);
            SeriesReport r2 =
                dyadic_series(fam, Quantity::Dfinv, pc, j0, j0 + 6, qp, 0.15, threads);
            add_check(rep, "inverse gradient series critical slope", std::fabs(r2.slope), 0.2,
                      true, "p=" + format_g17(pc) + " verdict=" + r2.verdict);
        } else {
            SeriesReport r3 = dyadic_series(fam, Quantity::Df, 1.0, j0, j0 + 6, qp, 0.1, threads);
            add_check(rep, "squeezed mass series slope", std::fabs(r3.slope + 3.0), 0.35, true,
                      "verdict=" + r3.verdict);
        }
    }

    return rep;
}

std::string verify_report_json(const VerifyReport& report, const std::string& descriptor_json) {
    nlohmann::json j;
    j["scenario"] = nlohmann::json::parse(descriptor_json);
    j["pass"] = report.pass();
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : report.checks) {
        nlohmann::json jc;
        jc["name"] = c.name;
        jc["pass"] = c.pass;
        jc["measured"] = c.measured;
        jc["limit"] = c.limit;
        if (!c.note.empty()) jc["note"] = c.note;
        arr.push_back(jc);
    }
    j["checks"] = arr;
    return j.dump(2);
}

}  // namespace cuspext
