#include "cuspext/render.hpp"

#include <algorithm>
#include <cmath>

#include "cuspext/quadrature.hpp"

namespace cuspext {

void validate_image_spec(const ImageSpec& spec) {
    if (spec.width <= 0 || spec.height <= 0 || spec.width > 8192 || spec.height > 8192)
        throw std::invalid_argument("image resolution out of range (1..8192)");
    if (!(spec.x1 > spec.x0) || !(spec.y1 > spec.y0))
        throw std::invalid_argument("empty viewport");
}

namespace {

void put_pixel(Image& img, int px, int py, unsigned char r, unsigned char g, unsigned char b) {
    if (px < 0 || py < 0 || px >= img.width || py >= img.height) return;
    size_t o = ((size_t)py * img.width + px) * 3;
    img.rgb[o] = r;
    img.rgb[o + 1] = g;
    img.rgb[o + 2] = b;
}

void draw_segment(Image& img, const ImageSpec& spec, Vec2 a, Vec2 b, unsigned char lum) {
    auto tox = [&](double x) { return (x - spec.x0) / (spec.x1 - spec.x0) * (img.width - 1); };
    auto toy = [&](double y) { return (spec.y1 - y) / (spec.y1 - spec.y0) * (img.height - 1); };
    double ax = tox(a.x), ay = toy(a.y), bx = tox(b.x), by = toy(b.y);
    int steps = (int)std::ceil(std::max(std::fabs(bx - ax), std::fabs(by - ay))) + 1;
    if (steps > 4 * (img.width + img.height)) return;  // segment jumped a region seam
    for (int i = 0; i <= steps; ++i) {
        double t = double(i) / steps;
        put_pixel(img, (int)std::lround(ax + t * (bx - ax)), (int)std::lround(ay + t * (by - ay)),
                  lum, lum, lum);
    }
}

}  // namespace

Image render_grid_warp(const PlaneExtension& ext, const ImageSpec& spec) {
    validate_image_spec(spec);
    Image img;
    img.width = spec.width;
    img.height = spec.height;
    img.rgb.assign((size_t)spec.width * spec.height * 3, 0);

    // source window: the square whose image roughly fills the viewport
    double half = 0.5 * std::max(spec.x1 - spec.x0, spec.y1 - spec.y0);
    double src_half = std::sqrt(std::max(half, 1e-6));
    int lines = std::max(2, spec.grid_density);
    int samples = 16 * lines;
    for (int li = 0; li <= lines; ++li) {
        double c = -src_half + 2.0 * src_half * li / lines;
        Vec2 prev_h, prev_v;
        bool have = false;
        for (int i = 0; i <= samples; ++i) {
            double t = -src_half + 2.0 * src_half * i / samples;
            Vec2 ph = ext.eval({t, c});
            Vec2 pv = ext.eval({c, t});
            if (have) {
                draw_segment(img, spec, prev_h, ph, 200);
                draw_segment(img, spec, prev_v, pv, 120);
            }
            prev_h = ph;
            prev_v = pv;
            have = true;
        }
    }
    return img;
}

Image render_heatmap(const PlaneExtension& ext, const ImageSpec& spec) {
    validate_image_spec(spec);
    Image img;
    img.width = spec.width;
    img.height = spec.height;
    img.rgb.assign((size_t)spec.width * spec.height * 3, 0);
    for (int py = 0; py < spec.height; ++py) {
        double y = spec.y1 - (spec.y1 - spec.y0) * (py + 0.5) / spec.height;
        for (int px = 0; px < spec.width; ++px) {
            double x = spec.x0 + (spec.x1 - spec.x0) * (px + 0.5) / spec.width;
            Vec2 z{x, y};
            long double K = 1.0L;
            if (ext.has_analytic_jacobian(z)) {
                K = distortion(ext.jacobian(z));
            } else {
                double h = 1e-6 * std::max(1.0, norm(z));
                Mat2 fd = jacobian_fd([&](Vec2 p) { return ext.eval(p); }, z, h);
                K = distortion(fd);
            }
            double v = (double)log10l(std::max(K, 1.0L));
            v = std::clamp(v / 6.0, 0.0, 1.0);
            unsigned char lum = (unsigned char)std::lround(255.0 * v);
            put_pixel(img, px, py, lum, lum, lum);
        }
    }
    return img;
}

}  // namespace cuspext
