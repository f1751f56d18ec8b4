#pragma once

#include "cuspext/extension.hpp"
#include "cuspext/io.hpp"

namespace cuspext {

struct ImageSpec {
    double x0 = -2, x1 = 2, y0 = -2, y1 = 2;  // target-plane viewport
    int width = 512, height = 512;
    int grid_density = 24;  // source grid lines per axis (grid-warp mode)
};

void validate_image_spec(const ImageSpec& spec);

// Images of a Cartesian source grid under the plane map, rasterized over the
// viewport.
Image render_grid_warp(const PlaneExtension& ext, const ImageSpec& spec);

// Grayscale log10 of the pointwise distortion (clipped to [0, 6]); the
// viewport here is in the source plane.
Image render_heatmap(const PlaneExtension& ext, const ImageSpec& spec);

}  // namespace cuspext
