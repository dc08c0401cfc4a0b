#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "coverplan/geometry.hpp"

namespace coverplan {

/// 8-bit grayscale image, row 0 at the top (PGM order).
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> pixels;  // row-major

    uint8_t at(int x, int y) const { return pixels[static_cast<size_t>(y) * width + x]; }
};

/// Reads a binary (P5) or ASCII (P2) PGM with maxval <= 255. Color formats
/// and wide maxval are rejected as unsupported.
GrayImage load_image(const std::string& path);
GrayImage image_from_bytes(const std::string& bytes);

/// Cell set iff pixel intensity <= threshold (dark = region of interest).
/// Image rows are flipped so +y points up; one cell per pixel, cell size =
/// meters_per_pixel, origin at (0, 0).
RasterGrid threshold_segment(const GrayImage& img, int threshold,
                             double meters_per_pixel = 1.0);

/// Outer boundary polygon of the largest 4-connected set component, traced
/// along the pixel edges (so a filled w x h block yields exactly area w*h),
/// counter-clockwise, simplified with tolerance `simplify_tol` in meters.
/// A tolerance <= 0 keeps every chain vertex.
Polygon extract_boundary(const RasterGrid& grid, double simplify_tol);

}  // namespace coverplan
