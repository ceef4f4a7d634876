#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "biwave/image.hpp"

namespace biwave {

/// Decoded binary (P5) PGM, 8- or 16-bit.
struct PgmImage {
    int width = 0;
    int height = 0;
    int maxval = 255;
    std::vector<std::uint16_t> pixels;  // row-major
};

PgmImage read_pgm(const std::string& path);
void write_pgm(const std::string& path, const PgmImage& img);

/// Affine map between stored integers and float values:
/// value = offset + scale * pixel.
struct FloatMapping {
    double offset = 0.0;
    double scale = 1.0;
};

/// Scene I/O: 8-bit PGM, reflectance = pixel / maxval.
Scene read_scene_pgm(const std::string& path);
void write_scene_pgm(const std::string& path, const Scene& scene);

/// Reconstruction I/O: 16-bit PGM with [min, max] mapped onto [0, 65535].
/// The returned mapping belongs in the sidecar metadata.
FloatMapping write_image_pgm16(const std::string& path, const Image& image);
Image read_image_pgm16(const std::string& path, const FloatMapping& mapping);

/// Lossless little-endian float64 grid, side inferred from the byte count.
void write_raw_f64(const std::string& path, const Image& image);
Image read_raw_f64(const std::string& path);

Mask read_mask_pgm(const std::string& path);
void write_mask_pgm(const std::string& path, const Mask& mask);

}  // namespace biwave
