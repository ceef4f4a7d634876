#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "biwave/image.hpp"

namespace biwave {

/// Per-angle binary silhouettes, angles strictly increasing in [0, 360).
struct SilhouetteSet {
    struct View {
        double angle_degrees = 0.0;
        Mask mask;
    };
    int n = 0;
    std::vector<View> views;

    void validate() const;
};

/// Bit-packed G^3 occupancy grid, x fastest, then y, then z.
struct VoxelGrid {
    int resolution = 0;   // G
    double pitch = 0.0;   // world units per voxel
    std::vector<std::uint8_t> occupancy;  // ceil(G^3 / 8) bytes, LSB first
    bool empty_view = false;  // a silhouette was empty; grid is all clear

    VoxelGrid() = default;
    VoxelGrid(int g, double voxel_pitch);

    std::size_t bit_index(int ix, int iy, int iz) const {
        return (static_cast<std::size_t>(iz) * resolution + iy) * resolution + ix;
    }
    bool get(int ix, int iy, int iz) const {
        const std::size_t b = bit_index(ix, iy, iz);
        return (occupancy[b >> 3] >> (b & 7)) & 1;
    }
    void set(int ix, int iy, int iz, bool v) {
        const std::size_t b = bit_index(ix, iy, iz);
        if (v)
            occupancy[b >> 3] |= static_cast<std::uint8_t>(1u << (b & 7));
        else
            occupancy[b >> 3] &= static_cast<std::uint8_t>(~(1u << (b & 7)));
    }
    std::size_t occupied_count() const;
};

/// Threshold maximizing between-class variance on a 256-bin histogram over
/// [min, max]. Throws for a constant image (use a fixed threshold instead).
double otsu_threshold(const Image& image);

/// mask(p) = 1 iff image(p) >= threshold; Otsu when no fixed t is given.
Mask binarize(const Image& image, std::optional<double> fixed_threshold = std::nullopt);

/// Synthetic test solid centered in the cube.
struct SolidShape {
    enum class Kind { Sphere, Box };
    Kind kind = Kind::Sphere;
    double radius = 0.0;        // sphere
    double a = 0.0, b = 0.0, c = 0.0;  // box full extents (x, y, c vertical)

    static SolidShape sphere(double r);
    static SolidShape box(double a, double b, double c);
};

/// Orthographic turntable projection: at view angle theta the horizontal
/// image axis reads u = x cos(theta) + y sin(theta), the vertical axis reads z.
/// The image spans [-extent/2, extent/2] in both u and z.

/// Exact analytic silhouettes of the shape at each angle, rasterized at
/// pixel centers on an n x n grid.
SilhouetteSet synth_silhouettes(const SolidShape& shape, const std::vector<double>& angles_degrees,
                                int n, double cube_extent);

/// Discrete visual hull: a voxel stays occupied iff its center projects onto
/// a silhouette pixel in every view. Projections outside the image count as
/// background.
VoxelGrid carve(const SilhouetteSet& silhouettes, int resolution, double cube_extent);

/// Raw format: 16-byte header (magic "BWVX", u32 G, f64 pitch, little-endian)
/// followed by the packed occupancy bits.
void export_voxels_raw(const VoxelGrid& grid, const std::string& path);
VoxelGrid import_voxels_raw(const std::string& path);

/// One cube mesh per surface voxel (occupied with an empty or out-of-grid
/// 6-neighbor). Returns the surface voxel count.
std::size_t export_voxels_obj(const VoxelGrid& grid, const std::string& path);

}  // namespace biwave
