#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace biwave {

/// Square grid of doubles, row-major.
struct Image {
    int n = 0;
    std::vector<double> values;

    Image() = default;
    Image(int side, double fill = 0.0) : n(side), values(static_cast<std::size_t>(side) * side, fill) {
        if (side < 1) throw std::invalid_argument("Image: side must be >= 1");
    }

    double& at(int row, int col) { return values[static_cast<std::size_t>(row) * n + col]; }
    double at(int row, int col) const { return values[static_cast<std::size_t>(row) * n + col]; }
    std::size_t pixel_count() const { return values.size(); }
};

/// Square 0/1 grid, row-major.
struct Mask {
    int n = 0;
    std::vector<std::uint8_t> bits;

    Mask() = default;
    Mask(int side, std::uint8_t fill = 0) : n(side), bits(static_cast<std::size_t>(side) * side, fill) {
        if (side < 1) throw std::invalid_argument("Mask: side must be >= 1");
    }

    std::uint8_t& at(int row, int col) { return bits[static_cast<std::size_t>(row) * n + col]; }
    std::uint8_t at(int row, int col) const { return bits[static_cast<std::size_t>(row) * n + col]; }
    std::size_t popcount() const;
};

/// Nonnegative reflectance grid with values in [0, 1].
using Scene = Image;

/// Throws if the scene violates the reflectance contract.
void validate_scene(const Scene& scene);

inline bool is_power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }
int ilog2(int v);

}  // namespace biwave
