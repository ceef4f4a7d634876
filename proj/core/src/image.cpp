#include "biwave/image.hpp"

#include <algorithm>

namespace biwave {

std::size_t Mask::popcount() const {
    return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), std::uint8_t{1}));
}

void validate_scene(const Scene& scene) {
    if (scene.n < 1) throw std::invalid_argument("scene: side must be >= 1");
    for (double v : scene.values) {
        if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("scene: reflectance outside [0, 1]");
    }
}

int ilog2(int v) {
    int r = 0;
    while ((1 << (r + 1)) <= v) ++r;
    return r;
}

}  // namespace biwave
