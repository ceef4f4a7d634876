#pragma once

#include <cstdint>
#include <string>

#include "biwave/image.hpp"

namespace biwave {

/// Deterministic binary test scene. duty_ratio = object area / scene area.
struct Phantom {
    enum class Kind { Glyphs, Disk, Bars, RandomBinary };

    Kind kind = Kind::Glyphs;
    double duty_ratio = 0.015;
    int n = 512;
    std::uint64_t seed = 0;
};

Phantom::Kind phantom_kind_from_name(const std::string& name);

/// Renders the phantom. The realized duty ratio is within 10% relative of
/// the request (rasterization granularity); throws when that is unachievable.
Scene generate_phantom(const Phantom& p);

/// Foreground mask of a binary scene (value > 0.5).
Mask scene_mask(const Scene& scene);

}  // namespace biwave
