#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "biwave/image.hpp"
#include "biwave/optics.hpp"
#include "biwave/patterns.hpp"

namespace biwave {

/// SSIM configuration. Windows slide over every position where the window
/// fits entirely inside the images.
struct SsimParams {
    enum class Window { Gaussian, Uniform };

    double dynamic_range = 1.0;  // L
    Window window = Window::Gaussian;
    int window_size = 11;   // Gaussian default 11x11, sigma 1.5
    double sigma = 1.5;     // Gaussian only

    double c1() const { return 0.01 * dynamic_range * 0.01 * dynamic_range; }
    double c2() const { return 0.03 * dynamic_range * 0.03 * dynamic_range; }

    static SsimParams uniform(int k, double dynamic_range = 1.0);
};

/// Mean local structural similarity of x and y; symmetric, in [-1, 1].
double ssim(const Image& x, const Image& y, const SsimParams& p = {});

/// 1 - mean(|image|) over background / mean(image) over foreground,
/// clamped to [0, 1]. truth_mask: 1 = foreground.
double contrast(const Image& image, const Mask& truth_mask);

struct SweepRow {
    PatternFamily family = PatternFamily::RowMajorM;
    int bits = 1;
    double ssim = 0.0;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::string to_csv() const;  // header family,bits,ssim
};

/// Acquire/reconstruct the scene for each (family, bits) pair with equal
/// pattern budgets and score SSIM against the scene itself
/// (L = ground-truth value range). Per-row seeds derive from (seed, family, bits).
SweepResult dynamic_range_sweep(const Scene& scene, const std::vector<PatternFamily>& families,
                                const std::vector<int>& bits_list, double noise_sigma = 0.0,
                                std::uint64_t seed = 0, const SsimParams& ssim_params = {});

}  // namespace biwave
