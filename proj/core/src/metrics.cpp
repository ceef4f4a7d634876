#include "biwave/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "biwave/recon.hpp"
#include "biwave/rng.hpp"

namespace biwave {

SsimParams SsimParams::uniform(int k, double dynamic_range) {
    SsimParams p;
    p.window = Window::Uniform;
    p.window_size = k;
    p.dynamic_range = dynamic_range;
    return p;
}

namespace {

std::vector<double> window_taps(const SsimParams& p) {
    const int k = p.window_size;
    std::vector<double> taps(static_cast<std::size_t>(k));
    if (p.window == SsimParams::Window::Uniform) {
        std::fill(taps.begin(), taps.end(), 1.0 / k);
        return taps;
    }
    const double c = (k - 1) / 2.0;
    double sum = 0.0;
    for (int i = 0; i < k; ++i) {
        taps[static_cast<std::size_t>(i)] = std::exp(-(i - c) * (i - c) / (2.0 * p.sigma * p.sigma));
        sum += taps[static_cast<std::size_t>(i)];
    }
    for (double& t : taps) t /= sum;
    return taps;
}

// Separable valid convolution of an n x n product grid with the window taps.
std::vector<double> local_mean(const std::vector<double>& grid, int n, const std::vector<double>& taps) {
    const int k = static_cast<int>(taps.size());
    const int m = n - k + 1;
    std::vector<double> rows(static_cast<std::size_t>(n) * m);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < m; ++c) {
            double acc = 0.0;
            for (int t = 0; t < k; ++t)
                acc += taps[static_cast<std::size_t>(t)] * grid[static_cast<std::size_t>(r) * n + c + t];
            rows[static_cast<std::size_t>(r) * m + c] = acc;
        }
    std::vector<double> out(static_cast<std::size_t>(m) * m);
    for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c) {
            double acc = 0.0;
            for (int t = 0; t < k; ++t)
                acc += taps[static_cast<std::size_t>(t)] * rows[static_cast<std::size_t>(r + t) * m + c];
            out[static_cast<std::size_t>(r) * m + c] = acc;
        }
    return out;
}

const char* sweep_label(PatternFamily f) {
    switch (f) {
        case PatternFamily::RowMajorM: return "biwave";
        case PatternFamily::QuadtreeQ: return "quadtree";
        case PatternFamily::Hadamard: return "hcgi";
        case PatternFamily::RandomSpeckle: return "rcgi";
    }
    return "?";
}

}  // namespace

double ssim(const Image& x, const Image& y, const SsimParams& p) {
    if (x.n != y.n) throw std::invalid_argument("ssim: dimension mismatch");
    if (!(p.dynamic_range > 0.0)) throw std::invalid_argument("ssim: dynamic range must be > 0");
    if (p.window_size < 1 || p.window_size > x.n)
        throw std::invalid_argument("ssim: window must fit inside the images");

    const int n = x.n;
    const std::size_t total = x.pixel_count();
    std::vector<double> xx(total), yy(total), xy(total);
    for (std::size_t i = 0; i < total; ++i) {
        xx[i] = x.values[i] * x.values[i];
        yy[i] = y.values[i] * y.values[i];
        xy[i] = x.values[i] * y.values[i];
    }

    const std::vector<double> taps = window_taps(p);
    const std::vector<double> mx = local_mean(x.values, n, taps);
    const std::vector<double> my = local_mean(y.values, n, taps);
    const std::vector<double> mxx = local_mean(xx, n, taps);
    const std::vector<double> myy = local_mean(yy, n, taps);
    const std::vector<double> mxy = local_mean(xy, n, taps);

    const double c1 = p.c1(), c2 = p.c2();
    double acc = 0.0;
    for (std::size_t i = 0; i < mx.size(); ++i) {
        const double vx = mxx[i] - mx[i] * mx[i];
        const double vy = myy[i] - my[i] * my[i];
        const double cov = mxy[i] - mx[i] * my[i];
        acc += (2.0 * mx[i] * my[i] + c1) * (2.0 * cov + c2) /
               ((mx[i] * mx[i] + my[i] * my[i] + c1) * (vx + vy + c2));
    }
    return acc / static_cast<double>(mx.size());
}

double contrast(const Image& image, const Mask& truth_mask) {
    if (image.n != truth_mask.n) throw std::invalid_argument("contrast: dimension mismatch");
    double fg = 0.0, bg = 0.0;
    std::size_t nfg = 0, nbg = 0;
    for (std::size_t i = 0; i < image.pixel_count(); ++i) {
        if (truth_mask.bits[i]) {
            fg += image.values[i];
            ++nfg;
        } else {
            bg += std::abs(image.values[i]);
            ++nbg;
        }
    }
    if (nfg == 0 || nbg == 0) throw std::invalid_argument("contrast: mask needs both classes");
    fg /= static_cast<double>(nfg);
    bg /= static_cast<double>(nbg);
    if (!(fg > 0.0)) throw std::invalid_argument("contrast: nonpositive foreground mean");
    return std::clamp(1.0 - bg / fg, 0.0, 1.0);
}

std::string SweepResult::to_csv() const {
    std::ostringstream os;
    os << "family,bits,ssim\n";
    for (const SweepRow& r : rows) {
        os << sweep_label(r.family) << ',' << r.bits << ',';
        os.precision(9);
        os << r.ssim << '\n';
    }
    return os.str();
}

SweepResult dynamic_range_sweep(const Scene& scene, const std::vector<PatternFamily>& families,
                                const std::vector<int>& bits_list, double noise_sigma, std::uint64_t seed,
                                const SsimParams& ssim_params) {
    validate_scene(scene);
    const auto [lo, hi] = std::minmax_element(scene.values.begin(), scene.values.end());
    SsimParams sp = ssim_params;
    sp.dynamic_range = (*hi > *lo) ? *hi - *lo : 1.0;

    const double full_scale = calibrate_full_scale(scene);
    SweepResult result;
    for (PatternFamily family : families) {
        const Basis basis = make_basis(family, scene.n, mix_key(seed, static_cast<std::uint64_t>(family)));
        for (int bits : bits_list) {
            DetectorModel d;
            d.bits = bits;
            d.full_scale = full_scale;
            d.noise_sigma = noise_sigma;
            d.rng_seed = mix_key(seed, static_cast<std::uint64_t>(family), static_cast<std::uint64_t>(bits));
            const AcquisitionLog log = acquire_full(scene, basis, d);
            const ReconstructedImage rec = reconstruct(log, basis);
            result.rows.push_back({family, bits, ssim(rec.image, scene, sp)});
        }
    }
    return result;
}

}  // namespace biwave
