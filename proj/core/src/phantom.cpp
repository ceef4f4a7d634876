#include "biwave/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "biwave/rng.hpp"

namespace biwave {

Phantom::Kind phantom_kind_from_name(const std::string& name) {
    if (name == "glyphs") return Phantom::Kind::Glyphs;
    if (name == "disk") return Phantom::Kind::Disk;
    if (name == "bars") return Phantom::Kind::Bars;
    if (name == "random") return Phantom::Kind::RandomBinary;
    throw std::invalid_argument("unknown phantom kind: " + name);
}

namespace {

constexpr double kDutyTolerance = 0.10;  // relative

// Four 5x7 block letterforms, row-major bit rows (MSB = left column).
constexpr int kGlyphRows = 7, kGlyphCols = 5;
constexpr std::uint8_t kGlyphs[4][kGlyphRows] = {
    // H
    {0b10001, 0b10001, 0b10001, 0b11111, 0b10001, 0b10001, 0b10001},
    // A
    {0b01110, 0b10001, 0b10001, 0b11111, 0b10001, 0b10001, 0b10001},
    // R
    {0b11110, 0b10001, 0b10001, 0b11110, 0b10100, 0b10010, 0b10001},
    // W
    {0b10001, 0b10001, 0b10001, 0b10101, 0b10101, 0b10101, 0b01010},
};

bool glyph_bit(int g, int row, int col) {
    return (kGlyphs[g][row] >> (kGlyphCols - 1 - col)) & 1;
}

void check_duty(std::size_t ink, double requested, int n) {
    const double target = requested * n * n;
    if (target < 1.0 || std::abs(static_cast<double>(ink) - target) > kDutyTolerance * target)
        throw std::invalid_argument("phantom: requested duty ratio unachievable at this resolution");
}

Scene render_glyphs(const Phantom& p) {
    const double target = p.duty_ratio * p.n * p.n;
    std::size_t cells = 0;
    for (int g = 0; g < 4; ++g)
        for (int r = 0; r < kGlyphRows; ++r)
            for (int c = 0; c < kGlyphCols; ++c) cells += glyph_bit(g, r, c);

    auto render = [&](double scale, Scene* out) -> std::size_t {
        const int gw = static_cast<int>(std::lround(kGlyphCols * scale));
        const int gh = static_cast<int>(std::lround(kGlyphRows * scale));
        const int gap = std::max(1, static_cast<int>(std::lround(scale)));
        const int width = 4 * gw + 3 * gap;
        if (gw < 1 || gh < 1 || width > p.n || gh > p.n) return 0;
        const int x_start = (p.n - width) / 2;
        const int y_start = (p.n - gh) / 2;
        std::size_t ink = 0;
        for (int g = 0; g < 4; ++g) {
            const int x0 = x_start + g * (gw + gap);
            for (int row = 0; row < gh; ++row) {
                const int cr = std::min(kGlyphRows - 1, static_cast<int>(row / scale));
                for (int col = 0; col < gw; ++col) {
                    const int cc = std::min(kGlyphCols - 1, static_cast<int>(col / scale));
                    if (!glyph_bit(g, cr, cc)) continue;
                    ++ink;
                    if (out) out->at(y_start + row, x0 + col) = 1.0;
                }
            }
        }
        return ink;
    };

    // Nearest-neighbor rasterization makes the ink count jump at integer cell
    // boundaries; scan scales around the analytic guess and keep the closest.
    const double s0 = std::sqrt(target / static_cast<double>(cells));
    double best_scale = s0;
    double best_err = std::numeric_limits<double>::max();
    for (int i = -48; i <= 48; ++i) {
        const double s = s0 * (1.0 + 0.005 * i);
        if (s <= 0.0) continue;
        const std::size_t ink = render(s, nullptr);
        const double err = std::abs(static_cast<double>(ink) - target);
        if (ink > 0 && err < best_err) {
            best_err = err;
            best_scale = s;
        }
    }

    Scene scene(p.n);
    const std::size_t ink = render(best_scale, &scene);
    check_duty(ink, p.duty_ratio, p.n);
    return scene;
}

Scene render_disk(const Phantom& p) {
    const double target = p.duty_ratio * p.n * p.n;
    const double r0 = p.n * std::sqrt(p.duty_ratio / std::numbers::pi);
    if (2.0 * r0 > p.n) throw std::invalid_argument("phantom: disk duty ratio exceeds inscribed circle");
    const double cx = p.n / 2.0, cy = p.n / 2.0;

    auto count = [&](double r, Scene* out) -> std::size_t {
        std::size_t ink = 0;
        for (int row = 0; row < p.n; ++row)
            for (int col = 0; col < p.n; ++col) {
                const double dx = col + 0.5 - cx, dy = row + 0.5 - cy;
                if (dx * dx + dy * dy <= r * r) {
                    ++ink;
                    if (out) out->at(row, col) = 1.0;
                }
            }
        return ink;
    };

    // At coarse grids the pixel count jumps as the radius sweeps past pixel
    // centers; scan around the analytic radius and keep the closest count.
    double best_r = r0;
    double best_err = std::numeric_limits<double>::max();
    for (int i = -48; i <= 48; ++i) {
        const double r = r0 * (1.0 + 0.005 * i);
        if (r <= 0.0 || 2.0 * r > p.n) continue;
        const std::size_t ink = count(r, nullptr);
        const double err = std::abs(static_cast<double>(ink) - target);
        if (ink > 0 && err < best_err) {
            best_err = err;
            best_r = r;
        }
    }

    Scene scene(p.n);
    const std::size_t ink = count(best_r, &scene);
    check_duty(ink, p.duty_ratio, p.n);
    return scene;
}

Scene render_bars(const Phantom& p) {
    constexpr int kBars = 4;
    const double target = p.duty_ratio * p.n * p.n;
    const int width = static_cast<int>(std::lround(target / (kBars * p.n)));
    if (width < 1 || kBars * width > p.n)
        throw std::invalid_argument("phantom: bar duty ratio unachievable at this resolution");
    const int spacing = p.n / kBars;
    Scene scene(p.n);
    std::size_t ink = 0;
    for (int b = 0; b < kBars; ++b) {
        const int x0 = b * spacing + (spacing - width) / 2;
        for (int row = 0; row < p.n; ++row)
            for (int col = x0; col < x0 + width; ++col) {
                scene.at(row, col) = 1.0;
                ++ink;
            }
    }
    check_duty(ink, p.duty_ratio, p.n);
    return scene;
}

Scene render_random(const Phantom& p) {
    const std::size_t total = static_cast<std::size_t>(p.n) * p.n;
    const auto target = static_cast<std::size_t>(std::lround(p.duty_ratio * static_cast<double>(total)));
    if (target < 1 || target > total)
        throw std::invalid_argument("phantom: random duty ratio unachievable at this resolution");

    // Partial Fisher-Yates: exactly `target` foreground pixels.
    std::vector<std::uint32_t> idx(total);
    for (std::size_t i = 0; i < total; ++i) idx[i] = static_cast<std::uint32_t>(i);
    for (std::size_t i = 0; i < target; ++i) {
        const std::size_t r = i + mix_key(p.seed, i) % (total - i);
        std::swap(idx[i], idx[r]);
    }
    Scene scene(p.n);
    for (std::size_t i = 0; i < target; ++i) scene.values[idx[i]] = 1.0;
    check_duty(target, p.duty_ratio, p.n);
    return scene;
}

}  // namespace

Scene generate_phantom(const Phantom& p) {
    if (p.n < 2) throw std::invalid_argument("phantom: n must be >= 2");
    if (!(p.duty_ratio > 0.0 && p.duty_ratio < 1.0))
        throw std::invalid_argument("phantom: duty ratio must be in (0, 1)");
    switch (p.kind) {
        case Phantom::Kind::Glyphs: return render_glyphs(p);
        case Phantom::Kind::Disk: return render_disk(p);
        case Phantom::Kind::Bars: return render_bars(p);
        case Phantom::Kind::RandomBinary: return render_random(p);
    }
    throw std::logic_error("generate_phantom: bad enum");
}

Mask scene_mask(const Scene& scene) {
    Mask m(scene.n);
    for (std::size_t i = 0; i < scene.pixel_count(); ++i) m.bits[i] = scene.values[i] > 0.5 ? 1 : 0;
    return m;
}

}  // namespace biwave
