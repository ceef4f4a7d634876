#include "biwave/carve.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace biwave {

void SilhouetteSet::validate() const {
    if (views.empty()) throw std::invalid_argument("silhouettes: need >= 1 view");
    double prev = -1.0;
    for (const View& v : views) {
        if (v.angle_degrees < 0.0 || v.angle_degrees >= 360.0 || v.angle_degrees <= prev)
            throw std::invalid_argument("silhouettes: angles must be strictly increasing in [0, 360)");
        if (v.mask.n != n) throw std::invalid_argument("silhouettes: mask size mismatch");
        prev = v.angle_degrees;
    }
}

VoxelGrid::VoxelGrid(int g, double voxel_pitch) : resolution(g), pitch(voxel_pitch) {
    if (g < 1) throw std::invalid_argument("voxel grid: resolution must be >= 1");
    if (!(voxel_pitch > 0.0)) throw std::invalid_argument("voxel grid: pitch must be > 0");
    const std::size_t bits = static_cast<std::size_t>(g) * g * g;
    occupancy.assign((bits + 7) / 8, 0);
}

std::size_t VoxelGrid::occupied_count() const {
    std::size_t count = 0;
    for (std::uint8_t byte : occupancy) count += static_cast<std::size_t>(std::popcount(byte));
    return count;
}

double otsu_threshold(const Image& image) {
    const auto [lo_it, hi_it] = std::minmax_element(image.values.begin(), image.values.end());
    const double lo = *lo_it, hi = *hi_it;
    if (!(hi > lo)) throw std::invalid_argument("otsu: constant image, use a fixed threshold");

    constexpr int kBins = 256;
    std::vector<std::size_t> hist(kBins, 0);
    const double scale = kBins / (hi - lo);
    for (double v : image.values) {
        int bin = static_cast<int>((v - lo) * scale);
        hist[static_cast<std::size_t>(std::clamp(bin, 0, kBins - 1))]++;
    }

    const double total = static_cast<double>(image.pixel_count());
    double sum_all = 0.0;
    for (int i = 0; i < kBins; ++i) sum_all += i * static_cast<double>(hist[static_cast<std::size_t>(i)]);

    double best_var = -1.0;
    int best_k = 0;
    double w0 = 0.0, sum0 = 0.0;
    for (int k = 0; k < kBins - 1; ++k) {
        w0 += static_cast<double>(hist[static_cast<std::size_t>(k)]);
        sum0 += k * static_cast<double>(hist[static_cast<std::size_t>(k)]);
        const double w1 = total - w0;
        if (w0 == 0.0 || w1 == 0.0) continue;
        const double mu0 = sum0 / w0, mu1 = (sum_all - sum0) / w1;
        const double var = w0 * w1 * (mu0 - mu1) * (mu0 - mu1);
        if (var > best_var) {
            best_var = var;
            best_k = k;
        }
    }
    return lo + (best_k + 1) * (hi - lo) / kBins;
}

Mask binarize(const Image& image, std::optional<double> fixed_threshold) {
    if (image.n < 1) throw std::invalid_argument("binarize: empty image");
    const double t = fixed_threshold ? *fixed_threshold : otsu_threshold(image);
    Mask m(image.n);
    for (std::size_t i = 0; i < image.pixel_count(); ++i) m.bits[i] = image.values[i] >= t ? 1 : 0;
    return m;
}

SolidShape SolidShape::sphere(double r) {
    SolidShape s;
    s.kind = Kind::Sphere;
    s.radius = r;
    return s;
}

SolidShape SolidShape::box(double a, double b, double c) {
    SolidShape s;
    s.kind = Kind::Box;
    s.a = a;
    s.b = b;
    s.c = c;
    return s;
}

SilhouetteSet synth_silhouettes(const SolidShape& shape, const std::vector<double>& angles_degrees,
                                int n, double cube_extent) {
    if (n < 1) throw std::invalid_argument("synth_silhouettes: n must be >= 1");
    const double half = cube_extent / 2.0;
    if (shape.kind == SolidShape::Kind::Sphere) {
        if (!(shape.radius > 0.0) || shape.radius > half)
            throw std::invalid_argument("synth_silhouettes: sphere exceeds cube extent");
    } else {
        if (std::hypot(shape.a, shape.b) > cube_extent || shape.c > cube_extent || shape.a <= 0.0 ||
            shape.b <= 0.0 || shape.c <= 0.0)
            throw std::invalid_argument("synth_silhouettes: box exceeds cube extent");
    }

    SilhouetteSet set;
    set.n = n;
    for (double deg : angles_degrees) {
        const double rad = deg * std::numbers::pi / 180.0;
        SilhouetteSet::View view;
        view.angle_degrees = deg;
        view.mask = Mask(n);
        double hu = 0.0, hv = 0.0;
        if (shape.kind == SolidShape::Kind::Box) {
            hu = (shape.a * std::abs(std::cos(rad)) + shape.b * std::abs(std::sin(rad))) / 2.0;
            hv = shape.c / 2.0;
        }
        for (int row = 0; row < n; ++row) {
            const double v = (0.5 - (row + 0.5) / n) * cube_extent;
            for (int col = 0; col < n; ++col) {
                const double u = ((col + 0.5) / n - 0.5) * cube_extent;
                bool inside;
                if (shape.kind == SolidShape::Kind::Sphere)
                    inside = u * u + v * v <= shape.radius * shape.radius;
                else
                    inside = std::abs(u) <= hu && std::abs(v) <= hv;
                view.mask.at(row, col) = inside ? 1 : 0;
            }
        }
        set.views.push_back(std::move(view));
    }
    set.validate();
    return set;
}

VoxelGrid carve(const SilhouetteSet& silhouettes, int resolution, double cube_extent) {
    silhouettes.validate();
    if (!(cube_extent > 0.0)) throw std::invalid_argument("carve: extent must be > 0");
    VoxelGrid grid(resolution, cube_extent / resolution);

    for (const SilhouetteSet::View& v : silhouettes.views) {
        if (v.mask.popcount() == 0) {
            grid.empty_view = true;
            return grid;  // all clear
        }
    }

    struct ViewTrig {
        double c, s;
        const Mask* mask;
    };
    std::vector<ViewTrig> trig;
    trig.reserve(silhouettes.views.size());
    for (const SilhouetteSet::View& v : silhouettes.views) {
        const double rad = v.angle_degrees * std::numbers::pi / 180.0;
        trig.push_back({std::cos(rad), std::sin(rad), &v.mask});
    }

    const int g = resolution;
    const int n = silhouettes.n;
    const double pitch = grid.pitch;
    const double half = cube_extent / 2.0;

    auto carve_slab = [&](int z0, int z1) {
        for (int iz = z0; iz < z1; ++iz) {
            const double cz = (iz + 0.5) * pitch - half;
            const int row = static_cast<int>(std::floor((0.5 - cz / cube_extent) * n));
            const bool row_ok = row >= 0 && row < n;
            for (int iy = 0; iy < g; ++iy) {
                const double cy = (iy + 0.5) * pitch - half;
                for (int ix = 0; ix < g; ++ix) {
                    if (!row_ok) continue;
                    const double cx = (ix + 0.5) * pitch - half;
                    bool occupied = true;
                    for (const ViewTrig& vt : trig) {
                        const double u = cx * vt.c + cy * vt.s;
                        const int col = static_cast<int>(std::floor((u / cube_extent + 0.5) * n));
                        if (col < 0 || col >= n || !vt.mask->at(row, col)) {
                            occupied = false;
                            break;
                        }
                    }
                    if (occupied) grid.set(ix, iy, iz, true);
                }
            }
        }
    };

    // Slabs touch disjoint occupancy bytes only when the per-slab bit count is
    // a multiple of 8; G*G is, for G >= 4 even. Fall back to one thread otherwise.
    const std::size_t per_slab_bits = static_cast<std::size_t>(g) * g;
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0 || per_slab_bits % 8 != 0 || g < 32) {
        carve_slab(0, g);
        return grid;
    }
    const int workers = static_cast<int>(std::min<unsigned>(hw, 16));
    std::vector<std::thread> threads;
    for (int w = 0; w < workers; ++w) {
        const int z0 = static_cast<int>(static_cast<std::int64_t>(g) * w / workers);
        const int z1 = static_cast<int>(static_cast<std::int64_t>(g) * (w + 1) / workers);
        threads.emplace_back(carve_slab, z0, z1);
    }
    for (std::thread& t : threads) t.join();
    return grid;
}

namespace {

void put_u32_le(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f64_le(std::string& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
}

}  // namespace

void export_voxels_raw(const VoxelGrid& grid, const std::string& path) {
    std::string header = "BWVX";
    put_u32_le(header, static_cast<std::uint32_t>(grid.resolution));
    put_f64_le(header, grid.pitch);

    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("export_voxels_raw: cannot open " + path);
    f.write(header.data(), static_cast<std::streamsize>(header.size()));
    f.write(reinterpret_cast<const char*>(grid.occupancy.data()),
            static_cast<std::streamsize>(grid.occupancy.size()));
    if (!f) throw std::runtime_error("export_voxels_raw: write failed for " + path);
}

VoxelGrid import_voxels_raw(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("import_voxels_raw: cannot open " + path);
    char header[16];
    f.read(header, 16);
    if (!f || std::memcmp(header, "BWVX", 4) != 0)
        throw std::runtime_error("import_voxels_raw: bad header in " + path);

    std::uint32_t g = 0;
    for (int i = 0; i < 4; ++i) g |= static_cast<std::uint32_t>(static_cast<unsigned char>(header[4 + i])) << (8 * i);
    std::uint64_t pbits = 0;
    for (int i = 0; i < 8; ++i) pbits |= static_cast<std::uint64_t>(static_cast<unsigned char>(header[8 + i])) << (8 * i);
    double pitch;
    std::memcpy(&pitch, &pbits, 8);

    VoxelGrid grid(static_cast<int>(g), pitch);
    f.read(reinterpret_cast<char*>(grid.occupancy.data()), static_cast<std::streamsize>(grid.occupancy.size()));
    if (!f) throw std::runtime_error("import_voxels_raw: truncated payload in " + path);
    return grid;
}

std::size_t export_voxels_obj(const VoxelGrid& grid, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("export_voxels_obj: cannot open " + path);

    const int g = grid.resolution;
    auto occupied = [&](int ix, int iy, int iz) {
        if (ix < 0 || iy < 0 || iz < 0 || ix >= g || iy >= g || iz >= g) return false;
        return grid.get(ix, iy, iz);
    };
    // Triangulated unit cube, CCW seen from outside.
    static const int kCorner[8][3] = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0},
                                      {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}};
    static const int kTri[12][3] = {{0, 2, 1}, {0, 3, 2}, {4, 5, 6}, {4, 6, 7},
                                    {0, 1, 5}, {0, 5, 4}, {2, 3, 7}, {2, 7, 6},
                                    {1, 2, 6}, {1, 6, 5}, {3, 0, 4}, {3, 4, 7}};

    std::size_t surface = 0;
    std::size_t base = 1;  // OBJ indices are 1-based
    char line[128];
    for (int iz = 0; iz < g; ++iz)
        for (int iy = 0; iy < g; ++iy)
            for (int ix = 0; ix < g; ++ix) {
                if (!occupied(ix, iy, iz)) continue;
                if (occupied(ix - 1, iy, iz) && occupied(ix + 1, iy, iz) && occupied(ix, iy - 1, iz) &&
                    occupied(ix, iy + 1, iz) && occupied(ix, iy, iz - 1) && occupied(ix, iy, iz + 1))
                    continue;
                ++surface;
                for (const auto& c : kCorner) {
                    std::snprintf(line, sizeof line, "v %.9g %.9g %.9g\n", (ix + c[0]) * grid.pitch,
                                  (iy + c[1]) * grid.pitch, (iz + c[2]) * grid.pitch);
                    f << line;
                }
                for (const auto& t : kTri) {
                    std::snprintf(line, sizeof line, "f %zu %zu %zu\n", base + t[0], base + t[1], base + t[2]);
                    f << line;
                }
                base += 8;
            }
    if (!f) throw std::runtime_error("export_voxels_obj: write failed for " + path);
    return surface;
}

}  // namespace biwave
