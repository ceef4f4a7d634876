#include "biwave/carve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <vector>

#include "biwave/rng.hpp"
#include "doctest.h"

using namespace biwave;

namespace {

std::vector<double> turntable_angles(int views, double step) {
    std::vector<double> a;
    for (int i = 0; i < views; ++i) a.push_back(i * step);
    return a;
}

std::string temp_path(const char* name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

double carved_volume(const VoxelGrid& g) {
    return static_cast<double>(g.occupied_count()) * g.pitch * g.pitch * g.pitch;
}

}  // namespace

TEST_CASE("binarize with a fixed threshold reproduces a binary image") {
    Image img(4);
    img.at(0, 0) = 1.0;
    img.at(3, 2) = 1.0;
    Mask m = binarize(img, 0.5);
    for (std::size_t i = 0; i < 16; ++i) CHECK(static_cast<double>(m.bits[i]) == img.values[i]);
}

TEST_CASE("otsu threshold separates a two-valued image") {
    Image img(4, 0.1);
    img.at(1, 1) = 0.9;
    img.at(2, 2) = 0.9;
    const double t = otsu_threshold(img);
    CHECK(t > 0.1);
    CHECK(t <= 0.9);
    Mask m = binarize(img);
    CHECK(m.popcount() == 2);
    CHECK(m.at(1, 1) == 1);
    CHECK(m.at(2, 2) == 1);

    CHECK_THROWS_AS(otsu_threshold(Image(4, 0.5)), std::invalid_argument);
    CHECK_THROWS_AS(binarize(Image(4, 0.5)), std::invalid_argument);
}

TEST_CASE("silhouette set validation") {
    SilhouetteSet s;
    s.n = 4;
    s.views.push_back({0.0, Mask(4, 1)});
    s.views.push_back({90.0, Mask(4, 1)});
    CHECK_NOTHROW(s.validate());

    s.views.push_back({90.0, Mask(4, 1)});  // not strictly increasing
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s.views.pop_back();
    s.views.push_back({360.0, Mask(4, 1)});  // out of range
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s.views.pop_back();
    s.views.push_back({180.0, Mask(8, 1)});  // size mismatch
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}

TEST_CASE("sphere silhouettes are the same centered disk from every angle") {
    const double extent = 2.0, r = 0.5;
    SilhouetteSet s = synth_silhouettes(SolidShape::sphere(r), turntable_angles(8, 45.0), 64, extent);
    REQUIRE(s.views.size() == 8);
    const std::size_t area0 = s.views[0].mask.popcount();
    const double expected = std::numbers::pi * (r * 64 / extent) * (r * 64 / extent);
    CHECK(std::abs(static_cast<double>(area0) - expected) / expected < 0.05);
    for (const auto& v : s.views) CHECK(v.mask.bits == s.views[0].mask.bits);
}

TEST_CASE("box silhouettes match the analytic footprint") {
    const double extent = 2.0;
    const SolidShape box = SolidShape::box(1.0, 0.6, 0.8);
    const int n = 200;

    SilhouetteSet s = synth_silhouettes(box, {0.0, 45.0}, n, extent);
    auto width_px = [&](const Mask& m) {
        int lo = n, hi = -1;
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c)
                if (m.at(r, c)) {
                    lo = std::min(lo, c);
                    hi = std::max(hi, c);
                }
        return hi - lo + 1;
    };
    auto height_px = [&](const Mask& m) {
        int lo = n, hi = -1;
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c)
                if (m.at(r, c)) {
                    lo = std::min(lo, r);
                    hi = std::max(hi, r);
                }
        return hi - lo + 1;
    };

    // 0 degrees: a x c rectangle
    CHECK(std::abs(width_px(s.views[0].mask) - 1.0 * n / extent) <= 2.0);
    CHECK(std::abs(height_px(s.views[0].mask) - 0.8 * n / extent) <= 2.0);
    // 45 degrees: footprint width (a + b) / sqrt(2)
    const double w45 = (1.0 + 0.6) / std::sqrt(2.0) * n / extent;
    CHECK(std::abs(width_px(s.views[1].mask) - w45) <= 2.0);

    CHECK_THROWS_AS(synth_silhouettes(SolidShape::sphere(1.5), {0.0}, 16, 2.0),
                    std::invalid_argument);
}

TEST_CASE("all-full silhouettes carve nothing away") {
    SilhouetteSet s;
    s.n = 8;
    s.views.push_back({0.0, Mask(8, 1)});
    s.views.push_back({90.0, Mask(8, 1)});
    VoxelGrid g = carve(s, 16, 1.0);
    CHECK(g.occupied_count() == 16u * 16 * 16);
    CHECK(!g.empty_view);
}

TEST_CASE("an empty silhouette clears the grid and is flagged") {
    SilhouetteSet s;
    s.n = 8;
    s.views.push_back({0.0, Mask(8, 1)});
    s.views.push_back({90.0, Mask(8, 0)});
    VoxelGrid g = carve(s, 16, 1.0);
    CHECK(g.occupied_count() == 0);
    CHECK(g.empty_view);
}

TEST_CASE("a single view extrudes the mask along the depth axis") {
    Mask m(8);
    m.at(2, 3) = 1;
    m.at(5, 6) = 1;
    SilhouetteSet s;
    s.n = 8;
    s.views.push_back({0.0, m});

    VoxelGrid g = carve(s, 8, 1.0);
    // at 0 degrees u = x and v = z; occupancy must be independent of y
    for (int iz = 0; iz < 8; ++iz)
        for (int ix = 0; ix < 8; ++ix) {
            const bool first = g.get(ix, 0, iz);
            for (int iy = 1; iy < 8; ++iy) CHECK(g.get(ix, iy, iz) == first);
        }
    CHECK(g.occupied_count() == 2u * 8);
}

TEST_CASE("adding views only removes voxels and order does not matter") {
    const double extent = 2.0;
    SilhouetteSet all = synth_silhouettes(SolidShape::box(1.0, 0.5, 0.7),
                                          turntable_angles(12, 30.0), 64, extent);

    SilhouetteSet fewer;
    fewer.n = all.n;
    for (std::size_t i = 0; i < 6; ++i) fewer.views.push_back(all.views[i]);

    VoxelGrid gf = carve(fewer, 32, extent);
    VoxelGrid ga = carve(all, 32, extent);
    CHECK(ga.occupied_count() <= gf.occupied_count());
    for (int iz = 0; iz < 32; ++iz)
        for (int iy = 0; iy < 32; ++iy)
            for (int ix = 0; ix < 32; ++ix)
                if (ga.get(ix, iy, iz)) CHECK(gf.get(ix, iy, iz));

    // the hull is a plain intersection: carving view subsets separately and
    // intersecting matches carving them together, so view order cannot matter
    SilhouetteSet second;
    second.n = all.n;
    for (std::size_t i = 6; i < 12; ++i) second.views.push_back(all.views[i]);
    VoxelGrid gs = carve(second, 32, extent);
    for (std::size_t i = 0; i < gs.occupancy.size(); ++i)
        gs.occupancy[i] &= gf.occupancy[i];
    CHECK(gs.occupancy == ga.occupancy);
}

TEST_CASE("the visual hull contains the solid") {
    const double extent = 2.0, r = 0.6;
    const int g = 32;
    SilhouetteSet s = synth_silhouettes(SolidShape::sphere(r), turntable_angles(24, 15.0), 128, extent);
    VoxelGrid vox = carve(s, g, extent);

    const double pitch = extent / g;
    const double margin = pitch * std::sqrt(3.0);
    for (int iz = 0; iz < g; ++iz)
        for (int iy = 0; iy < g; ++iy)
            for (int ix = 0; ix < g; ++ix) {
                const double x = (ix + 0.5) * pitch - extent / 2;
                const double y = (iy + 0.5) * pitch - extent / 2;
                const double z = (iz + 0.5) * pitch - extent / 2;
                if (std::sqrt(x * x + y * y + z * z) <= r - margin) CHECK(vox.get(ix, iy, iz));
            }
}

TEST_CASE("carved sphere volume approaches the analytic value") {
    const double extent = 2.0, r = 0.4;
    SilhouetteSet s = synth_silhouettes(SolidShape::sphere(r), turntable_angles(36, 10.0), 256, extent);
    VoxelGrid g = carve(s, 64, extent);
    const double analytic = 4.0 / 3.0 * std::numbers::pi * r * r * r;
    CHECK(std::abs(carved_volume(g) - analytic) / analytic < 0.10);
}

TEST_CASE("raw voxel files round trip exactly") {
    VoxelGrid g(5, 0.37);
    for (int i = 0; i < 5; ++i) g.set(i, (i * 2) % 5, (i * 3) % 5, true);
    const std::string path = temp_path("biwave_test_vox.raw");
    export_voxels_raw(g, path);
    VoxelGrid back = import_voxels_raw(path);
    CHECK(back.resolution == 5);
    CHECK(back.pitch == 0.37);
    CHECK(back.occupancy == g.occupancy);
    std::remove(path.c_str());
}

TEST_CASE("obj export meshes surface voxels") {
    const std::string path = temp_path("biwave_test_vox.obj");

    VoxelGrid one(1, 1.0);
    one.set(0, 0, 0, true);
    CHECK(export_voxels_obj(one, path) == 1);
    {
        std::FILE* f = std::fopen(path.c_str(), "rb");
        REQUIRE(f);
        std::fseek(f, 0, SEEK_END);
        std::vector<char> buf(static_cast<std::size_t>(std::ftell(f)));
        std::fseek(f, 0, SEEK_SET);
        REQUIRE(std::fread(buf.data(), 1, buf.size(), f) == buf.size());
        std::fclose(f);
        const std::string text(buf.begin(), buf.end());
        std::size_t verts = 0, faces = 0;
        for (std::size_t i = 0; i + 1 < text.size(); ++i) {
            if (text[i] == 'v' && text[i + 1] == ' ' && (i == 0 || text[i - 1] == '\n')) ++verts;
            if (text[i] == 'f' && text[i + 1] == ' ' && (i == 0 || text[i - 1] == '\n')) ++faces;
        }
        CHECK(verts == 8);
        CHECK(faces == 12);
    }

    // 2x2x2 checkerboard: four occupied voxels, all on the surface
    VoxelGrid board(2, 1.0);
    for (int iz = 0; iz < 2; ++iz)
        for (int iy = 0; iy < 2; ++iy)
            for (int ix = 0; ix < 2; ++ix)
                if ((ix + iy + iz) % 2 == 0) board.set(ix, iy, iz, true);
    CHECK(export_voxels_obj(board, path) == 4);

    // fully occupied 3x3x3: the center voxel is interior
    VoxelGrid solid(3, 1.0);
    for (int iz = 0; iz < 3; ++iz)
        for (int iy = 0; iy < 3; ++iy)
            for (int ix = 0; ix < 3; ++ix) solid.set(ix, iy, iz, true);
    CHECK(export_voxels_obj(solid, path) == 26);
    std::remove(path.c_str());
}
