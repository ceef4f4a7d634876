#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "biwave/config.hpp"
#include "biwave/logio.hpp"
#include "biwave/pgm.hpp"
#include "biwave/phantom.hpp"
#include "biwave/rng.hpp"
#include "doctest.h"

using namespace biwave;

namespace {

std::string temp_path(const char* name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

void write_bytes(const std::string& path, const std::string& bytes) {
    std::ofstream os(path, std::ios::binary);
    os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace

TEST_CASE("8-bit PGM round trip") {
    PgmImage img;
    img.width = 6;
    img.height = 4;
    img.maxval = 255;
    for (int i = 0; i < 24; ++i) img.pixels.push_back(static_cast<std::uint16_t>((i * 37) % 256));

    const std::string path = temp_path("biwave_t8.pgm");
    write_pgm(path, img);
    PgmImage back = read_pgm(path);
    CHECK(back.width == 6);
    CHECK(back.height == 4);
    CHECK(back.maxval == 255);
    CHECK(back.pixels == img.pixels);
    std::remove(path.c_str());
}

TEST_CASE("16-bit PGM round trip uses big-endian payload") {
    PgmImage img;
    img.width = 2;
    img.height = 1;
    img.maxval = 65535;
    img.pixels = {0x0102, 0xfffe};

    const std::string path = temp_path("biwave_t16.pgm");
    write_pgm(path, img);

    std::ifstream is(path, std::ios::binary);
    std::string data((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    REQUIRE(data.size() >= 4);
    CHECK(static_cast<unsigned char>(data[data.size() - 4]) == 0x01);
    CHECK(static_cast<unsigned char>(data[data.size() - 3]) == 0x02);
    CHECK(static_cast<unsigned char>(data[data.size() - 2]) == 0xff);
    CHECK(static_cast<unsigned char>(data[data.size() - 1]) == 0xfe);

    CHECK(read_pgm(path).pixels == img.pixels);
    std::remove(path.c_str());
}

TEST_CASE("PGM header comments are tolerated, malformed input is not") {
    const std::string path = temp_path("biwave_thdr.pgm");
    write_bytes(path, "P5\n# a comment\n2 # trailing\n2\n255\nabcd");
    PgmImage img = read_pgm(path);
    CHECK(img.width == 2);
    CHECK(img.height == 2);
    CHECK(img.pixels[0] == 'a');

    write_bytes(path, "P6\n2 2\n255\nabcd");
    CHECK_THROWS_AS(read_pgm(path), std::runtime_error);
    write_bytes(path, "P5\n2 2\n255\nab");  // truncated
    CHECK_THROWS_AS(read_pgm(path), std::runtime_error);
    write_bytes(path, "P5\n2 2\n70000\nabcd");  // maxval out of range
    CHECK_THROWS_AS(read_pgm(path), std::runtime_error);
    std::remove(path.c_str());
}

TEST_CASE("scene and float-map image round trips") {
    Scene s(8);
    for (std::size_t i = 0; i < 64; ++i) s.values[i] = (i % 5) / 4.0;
    const std::string path = temp_path("biwave_tscene.pgm");
    write_scene_pgm(path, s);
    Scene back = read_scene_pgm(path);
    for (std::size_t i = 0; i < 64; ++i) CHECK(back.values[i] == doctest::Approx(s.values[i]).epsilon(1e-2));

    Image img(8);
    for (std::size_t i = 0; i < 64; ++i) img.values[i] = std::sin(static_cast<double>(i)) * 3.0;
    FloatMapping map = write_image_pgm16(path, img);
    Image rec = read_image_pgm16(path, map);
    for (std::size_t i = 0; i < 64; ++i)
        CHECK(std::abs(rec.values[i] - img.values[i]) <= 6.0 / 65535.0);

    write_raw_f64(path, img);
    Image raw = read_raw_f64(path);
    CHECK(raw.n == 8);
    CHECK(raw.values == img.values);
    std::remove(path.c_str());
}

TEST_CASE("mask PGM round trip") {
    Mask m(4);
    m.at(0, 1) = 1;
    m.at(3, 3) = 1;
    const std::string path = temp_path("biwave_tmask.pgm");
    write_mask_pgm(path, m);
    Mask back = read_mask_pgm(path);
    CHECK(back.bits == m.bits);
    std::remove(path.c_str());
}

TEST_CASE("acquisition log CSV round trip with skipped rows") {
    Scene s(4);
    s.at(1, 2) = 1.0;
    s.at(2, 2) = 0.5;
    Basis b = make_basis(PatternFamily::RowMajorM, 4);
    DetectorModel d;
    d.bits = 12;
    d.full_scale = calibrate_full_scale(s);
    d.noise_sigma = 0.01;
    d.rng_seed = 9;

    AcquisitionLog log = acquire_full(s, b, d);
    log.skipped.push_back(log.records.back().j);
    log.records.pop_back();

    const std::string csv = log_to_csv(log);
    CHECK(csv.rfind("j,i1,i2,b,skipped\n", 0) == 0);
    CHECK(csv.find("15,0,0,0,1\n") != std::string::npos);

    const std::string path = temp_path("biwave_tlog.csv");
    write_log(path, log);
    AcquisitionLog back = read_log(path);
    CHECK(back.family == log.family);
    CHECK(back.n == 4);
    CHECK(back.detector.bits == 12);
    CHECK(back.detector.full_scale == d.full_scale);
    CHECK(back.detector.noise_sigma == d.noise_sigma);
    CHECK(back.skipped == log.skipped);
    REQUIRE(back.records.size() == log.records.size());
    for (std::size_t i = 0; i < back.records.size(); ++i) {
        CHECK(back.records[i].j == log.records[i].j);
        CHECK(back.records[i].i1 == log.records[i].i1);
        CHECK(back.records[i].i2 == log.records[i].i2);
        CHECK(back.records[i].b == log.records[i].b);
    }
    std::remove(path.c_str());
    std::remove((path + ".meta").c_str());
}

TEST_CASE("key = value parsing") {
    KeyValues kv = parse_key_values("# comment\nfamily = m\n\nn = 64\npath = /tmp/x y.pgm\n");
    CHECK(kv.size() == 3);
    CHECK(kv["family"] == "m");
    CHECK(kv["n"] == "64");
    CHECK(kv["path"] == "/tmp/x y.pgm");

    CHECK_THROWS_AS(parse_key_values("a = 1\na = 2\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_key_values("no separator\n"), std::invalid_argument);

    const std::string text = format_key_values(kv);
    CHECK(parse_key_values(text) == kv);
}

TEST_CASE("run config validation") {
    RunConfig c = parse_run_config("family = q\nn = 128\nbits = 8\ntau = 0.5\nseed = 7\n");
    CHECK(c.family == "q");
    CHECK(c.n == 128);
    CHECK(c.bits == 8);
    CHECK(c.tau == 0.5);
    CHECK(c.seed == 7);
    CHECK(!c.scene_path.has_value());

    CHECK_THROWS_AS(parse_run_config("frobnicate = yes\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_run_config("n = twelve\n"), std::invalid_argument);
}

TEST_CASE("phantoms hit the requested duty ratio deterministically") {
    Phantom p;
    p.kind = Phantom::Kind::Disk;
    p.duty_ratio = 0.25;
    p.n = 64;
    Scene disk = generate_phantom(p);
    std::size_t ink = 0;
    for (double v : disk.values) ink += v > 0.5;
    // radius about 18.05 px for a quarter-area disk
    CHECK(std::abs(static_cast<double>(ink) / 4096.0 - 0.25) <= 0.025);

    p.kind = Phantom::Kind::RandomBinary;
    p.duty_ratio = 0.1;
    p.seed = 3;
    Scene r1 = generate_phantom(p);
    Scene r2 = generate_phantom(p);
    CHECK(r1.values == r2.values);
    std::size_t rink = 0;
    for (double v : r1.values) rink += v > 0.5;
    CHECK(rink == 410);  // exact count: round(0.1 * 4096)

    p.kind = Phantom::Kind::Glyphs;
    p.duty_ratio = 0.015;
    p.n = 512;
    Scene g = generate_phantom(p);
    std::size_t gink = 0;
    for (double v : g.values) gink += v > 0.5;
    const double duty = static_cast<double>(gink) / (512.0 * 512.0);
    CHECK(std::abs(duty - 0.015) / 0.015 <= 0.10);

    CHECK_THROWS_AS(phantom_kind_from_name("squiggle"), std::invalid_argument);

    // a near-unit duty request either errors out or fills the frame
    p.kind = Phantom::Kind::Bars;
    p.duty_ratio = 0.9999;
    p.n = 8;
    try {
        Scene full = generate_phantom(p);
        std::size_t bink = 0;
        for (double v : full.values) bink += v > 0.5;
        CHECK(bink == 64);
    } catch (const std::invalid_argument&) {
        CHECK(true);
    }
    p.duty_ratio = 1.0;
    CHECK_THROWS_AS(generate_phantom(p), std::invalid_argument);
}
