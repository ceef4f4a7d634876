#include "biwave/pgm.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace biwave {

namespace {

// Reads the next header token, skipping whitespace and '#' comment lines.
std::string next_token(std::istream& in) {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {
            }
            continue;
        }
        if (std::isspace(c)) {
            if (!tok.empty()) return tok;
            continue;
        }
        tok.push_back(static_cast<char>(c));
    }
    if (tok.empty()) throw std::runtime_error("pgm: truncated header");
    return tok;
}

int parse_int(const std::string& tok, const char* what) {
    try {
        return std::stoi(tok);
    } catch (const std::exception&) {
        throw std::runtime_error(std::string("pgm: malformed ") + what);
    }
}

}  // namespace

PgmImage read_pgm(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("pgm: cannot open " + path);
    if (next_token(f) != "P5") throw std::runtime_error("pgm: not a binary PGM: " + path);

    PgmImage img;
    img.width = parse_int(next_token(f), "width");
    img.height = parse_int(next_token(f), "height");
    img.maxval = parse_int(next_token(f), "maxval");
    if (img.width < 1 || img.height < 1 || img.maxval < 1 || img.maxval > 65535)
        throw std::runtime_error("pgm: bad dimensions or maxval in " + path);

    const std::size_t count = static_cast<std::size_t>(img.width) * img.height;
    const bool wide = img.maxval > 255;
    std::vector<char> raw(count * (wide ? 2 : 1));
    f.read(raw.data(), static_cast<std::streamsize>(raw.size()));
    if (!f) throw std::runtime_error("pgm: truncated payload in " + path);

    img.pixels.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        if (wide) {
            const auto hi = static_cast<std::uint8_t>(raw[2 * i]);
            const auto lo = static_cast<std::uint8_t>(raw[2 * i + 1]);
            img.pixels[i] = static_cast<std::uint16_t>((hi << 8) | lo);  // big-endian
        } else {
            img.pixels[i] = static_cast<std::uint8_t>(raw[i]);
        }
    }
    return img;
}

void write_pgm(const std::string& path, const PgmImage& img) {
    if (img.width < 1 || img.height < 1 || img.maxval < 1 || img.maxval > 65535)
        throw std::invalid_argument("pgm: bad dimensions or maxval");
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("pgm: cannot open " + path + " for writing");
    f << "P5\n" << img.width << ' ' << img.height << '\n' << img.maxval << '\n';

    const bool wide = img.maxval > 255;
    std::vector<char> raw;
    raw.reserve(img.pixels.size() * (wide ? 2 : 1));
    for (std::uint16_t px : img.pixels) {
        if (wide) {
            raw.push_back(static_cast<char>(px >> 8));
            raw.push_back(static_cast<char>(px & 0xff));
        } else {
            raw.push_back(static_cast<char>(px & 0xff));
        }
    }
    f.write(raw.data(), static_cast<std::streamsize>(raw.size()));
    if (!f) throw std::runtime_error("pgm: write failed for " + path);
}

Scene read_scene_pgm(const std::string& path) {
    const PgmImage img = read_pgm(path);
    if (img.width != img.height) throw std::runtime_error("scene pgm: image must be square: " + path);
    Scene scene(img.width);
    for (std::size_t i = 0; i < scene.pixel_count(); ++i)
        scene.values[i] = static_cast<double>(img.pixels[i]) / img.maxval;
    return scene;
}

void write_scene_pgm(const std::string& path, const Scene& scene) {
    validate_scene(scene);
    PgmImage img;
    img.width = img.height = scene.n;
    img.maxval = 255;
    img.pixels.resize(scene.pixel_count());
    for (std::size_t i = 0; i < scene.pixel_count(); ++i)
        img.pixels[i] = static_cast<std::uint16_t>(std::lround(scene.values[i] * 255.0));
    write_pgm(path, img);
}

FloatMapping write_image_pgm16(const std::string& path, const Image& image) {
    const auto [lo_it, hi_it] = std::minmax_element(image.values.begin(), image.values.end());
    const double lo = *lo_it, hi = *hi_it;
    FloatMapping map;
    map.offset = lo;
    map.scale = hi > lo ? (hi - lo) / 65535.0 : 1.0;

    PgmImage img;
    img.width = img.height = image.n;
    img.maxval = 65535;
    img.pixels.resize(image.pixel_count());
    for (std::size_t i = 0; i < image.pixel_count(); ++i)
        img.pixels[i] = static_cast<std::uint16_t>(std::lround((image.values[i] - map.offset) / map.scale));
    write_pgm(path, img);
    return map;
}

Image read_image_pgm16(const std::string& path, const FloatMapping& mapping) {
    const PgmImage img = read_pgm(path);
    if (img.width != img.height) throw std::runtime_error("pgm16: image must be square: " + path);
    Image out(img.width);
    for (std::size_t i = 0; i < out.pixel_count(); ++i)
        out.values[i] = mapping.offset + mapping.scale * img.pixels[i];
    return out;
}

void write_raw_f64(const std::string& path, const Image& image) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("raw: cannot open " + path + " for writing");
    static_assert(std::endian::native == std::endian::little, "raw f64 writer assumes little-endian host");
    f.write(reinterpret_cast<const char*>(image.values.data()),
            static_cast<std::streamsize>(image.values.size() * sizeof(double)));
    if (!f) throw std::runtime_error("raw: write failed for " + path);
}

Image read_raw_f64(const std::string& path) {
    std::ifstream f(path, std::ios::binary | std::ios::ate);
    if (!f) throw std::runtime_error("raw: cannot open " + path);
    const auto bytes = static_cast<std::size_t>(f.tellg());
    const auto count = bytes / sizeof(double);
    const int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(count))));
    if (bytes % sizeof(double) != 0 || static_cast<std::size_t>(n) * n != count || n < 1)
        throw std::runtime_error("raw: not a square f64 grid: " + path);
    Image out(n);
    f.seekg(0);
    f.read(reinterpret_cast<char*>(out.values.data()), static_cast<std::streamsize>(bytes));
    if (!f) throw std::runtime_error("raw: truncated payload in " + path);
    return out;
}

Mask read_mask_pgm(const std::string& path) {
    const PgmImage img = read_pgm(path);
    if (img.width != img.height) throw std::runtime_error("mask pgm: image must be square: " + path);
    Mask m(img.width);
    for (std::size_t i = 0; i < m.bits.size(); ++i) m.bits[i] = img.pixels[i] * 2 > img.maxval ? 1 : 0;
    return m;
}

void write_mask_pgm(const std::string& path, const Mask& mask) {
    PgmImage img;
    img.width = img.height = mask.n;
    img.maxval = 255;
    img.pixels.resize(mask.bits.size());
    for (std::size_t i = 0; i < mask.bits.size(); ++i) img.pixels[i] = mask.bits[i] ? 255 : 0;
    write_pgm(path, img);
}

}  // namespace biwave
