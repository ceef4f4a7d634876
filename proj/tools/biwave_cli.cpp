// biwave: command-line front end for the ghost-imaging simulation library.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "biwave/adaptive.hpp"
#include "biwave/carve.hpp"
#include "biwave/config.hpp"
#include "biwave/logio.hpp"
#include "biwave/metrics.hpp"
#include "biwave/optics.hpp"
#include "biwave/patterns.hpp"
#include "biwave/pgm.hpp"
#include "biwave/phantom.hpp"
#include "biwave/recon.hpp"

namespace fs = std::filesystem;
using namespace biwave;

namespace {

// All output files go through a temp + rename so a failing run leaves
// nothing partial behind.
template <class Writer>
void write_atomic(const std::string& path, Writer&& writer) {
    const std::string tmp = path + ".tmp";
    try {
        writer(tmp);
    } catch (...) {
        std::error_code ec;
        fs::remove(tmp, ec);
        throw;
    }
    fs::rename(tmp, path);
}

void write_text_atomic(const std::string& path, const std::string& text) {
    write_atomic(path, [&](const std::string& tmp) {
        std::ofstream f(tmp, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open " + tmp + " for writing");
        f.write(text.data(), static_cast<std::streamsize>(text.size()));
        if (!f) throw std::runtime_error("write failed for " + tmp);
    });
}

int parse_bits(const std::string& s) {
    if (s == "unlimited") return DetectorModel::kUnlimited;
    const int b = std::stoi(s);
    if (b < 1 || b > 16) throw std::invalid_argument("bits must be 1..16 or unlimited");
    return b;
}

std::vector<int> parse_bits_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto dots = item.find("..");
        if (dots != std::string::npos) {
            const int lo = parse_bits(item.substr(0, dots));
            const int hi = parse_bits(item.substr(dots + 2));
            if (lo == 0 || hi == 0 || lo > hi) throw std::invalid_argument("bad bits range: " + item);
            for (int b = lo; b <= hi; ++b) out.push_back(b);
        } else {
            out.push_back(parse_bits(item));
        }
    }
    if (out.empty()) throw std::invalid_argument("empty bits list");
    return out;
}

DetectorModel make_detector(const Scene& scene, const std::string& bits, double noise_sigma,
                            std::uint64_t seed, double full_scale_override) {
    DetectorModel d;
    d.bits = parse_bits(bits);
    d.full_scale = full_scale_override > 0.0 ? full_scale_override : calibrate_full_scale(scene);
    d.noise_sigma = noise_sigma;
    d.rng_seed = seed;
    d.validate();
    return d;
}

std::string recon_metadata(const ReconstructedImage& rec, const FloatMapping& map) {
    KeyValues kv;
    kv["family"] = family_name(rec.family);
    kv["n"] = std::to_string(rec.image.n);
    kv["bits"] = rec.bits == DetectorModel::kUnlimited ? "unlimited" : std::to_string(rec.bits);
    kv["noise_sigma"] = std::to_string(rec.noise_sigma);
    kv["sampling_rate"] = std::to_string(rec.sampling_rate);
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", map.offset);
    kv["map_offset"] = buf;
    std::snprintf(buf, sizeof buf, "%.17g", map.scale);
    kv["map_scale"] = buf;
    return format_key_values(kv);
}

void write_recon_outputs(const ReconstructedImage& rec, const std::string& out_path,
                         const std::string& raw_path) {
    FloatMapping map;
    write_atomic(out_path, [&](const std::string& tmp) { map = write_image_pgm16(tmp, rec.image); });
    write_text_atomic(out_path + ".meta", recon_metadata(rec, map));
    if (!raw_path.empty())
        write_atomic(raw_path, [&](const std::string& tmp) { write_raw_f64(tmp, rec.image); });
}

struct CommonAcq {
    std::string family = "m";
    int n = 64;
    std::string bits = "unlimited";
    double noise_sigma = 0.0;
    std::uint64_t seed = 0;
    double full_scale = 0.0;  // 0 = calibrate from scene
    std::string scene_path;
    std::string config_path;

    void apply_config() {
        if (config_path.empty()) return;
        const RunConfig cfg = load_run_config(config_path);
        if (cfg.family) family = *cfg.family;
        if (cfg.n) n = *cfg.n;
        if (cfg.bits) bits = *cfg.bits == 0 ? "unlimited" : std::to_string(*cfg.bits);
        if (cfg.noise_sigma) noise_sigma = *cfg.noise_sigma;
        if (cfg.seed) seed = *cfg.seed;
        if (cfg.scene_path) scene_path = *cfg.scene_path;
    }
};

void add_common_acq(CLI::App* cmd, CommonAcq& a, bool need_scene = true) {
    cmd->add_option("--family", a.family, "pattern family: m|q|hadamard|speckle (aliases biwave/hcgi/rcgi)");
    cmd->add_option("--n", a.n, "side length in pixels");
    cmd->add_option("--bits", a.bits, "detector bits 1..16 or 'unlimited'");
    cmd->add_option("--noise-sigma", a.noise_sigma, "additive Gaussian noise per channel");
    cmd->add_option("--seed", a.seed, "RNG seed")->default_val(0);
    cmd->add_option("--full-scale", a.full_scale, "detector full scale (default: DC calibration)");
    auto* sc = cmd->add_option("--scene", a.scene_path, "input scene PGM");
    if (need_scene) sc->required();
    cmd->add_option("--config", a.config_path, "key = value config file (flags override)");
}

int run_phantom(const std::string& kind, double duty, int n, std::uint64_t seed, const std::string& out) {
    Phantom p;
    p.kind = phantom_kind_from_name(kind);
    p.duty_ratio = duty;
    p.n = n;
    p.seed = seed;
    const Scene scene = generate_phantom(p);
    write_atomic(out, [&](const std::string& tmp) { write_scene_pgm(tmp, scene); });
    std::size_t ink = 0;
    for (double v : scene.values)
        if (v > 0.5) ++ink;
    std::printf("phantom written: %s (duty=%.6f)\n", out.c_str(), static_cast<double>(ink) / (n * n));
    return 0;
}

int run_basis(const std::string& family, int n, std::uint64_t seed, const std::string& rle_path,
              const std::string& export_dir, long index) {
    const Basis basis = make_basis(family_from_name(family), n, seed);
    std::printf("basis: family=%s n=%d patterns=%zu clusters=%zu\n", family_name(basis.family).c_str(),
                basis.n, basis.size(), basis.clusters.size());

    if (!rle_path.empty()) {
        std::ostringstream os;
        if (index >= 0)
            os << pattern_rle_line(basis.patterns[static_cast<std::size_t>(index)]) << '\n';
        else
            for (const Pattern& p : basis.patterns) os << pattern_rle_line(p) << '\n';
        write_text_atomic(rle_path, os.str());
    }

    if (!export_dir.empty()) {
        fs::create_directories(export_dir);
        auto export_one = [&](const Pattern& p) {
            const auto [plus, minus] = split_pattern(p);
            const std::string stem = export_dir + "/pattern_" + std::to_string(p.index);
            write_atomic(stem + "_plus.pgm", [&](const std::string& t) { write_mask_pgm(t, plus); });
            write_atomic(stem + "_minus.pgm", [&](const std::string& t) { write_mask_pgm(t, minus); });
            PgmImage combined;
            combined.width = combined.height = p.n;
            combined.maxval = 255;
            combined.pixels.resize(static_cast<std::size_t>(p.n) * p.n);
            for (std::size_t px = 0; px < combined.pixels.size(); ++px)
                combined.pixels[px] = static_cast<std::uint16_t>(128 + 127 * p.entry_at(px));
            write_atomic(stem + "_signed.pgm", [&](const std::string& t) { write_pgm(t, combined); });
        };
        if (index >= 0)
            export_one(basis.patterns[static_cast<std::size_t>(index)]);
        else
            for (const Pattern& p : basis.patterns) export_one(p);
    }
    return 0;
}

int run_simulate(CommonAcq& a, const std::string& out) {
    a.apply_config();
    const Scene scene = read_scene_pgm(a.scene_path);
    if (scene.n != a.n && a.n != 0) a.n = scene.n;
    const Basis basis = make_basis(family_from_name(a.family), scene.n, a.seed);
    const DetectorModel d = make_detector(scene, a.bits, a.noise_sigma, a.seed, a.full_scale);
    const AcquisitionLog log = acquire_full(scene, basis, d);
    write_atomic(out, [&](const std::string& tmp) {
        write_log(tmp, log);
        fs::rename(tmp + ".meta", out + ".meta");
    });
    std::printf("log written: %s (%zu records)\n", out.c_str(), log.measured_count());
    return 0;
}

int run_reconstruct(const std::string& log_path, const std::string& out, const std::string& raw) {
    const AcquisitionLog log = read_log(log_path);
    const Basis basis = make_basis(log.family, log.n, log.basis_seed);
    const ReconstructedImage rec = reconstruct(log, basis);
    write_recon_outputs(rec, out, raw);
    std::printf("reconstruction written: %s\n", out.c_str());
    return 0;
}

int run_adaptive_cmd(CommonAcq& a, double tau, double eps, double tau_rel, const std::string& out,
                     const std::string& log_path) {
    a.apply_config();
    if (!a.config_path.empty()) {
        const RunConfig cfg = load_run_config(a.config_path);
        if (cfg.tau) tau = *cfg.tau;
        if (cfg.eps) eps = *cfg.eps;
    }
    const Scene scene = read_scene_pgm(a.scene_path);
    const Basis basis = make_basis(family_from_name(a.family), scene.n, a.seed);
    const DetectorModel d = make_detector(scene, a.bits, a.noise_sigma, a.seed, a.full_scale);

    AdaptivePolicy policy;
    policy.coeff_threshold = tau;
    policy.region_threshold = eps;
    if (tau_rel > 0.0) {
        const BucketRecord dc = measure(scene, basis.patterns[0], d);
        policy = AdaptivePolicy::relative(tau_rel, eps, dc.b);
    }

    const AdaptiveResult res = run_adaptive(scene, basis, d, policy);
    std::fputs(progress_table(res.progress).c_str(), stdout);
    std::printf("sampling_rate=%.6f\n", sampling_rate(res.log));

    if (!out.empty()) write_recon_outputs(res.image, out, "");
    if (!log_path.empty())
        write_atomic(log_path, [&](const std::string& tmp) {
            write_log(tmp, res.log);
            fs::rename(tmp + ".meta", log_path + ".meta");
        });
    return 0;
}

int run_sweep(const std::string& scene_path, const std::string& families_csv, const std::string& bits_csv,
              double noise_sigma, std::uint64_t seed) {
    const Scene scene = read_scene_pgm(scene_path);
    std::vector<PatternFamily> families;
    std::stringstream ss(families_csv);
    std::string item;
    while (std::getline(ss, item, ',')) families.push_back(family_from_name(item));
    if (families.empty()) throw std::invalid_argument("empty families list");
    const std::vector<int> bits = parse_bits_list(bits_csv);
    const SweepResult result = dynamic_range_sweep(scene, families, bits, noise_sigma, seed);
    std::fputs(result.to_csv().c_str(), stdout);
    return 0;
}

int run_ssim(const std::string& a_path, const std::string& b_path, const std::string& window, int window_size,
             double sigma, double dynamic_range) {
    const Scene a = read_scene_pgm(a_path);
    const Scene b = read_scene_pgm(b_path);
    SsimParams p;
    if (window == "uniform")
        p = SsimParams::uniform(window_size);
    else if (window == "gaussian")
        p.window_size = window_size;
    else
        throw std::invalid_argument("window must be gaussian or uniform");
    p.sigma = sigma;
    if (dynamic_range > 0.0) {
        p.dynamic_range = dynamic_range;
    } else {
        const auto [lo, hi] = std::minmax_element(b.values.begin(), b.values.end());
        p.dynamic_range = *hi > *lo ? *hi - *lo : 1.0;
    }
    std::printf("ssim=%.9f\n", ssim(a, b, p));
    return 0;
}

int run_silhouettes(const std::string& shape_name, double radius, const std::string& box_csv, int views,
                    double step, int n, double extent, const std::string& out_dir) {
    SolidShape shape;
    if (shape_name == "sphere") {
        shape = SolidShape::sphere(radius);
    } else if (shape_name == "box") {
        double a = 0, b = 0, c = 0;
        if (std::sscanf(box_csv.c_str(), "%lf,%lf,%lf", &a, &b, &c) != 3)
            throw std::invalid_argument("--box expects a,b,c");
        shape = SolidShape::box(a, b, c);
    } else {
        throw std::invalid_argument("shape must be sphere or box");
    }
    std::vector<double> angles;
    for (int i = 0; i < views; ++i) angles.push_back(i * step);
    const SilhouetteSet set = synth_silhouettes(shape, angles, n, extent);

    fs::create_directories(out_dir);
    std::ostringstream manifest;
    for (std::size_t i = 0; i < set.views.size(); ++i) {
        char name[48];
        std::snprintf(name, sizeof name, "view_%03zu.pgm", i);
        write_atomic(out_dir + "/" + name,
                     [&](const std::string& tmp) { write_mask_pgm(tmp, set.views[i].mask); });
        manifest << set.views[i].angle_degrees << ' ' << name << '\n';
    }
    write_text_atomic(out_dir + "/manifest.txt", manifest.str());
    std::printf("silhouettes written: %s (%zu views)\n", out_dir.c_str(), set.views.size());
    return 0;
}

int run_carve(const std::string& manifest_path, int grid, double extent, const std::string& out,
              const std::string& obj_path) {
    std::ifstream mf(manifest_path);
    if (!mf) throw std::runtime_error("cannot open manifest " + manifest_path);
    const fs::path base = fs::path(manifest_path).parent_path();

    SilhouetteSet set;
    std::string line;
    while (std::getline(mf, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        double angle;
        std::string rel;
        if (!(ls >> angle >> rel)) throw std::runtime_error("malformed manifest line: " + line);
        SilhouetteSet::View view;
        view.angle_degrees = angle;
        view.mask = read_mask_pgm((base / rel).string());
        set.views.push_back(std::move(view));
    }
    if (set.views.empty()) throw std::runtime_error("manifest lists no views");
    set.n = set.views.front().mask.n;

    const VoxelGrid vox = carve(set, grid, extent);
    write_atomic(out, [&](const std::string& tmp) { export_voxels_raw(vox, tmp); });
    if (!obj_path.empty())
        write_atomic(obj_path, [&](const std::string& tmp) { export_voxels_obj(vox, tmp); });

    const double volume = static_cast<double>(vox.occupied_count()) * vox.pitch * vox.pitch * vox.pitch;
    std::printf("occupied=%zu volume=%.6g%s\n", vox.occupied_count(), volume,
                vox.empty_view ? " (empty view: grid cleared)" : "");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"bi-frequency Haar-wavelet ghost imaging simulator"};
    app.require_subcommand(1);
    int rc = 0;
    std::function<int()> action;

    // phantom
    {
        auto* cmd = app.add_subcommand("phantom", "generate a deterministic binary test scene");
        auto kind = std::make_shared<std::string>("glyphs");
        auto duty = std::make_shared<double>(0.015);
        auto n = std::make_shared<int>(512);
        auto seed = std::make_shared<std::uint64_t>(0);
        auto out = std::make_shared<std::string>();
        cmd->add_option("--kind", *kind, "glyphs|disk|bars|random");
        cmd->add_option("--duty", *duty, "object area / scene area");
        cmd->add_option("--n", *n, "side length");
        cmd->add_option("--seed", *seed, "RNG seed")->default_val(0);
        cmd->add_option("--out", *out, "output scene PGM")->required();
        cmd->callback([=, &action] { action = [=] { return run_phantom(*kind, *duty, *n, *seed, *out); }; });
    }
    // basis
    {
        auto* cmd = app.add_subcommand("basis", "build a pattern basis; optionally export patterns");
        auto family = std::make_shared<std::string>("m");
        auto n = std::make_shared<int>(8);
        auto seed = std::make_shared<std::uint64_t>(0);
        auto rle = std::make_shared<std::string>();
        auto dir = std::make_shared<std::string>();
        auto index = std::make_shared<long>(-1);
        cmd->add_option("--family", *family, "m|q|hadamard|speckle");
        cmd->add_option("--n", *n, "side length");
        cmd->add_option("--seed", *seed, "RNG seed")->default_val(0);
        cmd->add_option("--rle", *rle, "write run-length text export here");
        cmd->add_option("--export-dir", *dir, "write per-pattern PGM mask triples here");
        cmd->add_option("--index", *index, "restrict exports to one pattern index");
        cmd->callback(
            [=, &action] { action = [=] { return run_basis(*family, *n, *seed, *rle, *dir, *index); }; });
    }
    // simulate
    {
        auto* cmd = app.add_subcommand("simulate", "full acquisition of a scene");
        auto acq = std::make_shared<CommonAcq>();
        auto out = std::make_shared<std::string>();
        add_common_acq(cmd, *acq);
        cmd->add_option("--out", *out, "output CSV log")->required();
        cmd->callback([=, &action] { action = [=]() mutable { return run_simulate(*acq, *out); }; });
    }
    // reconstruct
    {
        auto* cmd = app.add_subcommand("reconstruct", "reconstruct an image from a CSV log");
        auto log = std::make_shared<std::string>();
        auto out = std::make_shared<std::string>();
        auto raw = std::make_shared<std::string>();
        cmd->add_option("--log", *log, "input CSV log (with .meta sidecar)")->required();
        cmd->add_option("--out", *out, "output 16-bit PGM")->required();
        cmd->add_option("--raw", *raw, "also write a lossless f64 grid here");
        cmd->callback([=, &action] { action = [=] { return run_reconstruct(*log, *out, *raw); }; });
    }
    // adaptive
    {
        auto* cmd = app.add_subcommand("adaptive", "cluster-by-cluster adaptive acquisition");
        auto acq = std::make_shared<CommonAcq>();
        auto tau = std::make_shared<double>(0.0);
        auto eps = std::make_shared<double>(0.0);
        auto tau_rel = std::make_shared<double>(0.0);
        auto out = std::make_shared<std::string>();
        auto log = std::make_shared<std::string>();
        add_common_acq(cmd, *acq);
        cmd->add_option("--tau", *tau, "coefficient threshold (bucket units)");
        cmd->add_option("--eps", *eps, "partial-reconstruction threshold");
        cmd->add_option("--tau-rel", *tau_rel, "scale tau from the measured DC bucket");
        cmd->add_option("--out", *out, "output reconstruction PGM");
        cmd->add_option("--log", *log, "output CSV log");
        cmd->callback([=, &action] {
            action = [=]() mutable { return run_adaptive_cmd(*acq, *tau, *eps, *tau_rel, *out, *log); };
        });
    }
    // sweep
    {
        auto* cmd = app.add_subcommand("sweep", "dynamic-range sweep; CSV on stdout");
        auto scene = std::make_shared<std::string>();
        auto families = std::make_shared<std::string>("biwave,hcgi,rcgi");
        auto bits = std::make_shared<std::string>("1..16");
        auto noise = std::make_shared<double>(0.0);
        auto seed = std::make_shared<std::uint64_t>(0);
        cmd->add_option("--scene", *scene, "input scene PGM")->required();
        cmd->add_option("--families", *families, "comma list: biwave,quadtree,hcgi,rcgi");
        cmd->add_option("--bits", *bits, "comma list and/or ranges, e.g. 1..16");
        cmd->add_option("--noise-sigma", *noise, "additive noise");
        cmd->add_option("--seed", *seed, "RNG seed")->default_val(0);
        cmd->callback([=, &action] {
            action = [=] { return run_sweep(*scene, *families, *bits, *noise, *seed); };
        });
    }
    // ssim
    {
        auto* cmd = app.add_subcommand("ssim", "structural similarity of two PGM images");
        auto a = std::make_shared<std::string>();
        auto b = std::make_shared<std::string>();
        auto window = std::make_shared<std::string>("gaussian");
        auto size = std::make_shared<int>(11);
        auto sigma = std::make_shared<double>(1.5);
        auto range = std::make_shared<double>(0.0);
        cmd->add_option("--a", *a, "first image")->required();
        cmd->add_option("--b", *b, "second image (reference for auto dynamic range)")->required();
        cmd->add_option("--window", *window, "gaussian|uniform");
        cmd->add_option("--window-size", *size, "window side");
        cmd->add_option("--sigma", *sigma, "Gaussian sigma");
        cmd->add_option("--dynamic-range", *range, "L; 0 = reference value range");
        cmd->callback([=, &action] {
            action = [=] { return run_ssim(*a, *b, *window, *size, *sigma, *range); };
        });
    }
    // silhouettes
    {
        auto* cmd = app.add_subcommand("silhouettes", "synthetic multi-view silhouettes + manifest");
        auto shape = std::make_shared<std::string>("sphere");
        auto radius = std::make_shared<double>(0.0);
        auto box = std::make_shared<std::string>();
        auto views = std::make_shared<int>(72);
        auto step = std::make_shared<double>(5.0);
        auto n = std::make_shared<int>(512);
        auto extent = std::make_shared<double>(2048.0);
        auto dir = std::make_shared<std::string>();
        cmd->add_option("--shape", *shape, "sphere|box");
        cmd->add_option("--radius", *radius, "sphere radius (world units)");
        cmd->add_option("--box", *box, "box extents a,b,c (world units)");
        cmd->add_option("--views", *views, "number of views");
        cmd->add_option("--step", *step, "angle step in degrees");
        cmd->add_option("--n", *n, "silhouette side in pixels");
        cmd->add_option("--extent", *extent, "cube extent (world units)");
        cmd->add_option("--out-dir", *dir, "output directory")->required();
        cmd->callback([=, &action] {
            action = [=] {
                return run_silhouettes(*shape, *radius, *box, *views, *step, *n, *extent, *dir);
            };
        });
    }
    // carve
    {
        auto* cmd = app.add_subcommand("carve", "visual-hull carving from a silhouette manifest");
        auto manifest = std::make_shared<std::string>();
        auto grid = std::make_shared<int>(128);
        auto extent = std::make_shared<double>(2048.0);
        auto out = std::make_shared<std::string>();
        auto obj = std::make_shared<std::string>();
        cmd->add_option("--manifest", *manifest, "angle/path manifest")->required();
        cmd->add_option("--grid", *grid, "voxel resolution G");
        cmd->add_option("--extent", *extent, "cube extent (world units)");
        cmd->add_option("--out", *out, "output raw voxel file")->required();
        cmd->add_option("--obj", *obj, "also write an OBJ surface mesh here");
        cmd->callback([=, &action] {
            action = [=] { return run_carve(*manifest, *grid, *extent, *out, *obj); };
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        rc = action ? action() : 1;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const std::runtime_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return rc;
}
