#include "biwave/recon.hpp"

#include <algorithm>
#include <cmath>

#include "biwave/rng.hpp"
#include "doctest.h"

using namespace biwave;

namespace {

Scene random_scene(int n, std::uint64_t seed) {
    Scene s(n);
    for (std::size_t i = 0; i < s.values.size(); ++i) s.values[i] = to_unit(mix_key(seed, i));
    return s;
}

double max_abs_diff(const Image& a, const Image& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i)
        m = std::max(m, std::abs(a.values[i] - b.values[i]));
    return m;
}

}  // namespace

TEST_CASE("ideal full acquisition reconstructs exactly") {
    for (PatternFamily f : {PatternFamily::RowMajorM, PatternFamily::QuadtreeQ}) {
        Basis b = make_basis(f, 16);
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            Scene s = random_scene(16, seed);
            ReconstructedImage r = iwt_reconstruct(acquire_full(s, b, DetectorModel{}), b);
            CHECK(max_abs_diff(r.image, s) <= 1e-9);
            CHECK(r.sampling_rate == 1.0);
        }
    }
}

TEST_CASE("DC-only log reconstructs the scene mean everywhere") {
    Basis b = make_basis(PatternFamily::RowMajorM, 8);
    Scene s = random_scene(8, 9);
    double mean = 0.0;
    for (double v : s.values) mean += v;
    mean /= 64.0;

    AcquisitionLog log;
    log.family = b.family;
    log.n = 8;
    log.records.push_back(measure(s, b.patterns[0], DetectorModel{}));
    for (std::size_t j = 1; j < 64; ++j) log.skipped.push_back(j);

    ReconstructedImage r = iwt_reconstruct(log, b);
    for (double v : r.image.values) CHECK(v == doctest::Approx(mean).epsilon(1e-12));
}

TEST_CASE("fast synthesis matches the dense oracle") {
    for (PatternFamily f : {PatternFamily::RowMajorM, PatternFamily::QuadtreeQ}) {
        Basis b = make_basis(f, 8);
        for (std::uint64_t seed = 20; seed < 25; ++seed) {
            Scene s = random_scene(8, seed);
            AcquisitionLog log = acquire_full(s, b, DetectorModel{});
            CHECK(max_abs_diff(iwt_reconstruct(log, b).image, dense_solve(log, b).image) <= 1e-10);
        }
    }
}

TEST_CASE("Hadamard inversion is exact and oracle-equivalent on quantized data") {
    Basis b = make_basis(PatternFamily::Hadamard, 8);
    Scene s = random_scene(8, 31);

    ReconstructedImage ideal = hadamard_reconstruct(acquire_full(s, b, DetectorModel{}), b);
    CHECK(max_abs_diff(ideal.image, s) <= 1e-9);

    CHECK(max_abs_diff(hadamard_reconstruct(acquire_full(Scene(8), b, DetectorModel{}), b).image,
                       Scene(8)) == 0.0);

    DetectorModel d;
    d.bits = 4;
    d.full_scale = calibrate_full_scale(s);
    AcquisitionLog qlog = acquire_full(s, b, d);
    CHECK(max_abs_diff(hadamard_reconstruct(qlog, b).image, dense_solve(qlog, b).image) <= 1e-10);
}

TEST_CASE("correlation reconstruction peaks at a delta") {
    const int n = 8;
    Scene delta(n);
    delta.at(5, 2) = 1.0;

    Basis b = make_basis(PatternFamily::RandomSpeckle, n, 7);
    ReconstructedImage r = correlation_reconstruct(acquire_full(delta, b, DetectorModel{}), b);
    const auto it = std::max_element(r.image.values.begin(), r.image.values.end());
    CHECK(static_cast<std::size_t>(it - r.image.values.begin()) == 5u * n + 2u);
}

TEST_CASE("correlation reconstruction needs at least two records") {
    Basis b = make_basis(PatternFamily::RandomSpeckle, 4, 1);
    AcquisitionLog log;
    log.family = b.family;
    log.n = 4;
    log.basis_seed = 1;
    log.records.push_back({0, 1.0, 0.0, 1.0});
    CHECK_THROWS_AS(correlation_reconstruct(log, b), std::invalid_argument);
}

TEST_CASE("Parseval identity for ideal logs") {
    for (PatternFamily f : {PatternFamily::RowMajorM, PatternFamily::QuadtreeQ}) {
        Basis b = make_basis(f, 16);
        Scene s = random_scene(16, 40);
        AcquisitionLog log = acquire_full(s, b, DetectorModel{});

        double coeff_energy = 0.0;
        for (const BucketRecord& r : log.records) {
            const double wb = b.patterns[r.j].weight * r.b;
            coeff_energy += wb * wb;
        }
        double pixel_energy = 0.0;
        for (double v : s.values) pixel_energy += v * v;
        CHECK(coeff_energy == doctest::Approx(pixel_energy).epsilon(1e-9));
    }
}

TEST_CASE("synthesis is linear in the log") {
    Basis b = make_basis(PatternFamily::RowMajorM, 8);
    Scene sa = random_scene(8, 50), sb = random_scene(8, 51);
    AcquisitionLog la = acquire_full(sa, b, DetectorModel{});
    AcquisitionLog lb = acquire_full(sb, b, DetectorModel{});

    AcquisitionLog sum = la;
    for (std::size_t j = 0; j < sum.records.size(); ++j) {
        sum.records[j].i1 += lb.records[j].i1;
        sum.records[j].i2 += lb.records[j].i2;
        sum.records[j].b += lb.records[j].b;
    }

    Image want(8);
    const Image ia = iwt_reconstruct(la, b).image;
    const Image ib = iwt_reconstruct(lb, b).image;
    for (std::size_t i = 0; i < 64; ++i) want.values[i] = ia.values[i] + ib.values[i];
    CHECK(max_abs_diff(iwt_reconstruct(sum, b).image, want) <= 1e-12);
}

TEST_CASE("zeroing one coefficient shifts the image by exactly its term") {
    Basis b = make_basis(PatternFamily::QuadtreeQ, 8);
    Scene s = random_scene(8, 60);
    AcquisitionLog full = acquire_full(s, b, DetectorModel{});

    const std::size_t j = 13;
    AcquisitionLog cut = full;
    const double bj = cut.records[j].b;
    cut.records.erase(cut.records.begin() + static_cast<std::ptrdiff_t>(j));
    cut.skipped.push_back(j);

    const Image fi = iwt_reconstruct(full, b).image;
    const Image ci = iwt_reconstruct(cut, b).image;
    const Pattern& p = b.patterns[j];
    for (std::size_t px = 0; px < 64; ++px) {
        const double term = p.weight_sq() * bj * p.entry_at(px);
        CHECK(fi.values[px] - ci.values[px] == doctest::Approx(term).epsilon(1e-12));
    }
}

TEST_CASE("dense oracle guardrails") {
    Basis b = make_basis(PatternFamily::RowMajorM, 64);
    AcquisitionLog log = acquire_full(random_scene(64, 70), b, DetectorModel{});
    CHECK_THROWS_AS(dense_solve(log, b), std::invalid_argument);  // n > 32

    Basis b4 = make_basis(PatternFamily::RowMajorM, 4);
    AcquisitionLog partial = acquire_full(random_scene(4, 71), b4, DetectorModel{});
    partial.records.pop_back();
    partial.skipped.push_back(15);
    CHECK_THROWS_AS(dense_solve(partial, b4), std::invalid_argument);
    CHECK_THROWS_AS(hadamard_reconstruct(partial, b4), std::invalid_argument);  // family too

    // duplicate rows make the stacked system singular
    AcquisitionLog dup = acquire_full(random_scene(4, 72), b4, DetectorModel{});
    dup.records[0] = dup.records[1];
    CHECK_THROWS_AS(dense_solve(dup, b4), std::runtime_error);
}

TEST_CASE("reconstruct dispatches on the log family") {
    Scene s = random_scene(8, 80);
    for (PatternFamily f : {PatternFamily::RowMajorM, PatternFamily::QuadtreeQ,
                            PatternFamily::Hadamard}) {
        Basis b = make_basis(f, 8);
        ReconstructedImage r = reconstruct(acquire_full(s, b, DetectorModel{}), b);
        CHECK(max_abs_diff(r.image, s) <= 1e-9);
        CHECK(r.family == f);
    }
}
