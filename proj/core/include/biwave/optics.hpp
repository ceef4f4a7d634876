#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "biwave/image.hpp"
#include "biwave/patterns.hpp"

namespace biwave {

/// Bucket detector pair: finite dynamic range plus optional additive noise.
/// bits == Unlimited (0) disables quantization.
struct DetectorModel {
    static constexpr int kUnlimited = 0;

    int bits = kUnlimited;     // 0, or 1..16
    double full_scale = 1.0;   // flux units
    double noise_sigma = 0.0;  // additive Gaussian per channel reading
    std::uint64_t rng_seed = 0;

    void validate() const;
};

/// Two-channel reading for one projected pattern; b = i1 - i2.
struct BucketRecord {
    std::size_t j = 0;
    double i1 = 0.0;
    double i2 = 0.0;
    double b = 0.0;
};

/// Ordered record of one acquisition run, including the patterns that the
/// adaptive scheme decided not to project.
struct AcquisitionLog {
    PatternFamily family = PatternFamily::RowMajorM;
    int n = 0;
    std::uint64_t basis_seed = 0;
    DetectorModel detector;
    std::vector<BucketRecord> records;
    std::vector<std::size_t> skipped;  // sorted, disjoint from records

    std::size_t measured_count() const { return records.size(); }
    std::size_t pattern_count() const { return static_cast<std::size_t>(n) * n; }
};

/// Physical masks for the two light frequencies: plus marks +1 entries,
/// minus marks -1 entries.
std::pair<Mask, Mask> split_pattern(const Pattern& p);

/// Clamp to [0, full_scale] and round to the nearest of the 2^bits uniform
/// levels. Identity with unlimited bits.
double quantize(double v, const DetectorModel& d);

/// Ideal positive-channel flux of the DC pattern (sum of reflectance), or 1
/// for an all-zero scene. With this full scale no nonnegative scene ever
/// clips a channel.
double calibrate_full_scale(const Scene& scene);

/// One bi-frequency measurement: per-channel flux, noise, quantization.
BucketRecord measure(const Scene& scene, const Pattern& p, const DetectorModel& d);

/// Projects every pattern of the basis in order.
AcquisitionLog acquire_full(const Scene& scene, const Basis& basis, const DetectorModel& d);

}  // namespace biwave
