#pragma once

#include <string>
#include <vector>

#include "biwave/optics.hpp"
#include "biwave/recon.hpp"

namespace biwave {

/// Pruning thresholds for the cluster-by-cluster acquisition.
/// tau = ep = 0 is lossless for nonnegative scenes.
struct AdaptivePolicy {
    double coeff_threshold = 0.0;   // tau, absolute, in bucket units
    double region_threshold = 0.0;  // epsilon, on partial-reconstruction values
    int prune_from_level = 1;       // first wavelet level eligible for pruning

    /// Scales tau from a measured DC bucket: tau = tau_rel * |b_dc|.
    static AdaptivePolicy relative(double tau_rel, double eps, double dc_bucket);

    void validate() const;
};

struct LevelProgress {
    int level = -1;  // -1 = DC cluster
    std::size_t measured = 0;
    std::size_t skipped = 0;
    double cumulative_rate = 0.0;
};

struct AdaptiveResult {
    ReconstructedImage image;
    AcquisitionLog log;
    std::vector<LevelProgress> progress;
};

/// Level-by-level acquisition: DC and the first wavelet cluster are measured
/// in full; a deeper pattern is skipped iff every measured parent coefficient
/// over its support has |b| <= tau and the partial reconstruction is within
/// epsilon everywhere on its support. Skipped patterns are never projected.
AdaptiveResult run_adaptive(const Scene& scene, const Basis& basis, const DetectorModel& detector,
                            const AdaptivePolicy& policy);

/// measured_count / N.
double sampling_rate(const AcquisitionLog& log);

/// Plain-text per-level table: level, measured, skipped, cumulative rate.
std::string progress_table(const std::vector<LevelProgress>& progress);

}  // namespace biwave
