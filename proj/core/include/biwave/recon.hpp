#pragma once

#include "biwave/image.hpp"
#include "biwave/optics.hpp"
#include "biwave/patterns.hpp"

namespace biwave {

/// Reconstruction plus the acquisition settings that produced it.
struct ReconstructedImage {
    Image image;
    PatternFamily family = PatternFamily::RowMajorM;
    int bits = DetectorModel::kUnlimited;
    double noise_sigma = 0.0;
    double sampling_rate = 1.0;
};

/// Inverse-Haar synthesis: Obj = sum_j w_j^2 b_j entries_j, skipped
/// coefficients contributing zero. O(N log N) over pattern supports.
ReconstructedImage iwt_reconstruct(const AcquisitionLog& log, const Basis& basis);

/// Exact Hadamard inversion Obj = (1/N) H^T B via fast Walsh-Hadamard
/// transform. Requires a full log.
ReconstructedImage hadamard_reconstruct(const AcquisitionLog& log, const Basis& basis);

/// Ensemble-correlation estimate for random-speckle logs:
/// Obj(x,y) = <(B - <B>) (I(x,y) - <I(x,y)>)> over records. Needs >= 2 records.
ReconstructedImage correlation_reconstruct(const AcquisitionLog& log, const Basis& basis);

/// Testing oracle: stacks the raw measurement matrix and solves it by
/// standard elimination. Full log only; guarded to n <= 32.
ReconstructedImage dense_solve(const AcquisitionLog& log, const Basis& basis);

/// Dispatch to the family's reconstructor.
ReconstructedImage reconstruct(const AcquisitionLog& log, const Basis& basis);

}  // namespace biwave
