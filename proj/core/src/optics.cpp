#include "biwave/optics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace biwave {

void DetectorModel::validate() const {
    if (bits != kUnlimited && (bits < 1 || bits > 16))
        throw std::invalid_argument("detector: bits must be 1..16 or unlimited");
    if (!(full_scale > 0.0)) throw std::invalid_argument("detector: full_scale must be > 0");
    if (noise_sigma < 0.0) throw std::invalid_argument("detector: noise_sigma must be >= 0");
}

std::pair<Mask, Mask> split_pattern(const Pattern& p) {
    Mask plus(p.n), minus(p.n);
    p.for_each_nonzero([&](std::size_t px, int sign) {
        (sign > 0 ? plus.bits[px] : minus.bits[px]) = 1;
    });
    return {std::move(plus), std::move(minus)};
}

double quantize(double v, const DetectorModel& d) {
    if (!(d.full_scale > 0.0)) throw std::invalid_argument("quantize: full_scale must be > 0");
    if (d.bits == DetectorModel::kUnlimited) return v;
    const double clamped = std::clamp(v, 0.0, d.full_scale);
    const double steps = static_cast<double>((1 << d.bits) - 1);
    // ties round down: a reading exactly between two levels keeps the lower one
    return std::ceil(clamped / d.full_scale * steps - 0.5) * d.full_scale / steps;
}

double calibrate_full_scale(const Scene& scene) {
    if (scene.n < 1) throw std::invalid_argument("calibrate_full_scale: empty scene");
    const double total = std::accumulate(scene.values.begin(), scene.values.end(), 0.0);
    return total > 0.0 ? total : 1.0;
}

BucketRecord measure(const Scene& scene, const Pattern& p, const DetectorModel& d) {
    if (scene.n != p.n) throw std::invalid_argument("measure: scene/pattern side mismatch");
    d.validate();

    double f1 = 0.0, f2 = 0.0;
    p.for_each_nonzero([&](std::size_t px, int sign) {
        if (sign > 0)
            f1 += scene.values[px];
        else
            f2 += scene.values[px];
    });

    if (d.noise_sigma > 0.0) {
        double g1, g2;
        gaussian_pair(mix_key(d.rng_seed, p.index), g1, g2);
        f1 += d.noise_sigma * g1;
        f2 += d.noise_sigma * g2;
    }

    BucketRecord r;
    r.j = p.index;
    r.i1 = quantize(f1, d);
    r.i2 = quantize(f2, d);
    r.b = r.i1 - r.i2;
    return r;
}

AcquisitionLog acquire_full(const Scene& scene, const Basis& basis, const DetectorModel& d) {
    if (scene.n != basis.n) throw std::invalid_argument("acquire_full: scene/basis side mismatch");
    d.validate();

    AcquisitionLog log;
    log.family = basis.family;
    log.n = basis.n;
    log.basis_seed = basis.seed;
    log.detector = d;
    log.records.reserve(basis.size());
    for (const Pattern& p : basis.patterns) log.records.push_back(measure(scene, p, d));
    return log;
}

}  // namespace biwave
