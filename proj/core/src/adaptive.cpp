#include "biwave/adaptive.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace biwave {

AdaptivePolicy AdaptivePolicy::relative(double tau_rel, double eps, double dc_bucket) {
    if (tau_rel < 0.0) throw std::invalid_argument("policy: tau_rel must be >= 0");
    AdaptivePolicy p;
    p.coeff_threshold = tau_rel * std::abs(dc_bucket);
    p.region_threshold = eps;
    return p;
}

void AdaptivePolicy::validate() const {
    if (coeff_threshold < 0.0 || region_threshold < 0.0)
        throw std::invalid_argument("policy: thresholds must be >= 0");
    if (prune_from_level < 1) throw std::invalid_argument("policy: prune_from_level must be >= 1");
}

AdaptiveResult run_adaptive(const Scene& scene, const Basis& basis, const DetectorModel& detector,
                            const AdaptivePolicy& policy) {
    if (!is_haar(basis.family)) throw std::invalid_argument("run_adaptive: Haar family required");
    if (scene.n != basis.n) throw std::invalid_argument("run_adaptive: scene/basis side mismatch");
    detector.validate();
    policy.validate();

    const std::size_t total = basis.size();
    enum : std::uint8_t { kPending = 0, kMeasured = 1, kSkipped = 2 };
    std::vector<std::uint8_t> state(total, kPending);
    std::vector<double> coeff(total, 0.0);

    AdaptiveResult out;
    out.log.family = basis.family;
    out.log.n = basis.n;
    out.log.basis_seed = basis.seed;
    out.log.detector = detector;
    out.image.image = Image(basis.n);
    out.image.family = basis.family;
    out.image.bits = detector.bits;
    out.image.noise_sigma = detector.noise_sigma;
    std::vector<double>& partial = out.image.image.values;

    auto measure_into = [&](std::size_t j) {
        const Pattern& p = basis.patterns[j];
        const BucketRecord rec = measure(scene, p, detector);
        out.log.records.push_back(rec);
        state[j] = kMeasured;
        coeff[j] = rec.b;
        const double c = p.weight_sq() * rec.b;
        if (c != 0.0)
            p.for_each_nonzero([&](std::size_t px, int sign) { partial[px] += sign > 0 ? c : -c; });
    };

    for (std::size_t ci = 0; ci < basis.clusters.size(); ++ci) {
        const ClusterRange& cl = basis.clusters[ci];
        const int level = static_cast<int>(ci) - 1;
        const std::size_t before = out.log.records.size();
        std::size_t skipped_here = 0;

        if (level < policy.prune_from_level) {
            for (std::size_t j = cl.begin; j < cl.end; ++j) measure_into(j);
        } else {
            // Decide the whole cluster against the pre-cluster synthesis,
            // then project the survivors.
            std::vector<std::size_t> survivors;
            for (std::size_t j = cl.begin; j < cl.end; ++j) {
                bool prune = true;
                for (std::size_t a : parents_of(basis, j)) {
                    if (state[a] == kMeasured && std::abs(coeff[a]) > policy.coeff_threshold) {
                        prune = false;
                        break;
                    }
                }
                if (prune) {
                    basis.patterns[j].for_each_nonzero([&](std::size_t px, int) {
                        if (std::abs(partial[px]) > policy.region_threshold) prune = false;
                    });
                }
                if (prune) {
                    state[j] = kSkipped;
                    out.log.skipped.push_back(j);
                    ++skipped_here;
                } else {
                    survivors.push_back(j);
                }
            }
            for (std::size_t j : survivors) measure_into(j);
        }

        LevelProgress lp;
        lp.level = level;
        lp.measured = out.log.records.size() - before;
        lp.skipped = skipped_here;
        lp.cumulative_rate = static_cast<double>(out.log.records.size()) / static_cast<double>(total);
        out.progress.push_back(lp);
    }

    out.image.sampling_rate = static_cast<double>(out.log.records.size()) / static_cast<double>(total);
    return out;
}

double sampling_rate(const AcquisitionLog& log) {
    if (log.records.empty()) throw std::invalid_argument("sampling_rate: empty log");
    return static_cast<double>(log.measured_count()) / static_cast<double>(log.pattern_count());
}

std::string progress_table(const std::vector<LevelProgress>& progress) {
    std::ostringstream os;
    os << "level measured skipped cumulative_rate\n";
    char buf[96];
    for (const LevelProgress& lp : progress) {
        if (lp.level < 0)
            std::snprintf(buf, sizeof buf, "%5s %8zu %7zu %.6f\n", "dc", lp.measured, lp.skipped,
                          lp.cumulative_rate);
        else
            std::snprintf(buf, sizeof buf, "%5d %8zu %7zu %.6f\n", lp.level, lp.measured, lp.skipped,
                          lp.cumulative_rate);
        os << buf;
    }
    return os.str();
}

}  // namespace biwave
