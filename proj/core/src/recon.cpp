#include "biwave/recon.hpp"

#include <Eigen/Dense>
#include <stdexcept>

namespace biwave {

namespace {

ReconstructedImage make_result(const AcquisitionLog& log) {
    ReconstructedImage r;
    r.image = Image(log.n);
    r.family = log.family;
    r.bits = log.detector.bits;
    r.noise_sigma = log.detector.noise_sigma;
    r.sampling_rate = static_cast<double>(log.measured_count()) / static_cast<double>(log.pattern_count());
    return r;
}

void require_full(const AcquisitionLog& log, const char* who) {
    if (!log.skipped.empty() || log.records.size() != log.pattern_count())
        throw std::invalid_argument(std::string(who) + ": full log required");
}

}  // namespace

ReconstructedImage iwt_reconstruct(const AcquisitionLog& log, const Basis& basis) {
    if (!is_haar(log.family) || log.family != basis.family || log.n != basis.n)
        throw std::invalid_argument("iwt_reconstruct: Haar log/basis mismatch");

    ReconstructedImage out = make_result(log);
    for (const BucketRecord& rec : log.records) {
        const Pattern& p = basis.patterns[rec.j];
        const double c = p.weight_sq() * rec.b;
        if (c == 0.0) continue;
        p.for_each_nonzero([&](std::size_t px, int sign) { out.image.values[px] += sign > 0 ? c : -c; });
    }
    return out;
}

ReconstructedImage hadamard_reconstruct(const AcquisitionLog& log, const Basis& basis) {
    if (log.family != PatternFamily::Hadamard || basis.family != PatternFamily::Hadamard || log.n != basis.n)
        throw std::invalid_argument("hadamard_reconstruct: Hadamard log/basis mismatch");
    require_full(log, "hadamard_reconstruct");

    const std::size_t total = log.pattern_count();
    ReconstructedImage out = make_result(log);
    std::vector<double>& x = out.image.values;
    for (const BucketRecord& rec : log.records) x[rec.j] = rec.b;

    // In-place fast Walsh-Hadamard transform (H is symmetric, H^T = H).
    for (std::size_t h = 1; h < total; h <<= 1) {
        for (std::size_t i = 0; i < total; i += h << 1) {
            for (std::size_t k = i; k < i + h; ++k) {
                const double a = x[k], b = x[k + h];
                x[k] = a + b;
                x[k + h] = a - b;
            }
        }
    }
    for (double& v : x) v /= static_cast<double>(total);
    return out;
}

ReconstructedImage correlation_reconstruct(const AcquisitionLog& log, const Basis& basis) {
    if (log.family != PatternFamily::RandomSpeckle || basis.family != PatternFamily::RandomSpeckle ||
        log.n != basis.n || log.basis_seed != basis.seed)
        throw std::invalid_argument("correlation_reconstruct: speckle log/basis mismatch");
    if (log.records.size() < 2) throw std::invalid_argument("correlation_reconstruct: need >= 2 records");

    const double count = static_cast<double>(log.records.size());

    double b_mean = 0.0;
    for (const BucketRecord& rec : log.records) b_mean += rec.b;
    b_mean /= count;

    // <(B - <B>)(I - <I>)> = <(B - <B>) I> because the demeaned buckets sum to 0.
    ReconstructedImage out = make_result(log);
    std::vector<double>& img = out.image.values;
    for (const BucketRecord& rec : log.records) {
        const double db = rec.b - b_mean;
        basis.patterns[rec.j].for_each_nonzero([&](std::size_t px, int) { img[px] += db; });
    }
    for (double& v : img) v /= count;
    return out;
}

ReconstructedImage dense_solve(const AcquisitionLog& log, const Basis& basis) {
    if (log.family != basis.family || log.n != basis.n)
        throw std::invalid_argument("dense_solve: log/basis mismatch");
    if (log.n > 32) throw std::invalid_argument("dense_solve: guarded to n <= 32");
    require_full(log, "dense_solve");

    const auto total = static_cast<Eigen::Index>(log.pattern_count());
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(total, total);
    Eigen::VectorXd rhs(total);
    for (Eigen::Index r = 0; r < total; ++r) {
        const BucketRecord& rec = log.records[static_cast<std::size_t>(r)];
        basis.patterns[rec.j].for_each_nonzero(
            [&](std::size_t px, int sign) { m(r, static_cast<Eigen::Index>(px)) = sign; });
        rhs(r) = rec.b;
    }

    Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
    if (!lu.isInvertible()) throw std::runtime_error("dense_solve: measurement matrix is singular");
    Eigen::VectorXd x = lu.solve(rhs);

    ReconstructedImage out = make_result(log);
    for (Eigen::Index i = 0; i < total; ++i) out.image.values[static_cast<std::size_t>(i)] = x(i);
    return out;
}

ReconstructedImage reconstruct(const AcquisitionLog& log, const Basis& basis) {
    switch (log.family) {
        case PatternFamily::RowMajorM:
        case PatternFamily::QuadtreeQ: return iwt_reconstruct(log, basis);
        case PatternFamily::Hadamard: return hadamard_reconstruct(log, basis);
        case PatternFamily::RandomSpeckle: return correlation_reconstruct(log, basis);
    }
    throw std::logic_error("reconstruct: bad enum");
}

}  // namespace biwave
