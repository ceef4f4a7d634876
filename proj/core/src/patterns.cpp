#include "biwave/patterns.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace biwave {

std::string family_name(PatternFamily f) {
    switch (f) {
        case PatternFamily::RowMajorM: return "m";
        case PatternFamily::QuadtreeQ: return "q";
        case PatternFamily::Hadamard: return "hadamard";
        case PatternFamily::RandomSpeckle: return "speckle";
    }
    throw std::logic_error("family_name: bad enum");
}

PatternFamily family_from_name(const std::string& name) {
    if (name == "m" || name == "biwave") return PatternFamily::RowMajorM;
    if (name == "q" || name == "quadtree") return PatternFamily::QuadtreeQ;
    if (name == "hadamard" || name == "hcgi") return PatternFamily::Hadamard;
    if (name == "speckle" || name == "rcgi") return PatternFamily::RandomSpeckle;
    throw std::invalid_argument("unknown pattern family: " + name);
}

int mother_wavelet(double t) {
    if (t >= 0.0 && t < 0.5) return 1;
    if (t >= 0.5 && t < 1.0) return -1;
    return 0;
}

double Pattern::weight_sq() const {
    const int q = 2 * ilog2(n);
    switch (family) {
        case PatternFamily::RowMajorM: return std::ldexp(1.0, level < 0 ? -q : level - q);
        case PatternFamily::QuadtreeQ: return std::ldexp(1.0, level < 0 ? -q : 2 * level - q);
        case PatternFamily::Hadamard: return std::ldexp(1.0, -q);
        case PatternFamily::RandomSpeckle: return 1.0;
    }
    throw std::logic_error("weight_sq: bad enum");
}

int Pattern::entry_at(std::size_t pixel) const {
    switch (family) {
        case PatternFamily::RowMajorM: {
            if (level < 0) return 1;
            const std::size_t total = static_cast<std::size_t>(n) * n;
            const std::size_t len = total >> level;
            const std::size_t start = static_cast<std::size_t>(shift) * len;
            if (pixel < start || pixel >= start + len) return 0;
            return pixel < start + len / 2 ? 1 : -1;
        }
        case PatternFamily::QuadtreeQ: {
            if (level < 0) return 1;
            const int m = n >> level;
            const int half = m / 2;
            const int col = static_cast<int>(pixel % n);
            const int row = static_cast<int>(pixel / n);
            const int u = col - static_cast<int>(shift) * m;
            const int v = row - static_cast<int>(shift2) * m;
            if (u < 0 || u >= m || v < 0 || v >= m) return 0;
            switch (orient) {
                case Orientation::Horizontal: return u < half ? 1 : -1;
                case Orientation::Vertical: return v < half ? 1 : -1;
                default: return ((u < half) == (v < half)) ? 1 : -1;
            }
        }
        case PatternFamily::Hadamard:
            return (std::popcount(index & pixel) & 1u) ? -1 : 1;
        case PatternFamily::RandomSpeckle:
            return detail::speckle_entry(seed, index, pixel);
    }
    throw std::logic_error("entry_at: bad enum");
}

std::vector<std::int8_t> Pattern::dense() const {
    std::vector<std::int8_t> out(static_cast<std::size_t>(n) * n, 0);
    for_each_nonzero([&](std::size_t p, int sign) { out[p] = static_cast<std::int8_t>(sign); });
    return out;
}

std::size_t Basis::cluster_of(std::size_t j) const {
    for (std::size_t c = 0; c < clusters.size(); ++c)
        if (j >= clusters[c].begin && j < clusters[c].end) return c;
    throw std::out_of_range("cluster_of: pattern index out of range");
}

namespace {

Basis make_row_major(int n) {
    Basis b;
    b.family = PatternFamily::RowMajorM;
    b.n = n;
    const std::size_t total = static_cast<std::size_t>(n) * n;
    const int q = ilog2(static_cast<int>(total));
    b.patterns.reserve(total);

    Pattern dc{PatternFamily::RowMajorM, n, 0, -1, 0, 0, Orientation::None, 1.0 / n, 0};
    b.patterns.push_back(dc);
    b.clusters.push_back({0, 1});

    for (int s = 0; s < q; ++s) {
        const std::size_t begin = b.patterns.size();
        const double w = std::sqrt(std::ldexp(1.0, s - q));
        for (std::int64_t k = 0; k < (std::int64_t{1} << s); ++k) {
            Pattern p{PatternFamily::RowMajorM, n, b.patterns.size(), s, k, 0, Orientation::None, w, 0};
            b.patterns.push_back(p);
        }
        b.clusters.push_back({begin, b.patterns.size()});
    }
    return b;
}

Basis make_quadtree(int n) {
    Basis b;
    b.family = PatternFamily::QuadtreeQ;
    b.n = n;
    const int levels = ilog2(n);
    b.patterns.reserve(static_cast<std::size_t>(n) * n);

    Pattern dc{PatternFamily::QuadtreeQ, n, 0, -1, 0, 0, Orientation::None, 1.0 / n, 0};
    b.patterns.push_back(dc);
    b.clusters.push_back({0, 1});

    for (int s = 0; s < levels; ++s) {
        const std::size_t begin = b.patterns.size();
        const double w = std::ldexp(1.0, s) / n;  // 1 / block-side
        const std::int64_t blocks = std::int64_t{1} << s;
        for (Orientation o : {Orientation::Horizontal, Orientation::Vertical, Orientation::Diagonal}) {
            for (std::int64_t beta = 0; beta < blocks; ++beta) {
                for (std::int64_t alpha = 0; alpha < blocks; ++alpha) {
                    Pattern p{PatternFamily::QuadtreeQ, n, b.patterns.size(), s, alpha, beta, o, w, 0};
                    b.patterns.push_back(p);
                }
            }
        }
        b.clusters.push_back({begin, b.patterns.size()});
    }
    return b;
}

Basis make_hadamard(int n) {
    Basis b;
    b.family = PatternFamily::Hadamard;
    b.n = n;
    const std::size_t total = static_cast<std::size_t>(n) * n;
    const double w = 1.0 / std::sqrt(static_cast<double>(total));
    b.patterns.reserve(total);
    for (std::size_t j = 0; j < total; ++j)
        b.patterns.push_back({PatternFamily::Hadamard, n, j, j == 0 ? -1 : 0, 0, 0, Orientation::None, w, 0});
    b.clusters.push_back({0, 1});
    if (total > 1) b.clusters.push_back({1, total});
    return b;
}

Basis make_speckle(int n, std::uint64_t seed) {
    Basis b;
    b.family = PatternFamily::RandomSpeckle;
    b.n = n;
    b.seed = seed;
    const std::size_t total = static_cast<std::size_t>(n) * n;
    b.patterns.reserve(total);
    for (std::size_t j = 0; j < total; ++j)
        b.patterns.push_back({PatternFamily::RandomSpeckle, n, j, 0, 0, 0, Orientation::None, 1.0, seed});
    b.clusters.push_back({0, total});
    return b;
}

}  // namespace

Basis make_basis(PatternFamily family, int n, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("make_basis: n must be >= 2");
    if (family != PatternFamily::RandomSpeckle && !is_power_of_two(n))
        throw std::invalid_argument("make_basis: n must be a power of two for structured families");
    switch (family) {
        case PatternFamily::RowMajorM: return make_row_major(n);
        case PatternFamily::QuadtreeQ: return make_quadtree(n);
        case PatternFamily::Hadamard: return make_hadamard(n);
        case PatternFamily::RandomSpeckle: return make_speckle(n, seed);
    }
    throw std::logic_error("make_basis: bad enum");
}

std::vector<std::size_t> children_of(const Basis& basis, std::size_t j) {
    if (!is_haar(basis.family))
        throw std::invalid_argument("children_of: baseline families have no multiresolution structure");
    if (j >= basis.size()) throw std::out_of_range("children_of: bad pattern index");
    const Pattern& p = basis.patterns[j];
    const int last_level = static_cast<int>(basis.clusters.size()) - 2;  // clusters = DC + levels

    std::vector<std::size_t> out;
    if (p.level < 0) {
        const ClusterRange& first = basis.clusters[1];
        for (std::size_t c = first.begin; c < first.end; ++c) out.push_back(c);
        return out;
    }
    if (p.level >= last_level) return out;

    if (basis.family == PatternFamily::RowMajorM) {
        const std::size_t base = basis.clusters[static_cast<std::size_t>(p.level) + 2].begin;
        out.push_back(base + 2 * static_cast<std::size_t>(p.shift));
        out.push_back(base + 2 * static_cast<std::size_t>(p.shift) + 1);
    } else {
        const ClusterRange& next = basis.clusters[static_cast<std::size_t>(p.level) + 2];
        const std::size_t blocks = std::size_t{1} << (p.level + 1);
        const std::size_t per_orient = blocks * blocks;
        for (std::size_t o = 0; o < 3; ++o)
            for (std::int64_t db = 0; db < 2; ++db)
                for (std::int64_t da = 0; da < 2; ++da)
                    out.push_back(next.begin + o * per_orient +
                                  static_cast<std::size_t>(2 * p.shift2 + db) * blocks +
                                  static_cast<std::size_t>(2 * p.shift + da));
    }
    return out;
}

std::vector<std::size_t> ancestors_of(const Basis& basis, std::size_t j) {
    if (!is_haar(basis.family))
        throw std::invalid_argument("ancestors_of: baseline families have no multiresolution structure");
    if (j >= basis.size()) throw std::out_of_range("ancestors_of: bad pattern index");
    const Pattern& p = basis.patterns[j];
    std::vector<std::size_t> out;
    if (p.level < 0) return out;

    if (basis.family == PatternFamily::RowMajorM) {
        for (int s = p.level - 1; s >= 0; --s) {
            const std::size_t base = basis.clusters[static_cast<std::size_t>(s) + 1].begin;
            out.push_back(base + static_cast<std::size_t>(p.shift >> (p.level - s)));
        }
    } else {
        for (int s = p.level - 1; s >= 0; --s) {
            const ClusterRange& cl = basis.clusters[static_cast<std::size_t>(s) + 1];
            const std::size_t blocks = std::size_t{1} << s;
            const std::size_t per_orient = blocks * blocks;
            const std::size_t a = static_cast<std::size_t>(p.shift >> (p.level - s));
            const std::size_t bb = static_cast<std::size_t>(p.shift2 >> (p.level - s));
            for (std::size_t o = 0; o < 3; ++o)
                out.push_back(cl.begin + o * per_orient + bb * blocks + a);
        }
    }
    return out;
}

std::vector<std::size_t> parents_of(const Basis& basis, std::size_t j) {
    if (!is_haar(basis.family))
        throw std::invalid_argument("parents_of: baseline families have no multiresolution structure");
    if (j >= basis.size()) throw std::out_of_range("parents_of: bad pattern index");
    const Pattern& p = basis.patterns[j];
    std::vector<std::size_t> out;
    if (p.level < 1) return out;

    if (basis.family == PatternFamily::RowMajorM) {
        const std::size_t base = basis.clusters[static_cast<std::size_t>(p.level)].begin;
        out.push_back(base + static_cast<std::size_t>(p.shift >> 1));
    } else {
        const ClusterRange& cl = basis.clusters[static_cast<std::size_t>(p.level)];
        const std::size_t blocks = std::size_t{1} << (p.level - 1);
        const std::size_t per_orient = blocks * blocks;
        const std::size_t pos = static_cast<std::size_t>(p.shift2 >> 1) * blocks +
                                static_cast<std::size_t>(p.shift >> 1);
        for (std::size_t o = 0; o < 3; ++o) out.push_back(cl.begin + o * per_orient + pos);
    }
    return out;
}

std::string pattern_rle_line(const Pattern& p) {
    static const char* orient_tag = "-hvd";
    std::ostringstream os;
    os << p.index << ' ' << p.level << ' ' << p.shift;
    if (p.family == PatternFamily::QuadtreeQ) os << ',' << p.shift2;
    os << ' ' << orient_tag[static_cast<int>(p.orient)] << ' ' << p.weight;

    const std::size_t total = static_cast<std::size_t>(p.n) * p.n;
    int run_val = p.entry_at(0);
    std::size_t run_len = 1;
    auto flush = [&] { os << ' ' << run_len << 'x' << run_val; };
    for (std::size_t i = 1; i < total; ++i) {
        const int v = p.entry_at(i);
        if (v == run_val) {
            ++run_len;
        } else {
            flush();
            run_val = v;
            run_len = 1;
        }
    }
    flush();
    return os.str();
}

}  // namespace biwave
