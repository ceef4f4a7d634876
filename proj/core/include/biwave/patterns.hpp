#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "biwave/image.hpp"
#include "biwave/rng.hpp"

namespace biwave {

enum class PatternFamily { RowMajorM, QuadtreeQ, Hadamard, RandomSpeckle };

/// Detail orientation of a quadtree-family wavelet. None for everything else.
enum class Orientation : std::uint8_t { None, Horizontal, Vertical, Diagonal };

inline bool is_haar(PatternFamily f) {
    return f == PatternFamily::RowMajorM || f == PatternFamily::QuadtreeQ;
}

std::string family_name(PatternFamily f);
PatternFamily family_from_name(const std::string& name);

/// Evaluates the Haar step function: 1 on [0, 1/2), -1 on [1/2, 1), 0 elsewhere.
int mother_wavelet(double t);

/// One ternary illumination pattern, stored as a descriptor. Entries are
/// derived on demand; only the nonzero support is ever touched for the
/// structured families.
struct Pattern {
    PatternFamily family = PatternFamily::RowMajorM;
    int n = 0;               // side in pixels
    std::size_t index = 0;   // ordinal j in the basis
    int level = -1;          // scaling level s; -1 marks the DC pattern
    std::int64_t shift = 0;  // row-major shift k, or block column for quadtree
    std::int64_t shift2 = 0; // block row for quadtree
    Orientation orient = Orientation::None;
    double weight = 1.0;     // orthonormalization scalar, never baked into entries
    std::uint64_t seed = 0;  // speckle realization key

    bool is_dc() const { return level < 0 && family != PatternFamily::RandomSpeckle; }

    /// Squared weight as an exact power of two. weight * weight rounds when
    /// the weight itself is irrational, which matters for synthesis: partial
    /// sums over empty regions must cancel exactly for integer scenes.
    double weight_sq() const;

    /// Entry at a row-major flat pixel index, in {-1, 0, +1}.
    int entry_at(std::size_t pixel) const;
    int entry(int row, int col) const { return entry_at(static_cast<std::size_t>(row) * n + col); }

    /// Materialized n*n entries, row-major. Intended for small n.
    std::vector<std::int8_t> dense() const;

    /// Calls f(pixel, sign) for every nonzero entry. Structured families
    /// visit only their support.
    template <class F>
    void for_each_nonzero(F&& f) const;
};

/// Half-open index range [begin, end) of one scaling-level cluster.
struct ClusterRange {
    std::size_t begin = 0;
    std::size_t end = 0;
    std::size_t size() const { return end - begin; }
};

/// Complete pattern set for one family at side n: exactly n*n patterns,
/// ordered level-major, partitioned into coarse-to-fine clusters.
struct Basis {
    PatternFamily family = PatternFamily::RowMajorM;
    int n = 0;
    std::uint64_t seed = 0;
    std::vector<Pattern> patterns;
    std::vector<ClusterRange> clusters;

    std::size_t size() const { return patterns.size(); }
    /// Cluster ordinal (0 = DC) owning pattern j.
    std::size_t cluster_of(std::size_t j) const;
};

/// Builds the full basis. Deterministic given (family, n, seed).
/// n must be a power of two for the structured families.
Basis make_basis(PatternFamily family, int n, std::uint64_t seed = 0);

/// Next-level patterns whose support lies inside the closure of pattern j's
/// support (for DC: the whole first wavelet level). Haar families only.
std::vector<std::size_t> children_of(const Basis& basis, std::size_t j);

/// Wavelet-level ancestors of pattern j (coarser levels, DC excluded),
/// nearest level first. Haar families only.
std::vector<std::size_t> ancestors_of(const Basis& basis, std::size_t j);

/// Immediate parents: the previous-level patterns whose support contains
/// pattern j's support (one for the row-major family, the three orientations
/// of the containing block for the quadtree family). Empty for DC and the
/// first wavelet level.
std::vector<std::size_t> parents_of(const Basis& basis, std::size_t j);

/// Compact one-line run-length encoding `j s shift orient w RLE...` used by
/// golden-file tests and the CLI export.
std::string pattern_rle_line(const Pattern& p);

// --- inline implementation ---

namespace detail {
inline int speckle_entry(std::uint64_t seed, std::size_t index, std::size_t pixel) {
    return static_cast<int>(mix_key(seed, index, pixel) & 1u);
}
}  // namespace detail

template <class F>
void Pattern::for_each_nonzero(F&& f) const {
    const std::size_t total = static_cast<std::size_t>(n) * n;
    switch (family) {
        case PatternFamily::RowMajorM: {
            if (level < 0) {
                for (std::size_t p = 0; p < total; ++p) f(p, 1);
                return;
            }
            const std::size_t len = total >> level;
            const std::size_t start = static_cast<std::size_t>(shift) * len;
            const std::size_t mid = start + len / 2;
            for (std::size_t p = start; p < mid; ++p) f(p, 1);
            for (std::size_t p = mid; p < start + len; ++p) f(p, -1);
            return;
        }
        case PatternFamily::QuadtreeQ: {
            if (level < 0) {
                for (std::size_t p = 0; p < total; ++p) f(p, 1);
                return;
            }
            const int m = n >> level;  // block side
            const int half = m / 2;
            const int x0 = static_cast<int>(shift) * m;
            const int y0 = static_cast<int>(shift2) * m;
            for (int v = 0; v < m; ++v) {
                const std::size_t rowbase = static_cast<std::size_t>(y0 + v) * n + x0;
                for (int u = 0; u < m; ++u) {
                    int sign;
                    switch (orient) {
                        case Orientation::Horizontal: sign = u < half ? 1 : -1; break;
                        case Orientation::Vertical:   sign = v < half ? 1 : -1; break;
                        default:                      sign = ((u < half) == (v < half)) ? 1 : -1; break;
                    }
                    f(rowbase + u, sign);
                }
            }
            return;
        }
        case PatternFamily::Hadamard: {
            for (std::size_t p = 0; p < total; ++p)
                f(p, (std::popcount(index & p) & 1u) ? -1 : 1);
            return;
        }
        case PatternFamily::RandomSpeckle: {
            for (std::size_t p = 0; p < total; ++p)
                if (detail::speckle_entry(seed, index, p)) f(p, 1);
            return;
        }
    }
}

}  // namespace biwave
