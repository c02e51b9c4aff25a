#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace paracalc {

/// A point (s, p) of the smoothness/integrability parameter plane in
/// dimension n. Requires 1 < p < infinity.
struct SmoothnessPoint {
    double s = 0.0;
    double p = 2.0;
    int n = 1;
};

void validate_point(const SmoothnessPoint& pt);

/// s > 1/p: the boundary condition (and hence the matrix operator) is
/// defined on H^s_p.
bool in_domain_a(const SmoothnessPoint& pt);

/// s > 1/2 + (n/p - n/2)_+ and s > n/p - 1: the quadratic transport term is
/// defined on H^s_p and has order below 2 there.
bool in_domain_n(const SmoothnessPoint& pt);

/// s + s0 > 1 + (n/p0 + n/p - n)_+: the frozen-coefficient linearization is
/// defined on H^s_p given a priori knowledge (s0, p0).
bool in_domain_lu(const SmoothnessPoint& pt, const SmoothnessPoint& apriori);

/// Order omega = 1 + (n/p0 - s0)_+ (+ epsilon exactly on the line
/// s0 = n/p0, where a strictly positive epsilon is needed).
struct OperatorOrder {
    double omega = 1.0;
    double epsilon = 0.0;
};

OperatorOrder order_omega(const SmoothnessPoint& apriori, double epsilon);

/// Sobolev embedding H^{src} -> H^{dst} on the bounded interval:
/// dst.s <= src.s and (dst.p <= src.p or the Sobolev index does not drop).
bool embeds(const SmoothnessPoint& src, const SmoothnessPoint& dst);

enum class PathMove : int { start = 0, gain = 1, embed = 2 };

struct PathStep {
    double s = 0.0;
    double p = 2.0;
    PathMove move = PathMove::start;
};

/// Result of the minimal-iteration search. `n` is empty when no N <= max_n
/// lands; `bootstrap_n` is the analogous count when every state (and the
/// target) is additionally confined to D(A) cap D(N), empty when no such
/// path exists.
struct MinimalNResult {
    std::optional<int> n;
    std::vector<PathStep> path;
    std::optional<int> bootstrap_n;
};

/// Smallest N such that N gain steps of size 2 - omega from (s0, p0), all
/// staying inside D_u = D(A) cap D(L_u), reach a state that embeds into the
/// target (t, r). Gain steps keep p fixed; a single embedding move ends the
/// path. Preconditions: apriori in D(A) cap D(N) and target in D_u; failures
/// name the violated inequality.
MinimalNResult minimal_n(const SmoothnessPoint& apriori, const SmoothnessPoint& target,
                         double epsilon, int max_n);

inline constexpr std::uint8_t kRegionA = 1;
inline constexpr std::uint8_t kRegionN = 2;
inline constexpr std::uint8_t kRegionLu = 4;
inline constexpr std::uint8_t kRegionDu = 8;

/// Per-pixel membership flags over a rectangle of the (1/p, s) plane.
/// Row-major with row index running over s (bottom row first) and column
/// index over 1/p; pixels are sampled at their centres. Pixels whose 1/p
/// falls outside (0, 1) carry no flags.
struct RegionGrid {
    int resolution = 0;
    double s_min = 0.0, s_max = 0.0;
    double invp_min = 0.0, invp_max = 0.0;
    std::vector<std::uint8_t> flags;

    double invp_at(int col) const {
        return invp_min + (static_cast<double>(col) + 0.5) * (invp_max - invp_min) /
                              static_cast<double>(resolution);
    }
    double s_at(int row) const {
        return s_min + (static_cast<double>(row) + 0.5) * (s_max - s_min) /
                           static_cast<double>(resolution);
    }
    std::uint8_t at(int row, int col) const {
        return flags[static_cast<std::size_t>(row) * static_cast<std::size_t>(resolution) +
                     static_cast<std::size_t>(col)];
    }
};

RegionGrid rasterize_domains(const SmoothnessPoint& apriori, double s_min, double s_max,
                             double invp_min, double invp_max, int resolution);

} // namespace paracalc
