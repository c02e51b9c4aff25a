#include "dyadic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "errors.hpp"

namespace paracalc {

namespace {

// Cosine crossfade: 1 for z <= 0, 0 for z >= 1, exact at the ends so block
// supports are sharp.
double ramp_down(double z) {
    if (z <= 0.0) return 1.0;
    if (z >= 1.0) return 0.0;
    return 0.5 * (1.0 + std::cos(std::numbers::pi * z));
}

// Canonical block profile as a function of tau = log2|xi| - j. Support is
// |tau| <= (1+lambda)/2 and translates of the profile sum to 1.
double bump(double tau, double lambda) {
    const double z = (std::abs(tau) - 0.5 * (1.0 - lambda)) / lambda;
    return ramp_down(z);
}

double grid_mean_lp(const std::vector<double>& v, double p) {
    if (std::isinf(p)) {
        double m = 0.0;
        for (double x : v) m = std::max(m, std::abs(x));
        return m;
    }
    double acc = 0.0;
    for (double x : v) acc += std::pow(std::abs(x), p);
    return std::pow(acc / static_cast<double>(v.size()), 1.0 / p);
}

// Uniform double in [0,1) from the raw generator output; avoids the
// implementation-defined std::uniform_real_distribution.
double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1p-53;
}

} // namespace

DyadicPartition::DyadicPartition(const TorusGrid& grid, BlockProfile profile)
    : grid_(grid), profile_(profile) {
    if (!(profile.transition > 0.0) || profile.transition > 1.0)
        throw PreconditionError("block profile transition must lie in (0, 1]");

    // Largest j whose annulus reaches the top represented frequency.
    const double max_freq = grid_.max_frequency();
    int top = 1;
    while (std::exp2(top) <= max_freq) ++top;
    top_ = top;

    const std::size_t half = grid_.spectrum_size();
    const double lambda = profile_.transition;
    blocks_.assign(static_cast<std::size_t>(top_) + 1, std::vector<double>(half, 0.0));

    for (std::size_t m = 0; m < half; ++m) {
        const double xi = grid_.frequency(m);
        const double tau = (m == 0) ? -std::numeric_limits<double>::infinity()
                                    : std::log2(xi);
        blocks_[0][m] = (m == 0) ? 1.0
                                 : ramp_down((tau - 0.5 * (1.0 - lambda)) / lambda);
        double below_top = blocks_[0][m];
        for (int j = 1; j < top_; ++j) {
            blocks_[static_cast<std::size_t>(j)][m] = bump(tau - j, lambda);
            below_top += blocks_[static_cast<std::size_t>(j)][m];
        }
        // The top block absorbs the tail so the sum is exactly 1.
        blocks_[static_cast<std::size_t>(top_)][m] = std::max(0.0, 1.0 - below_top);
    }

    low_sums_.assign(blocks_.size(), std::vector<double>(half, 0.0));
    for (std::size_t j = 0; j < blocks_.size(); ++j)
        for (std::size_t m = 0; m < half; ++m)
            low_sums_[j][m] = (j == 0 ? 0.0 : low_sums_[j - 1][m]) + blocks_[j][m];
}

const std::vector<double>& DyadicPartition::block(int j) const {
    if (j < 0 || j > top_)
        throw IndexRangeError("block index out of range: need 0 <= j <= " +
                              std::to_string(top_) + ", got " + std::to_string(j));
    return blocks_[static_cast<std::size_t>(j)];
}

GridFunction DyadicPartition::apply_block(int j, const GridFunction& g) const {
    require_same_grid(grid_, g.grid());
    return g.apply_multiplier(block(j));
}

GridFunction DyadicPartition::low_pass(int j, const GridFunction& g) const {
    require_same_grid(grid_, g.grid());
    if (j < 2)
        throw IndexRangeError("low_pass requires j >= 2, got " + std::to_string(j));
    const int upto = std::min(j - 2, top_);
    return g.apply_multiplier(low_sums_[static_cast<std::size_t>(upto)]);
}

BlockNormProfile block_norms(const DyadicPartition& partition, const GridFunction& g,
                             double p) {
    if (!(p > 1.0))
        throw PreconditionError("block_norms requires p > 1");
    BlockNormProfile profile;
    profile.integrability = p;
    profile.norms.reserve(static_cast<std::size_t>(partition.block_count()));
    for (int j = 0; j <= partition.top_block(); ++j)
        profile.norms.push_back(grid_mean_lp(partition.apply_block(j, g).values(), p));
    return profile;
}

std::optional<double> try_estimate_smoothness(const BlockNormProfile& profile) {
    const auto& b = profile.norms;
    if (b.size() < 4) return std::nullopt;
    const std::size_t top = b.size() - 1;
    std::vector<std::pair<double, double>> pts; // (j, log2 b_j)
    for (std::size_t j = 2; j + 1 <= top; ++j)
        if (b[j] > 0.0) pts.emplace_back(static_cast<double>(j), std::log2(b[j]));
    if (pts.size() < 4) return std::nullopt;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double m = static_cast<double>(pts.size());
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    return -slope;
}

double estimate_smoothness(const BlockNormProfile& profile) {
    if (auto s = try_estimate_smoothness(profile)) return *s;
    throw EstimationError(
        "smoothness estimation needs at least 4 nonzero blocks between j=2 and the "
        "top block");
}

double sobolev_norm(const GridFunction& g, double s, double p) {
    if (!(p > 1.0) || std::isinf(p))
        throw PreconditionError("sobolev_norm requires 1 < p < infinity");
    if (!(s >= -8.0 && s <= 8.0))
        throw PreconditionError("sobolev_norm requires -8 <= s <= 8");
    if (p == 2.0) {
        const auto& spec = g.spectrum();
        const std::size_t last = spec.size() - 1;
        double acc = 0.0;
        for (std::size_t m = 0; m < spec.size(); ++m) {
            const double xi = g.grid().frequency(m);
            const double weight = (m == 0 || m == last) ? 1.0 : 2.0;
            acc += weight * std::pow(1.0 + xi * xi, s) * std::norm(spec[m]);
        }
        return std::sqrt(acc);
    }
    DyadicPartition partition(g.grid());
    std::vector<double> sq(g.grid().size(), 0.0);
    for (int j = 0; j <= partition.top_block(); ++j) {
        const double w = std::pow(4.0, s * static_cast<double>(j));
        const auto piece = partition.apply_block(j, g).values();
        for (std::size_t i = 0; i < sq.size(); ++i) sq[i] += w * piece[i] * piece[i];
    }
    for (double& x : sq) x = std::sqrt(x);
    return grid_mean_lp(sq, p);
}

GridFunction synthesize_rough(double sigma, std::uint64_t seed, const TorusGrid& grid) {
    if (!(sigma > 0.0)) throw PreconditionError("synthesize_rough requires sigma > 0");
    std::mt19937_64 rng(seed);
    const std::size_t half = grid.spectrum_size();
    std::vector<std::complex<double>> spec(half);
    spec[0] = {1.0, 0.0};
    for (std::size_t m = 1; m + 1 < half; ++m) {
        const double mag = std::pow(1.0 + grid.frequency(m), -sigma - 0.5);
        const double theta = 2.0 * std::numbers::pi * uniform01(rng);
        spec[m] = std::polar(mag, theta);
    }
    spec[half - 1] = {std::pow(1.0 + grid.max_frequency(), -sigma - 0.5), 0.0};
    return GridFunction::from_spectrum(grid, std::move(spec));
}

} // namespace paracalc
