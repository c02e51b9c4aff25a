#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "grid.hpp"

namespace paracalc {

/// Shape of the dyadic frequency blocks. `transition` is the fraction of the
/// unit log2-band used for the raised-cosine crossfade between neighbouring
/// blocks; 1.0 (the default) makes adjacent blocks overlap over the whole
/// band, smaller values sharpen the cutoffs. Any value in (0, 1] yields an
/// exact partition of unity.
struct BlockProfile {
    double transition = 1.0;
};

/// Littlewood-Paley partition of unity on the represented frequencies of a
/// grid: block 0 covers |xi| <= 1, block j >= 1 is supported in the annulus
/// 2^{j-1} <= |xi| <= 2^{j+1}, and the top block absorbs the remaining high
/// frequencies so that the blocks sum to exactly 1 at every frequency.
/// Immutable after construction.
class DyadicPartition {
public:
    DyadicPartition(const TorusGrid& grid, BlockProfile profile = {});

    const TorusGrid& grid() const { return grid_; }
    const BlockProfile& profile() const { return profile_; }
    /// Index J_max of the absorbing top block.
    int top_block() const { return top_; }
    int block_count() const { return top_ + 1; }

    /// Multiplier values of block j at the represented frequencies.
    const std::vector<double>& block(int j) const;

    /// Frequency-block application Phi_j(D) g.
    GridFunction apply_block(int j, const GridFunction& g) const;

    /// (Phi_0(D) + ... + Phi_{j-2}(D)) g; requires j >= 2. For j >= J_max + 2
    /// the multiplier is the full partition, i.e. the identity.
    GridFunction low_pass(int j, const GridFunction& g) const;

private:
    TorusGrid grid_;
    BlockProfile profile_;
    int top_;
    std::vector<std::vector<double>> blocks_;
    std::vector<std::vector<double>> low_sums_; // low_sums_[j] = sum of blocks 0..j
};

/// Per-block L^p norms b_j = ||Phi_j(D) g||_{L^p} (grid-mean quadrature;
/// p = infinity takes the sup over the grid).
struct BlockNormProfile {
    double integrability = 2.0;
    std::vector<double> norms;
};

BlockNormProfile block_norms(const DyadicPartition& partition, const GridFunction& g,
                             double p);

/// Least-squares slope of log2 b_j against j over blocks 2..J_max-1, negated:
/// the operational smoothness exponent read off a block-norm profile. Returns
/// nothing when fewer than 4 blocks in that window are nonzero.
std::optional<double> try_estimate_smoothness(const BlockNormProfile& profile);

/// Same as try_estimate_smoothness but throws EstimationError on failure.
double estimate_smoothness(const BlockNormProfile& profile);

/// Sobolev norm surrogate. For p = 2 the exact discrete multiplier norm
/// ||(1+|xi|^2)^{s/2} g^||; for other p in (1, infinity) the Littlewood-Paley
/// square-function norm computed with the default partition. Grid-mean
/// normalization: the constant function 1 has norm 1 for every s.
double sobolev_norm(const GridFunction& g, double s, double p);

/// Real test signal with |g^(xi_m)| = (1+|xi_m|)^{-sigma-1/2} and uniformly
/// random phases drawn from the seed. Deterministic given (sigma, seed, grid).
GridFunction synthesize_rough(double sigma, std::uint64_t seed, const TorusGrid& grid);

} // namespace paracalc
