#pragma once

#include <optional>
#include <vector>

#include "green.hpp"
#include "paraproduct.hpp"

namespace paracalc {

/// Parameters of the finite Neumann series built on R L_u. series_len = N is
/// the number of terms: N = 0 is the zero operator and N = 1 the identity.
struct ParametrixConfig {
    static constexpr int kMaxSeriesLen = 64;
    int series_len = 1;
    int extension_order = 4;
};

/// The composite R L_u: paralinearized transport term pushed through the
/// zero-boundary solution operator.
DomainFunction apply_rl(const Paralinearization& lin, const DomainFunction& v);

/// sum_{k=0}^{N-1} (R L_u)^k w, accumulated Horner style:
/// w + R L_u (w + R L_u (...)).
DomainFunction apply_parametrix(const Paralinearization& lin, int series_len,
                                const DomainFunction& w);

struct ResidualResult {
    DomainFunction residual;
    double sup = 0.0;
};

/// Residual of the inversion formula
///   u = P^(N)(R f + K phi) + (smoothing remainder) + (R L_u)^N u
/// for the given instance; the smoothing remainder slot is identically zero
/// because the Dirichlet solve is exact. The continuum identity is exact, so
/// the residual measures pure discretization error.
ResidualResult parametrix_residual(const ProblemInstance& instance,
                                   const DomainFunction& u,
                                   const DyadicPartition& partition,
                                   ParametrixConfig config);

/// Block-decay exponents of the iterates w_k = (R L_u)^k u for k = 0..N,
/// measured on their torus extensions, and the per-iterate gains
/// delta_k = sigma_{k+1} - sigma_k. Slots are empty when the iterate is too
/// concentrated spectrally for the regression (estimator saturated).
struct SmoothingReport {
    std::vector<std::optional<double>> sigma;
    std::vector<std::optional<double>> gain;
};

SmoothingReport smoothing_profile(const DomainFunction& u, const DyadicPartition& partition,
                                  ParametrixConfig config, double p);

} // namespace paracalc
