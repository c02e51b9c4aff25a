#pragma once

#include <optional>
#include <vector>

#include "paraproduct.hpp"

namespace paracalc {

/// Dirichlet data at the two boundary points of [0, 1].
struct BoundaryData {
    double phi0 = 0.0;
    double phi1 = 0.0;
};

/// Boundary values (u(0), u(1)), read exactly at the boundary grid nodes.
BoundaryData trace(const DomainFunction& u);

/// Zero-boundary solution operator of -u'' = f on (0, 1): discrete sine
/// transform of the interior samples, division by the sine-mode symbol
/// (k pi)^2, inverse transform. Exact on sine modes; boundary values are
/// exactly zero.
DomainFunction solve_dirichlet(const DomainFunction& f);

/// Harmonic extension of boundary data: u(x) = phi0 (1-x) + phi1 x.
DomainFunction poisson_part(const TorusGrid& grid, BoundaryData boundary);

/// Forward operator -u'' computed as the spectral second derivative of the
/// reflection extension, restricted back to [0, 1].
DomainFunction apply_a(const DomainFunction& u, int extension_order = 4);

/// One sine mode amplitude * sin(k pi x) of a manufactured solution.
struct SineMode {
    int wavenumber = 1;
    double amplitude = 0.0;
};

/// One cosine mode amplitude * cos(k pi x). Cosine loads are not sine-solver
/// eigenmodes, so instances carrying them exercise genuine discretization
/// error in the solve.
struct CosineMode {
    int wavenumber = 1;
    double amplitude = 0.0;
};

/// Data and (optional) reference solution of the model problem
/// -u'' + u u' = f, u(0) = phi0, u(1) = phi1 on a common grid.
struct ProblemInstance {
    DomainFunction f;
    BoundaryData boundary;
    std::optional<DomainFunction> reference;
};

/// Manufactured instance: u_ref = phi0 (1-x) + phi1 x + sum_k a_k sin(k pi x)
/// + sum_k b_k cos(k pi x) with f = -u_ref'' + u_ref u_ref' evaluated from
/// the closed form (never through the discrete operators) and
/// boundary = trace(u_ref).
ProblemInstance manufacture(const std::vector<SineMode>& modes, BoundaryData boundary,
                            const TorusGrid& grid);
ProblemInstance manufacture(const std::vector<SineMode>& modes,
                            const std::vector<CosineMode>& cosines,
                            BoundaryData boundary, const TorusGrid& grid);

} // namespace paracalc
