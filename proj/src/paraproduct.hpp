#pragma once

#include <vector>

#include "dyadic.hpp"
#include "grid.hpp"

namespace paracalc {

/// A function on [0, 1] sampled on the sub-grid {x_k in [0, 1]} of a
/// TorusGrid: 2^{J-1}+1 samples, the last one living on the torus node at -1.
class DomainFunction {
public:
    DomainFunction(const TorusGrid& grid, std::vector<double> values);

    const TorusGrid& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    std::size_t size() const { return values_.size(); }
    /// Position of sample i in [0, 1].
    double point(std::size_t i) const {
        return static_cast<double>(i) / static_cast<double>(values_.size() - 1);
    }
    double sup_norm() const;

private:
    TorusGrid grid_;
    std::vector<double> values_;
};

DomainFunction operator+(const DomainFunction& a, const DomainFunction& b);
DomainFunction operator-(const DomainFunction& a, const DomainFunction& b);
DomainFunction operator*(double c, const DomainFunction& a);

/// Periodic extension of u to the whole torus. The [0,1] nodes are copied
/// verbatim (so restriction is the exact left inverse); the complementary arc
/// is filled by two one-sided reflection extensions that match M one-sided
/// derivatives at x=0 and x=1, crossfaded by a smooth transition centred at
/// the mid-point x=-1/2 of the arc. Constants extend to themselves exactly
/// and the operator is linear in u. M in {2, 3, 4}.
GridFunction extend(const DomainFunction& u, int order);

/// Samples of a torus function at the [0, 1] sub-grid nodes.
DomainFunction restrict_to_domain(const GridFunction& g);

/// Paraproducts with respect to a dyadic partition:
///   kind 1: sum_{j=2}^{Jmax} (Phi_0(D)+...+Phi_{j-2}(D))g * Phi_j(D)h,
///   kind 3: the same with g and h swapped,
///   kind 2: the remainder g*h - pi_1 - pi_3, so the decomposition identity
///           pi_1 + pi_2 + pi_3 = g*h holds exactly on the grid.
GridFunction paraproduct(int kind, const GridFunction& g, const GridFunction& h,
                         const DyadicPartition& partition);

/// The linearization L_u of the quadratic transport nonlinearity u d1 u at a
/// frozen base function u, assembled from the three paraproduct terms with
/// the middle term kept inside the operator, so that L_u(u) = -u d1 u holds
/// exactly on the grid. Immutable after construction.
class Paralinearization {
public:
    Paralinearization(const DomainFunction& base, const DyadicPartition& partition,
                      int order);

    const DomainFunction& base() const { return base_; }
    const GridFunction& extended_base() const { return extended_; }
    const GridFunction& extended_base_derivative() const { return extended_deriv_; }
    const DyadicPartition& partition() const { return partition_; }
    int extension_order() const { return order_; }

    /// The torus-side sum pi_1(lu, d lv) + pi_2(lu, d lv) + pi_3(lv, d lu)
    /// for an already extended argument lv. Equals -(L_u v) before the
    /// restriction to [0, 1].
    GridFunction combine_torus(const GridFunction& lv) const;

    /// L_u v = -[pi_1(lu, d lv) + pi_2(lu, d lv) + pi_3(lv, d lu)] on [0, 1].
    DomainFunction apply(const DomainFunction& v) const;

private:
    DomainFunction base_;
    DyadicPartition partition_;
    int order_;
    GridFunction extended_;
    GridFunction extended_deriv_;
    std::vector<std::vector<double>> blocks_base_;       // Phi_j(D) lu values
    std::vector<std::vector<double>> blocks_base_deriv_; // Phi_j(D) d(lu) values
};

Paralinearization paralinearize(const DomainFunction& u, const DyadicPartition& partition,
                                int order);

} // namespace paracalc
