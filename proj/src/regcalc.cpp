#include "regcalc.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "errors.hpp"

namespace paracalc {

namespace {

constexpr double kEqualityTolerance = 1e-12;

double positive_part(double x) { return x > 0.0 ? x : 0.0; }

std::string describe(const SmoothnessPoint& pt) {
    std::ostringstream os;
    os << "(s=" << pt.s << ", p=" << pt.p << ", n=" << pt.n << ")";
    return os.str();
}

void require_same_dimension(const SmoothnessPoint& a, const SmoothnessPoint& b) {
    if (a.n != b.n)
        throw PreconditionError("dimension mismatch: n=" + std::to_string(a.n) +
                                " vs n=" + std::to_string(b.n));
}

} // namespace

void validate_point(const SmoothnessPoint& pt) {
    if (!(pt.p > 1.0) || std::isinf(pt.p) || !std::isfinite(pt.s))
        throw PreconditionError("smoothness point requires finite s and 1 < p < infinity");
    if (pt.n < 1) throw PreconditionError("smoothness point requires n >= 1");
}

bool in_domain_a(const SmoothnessPoint& pt) {
    validate_point(pt);
    return pt.s > 1.0 / pt.p;
}

bool in_domain_n(const SmoothnessPoint& pt) {
    validate_point(pt);
    const double np = static_cast<double>(pt.n) / pt.p;
    const double nhalf = static_cast<double>(pt.n) / 2.0;
    return pt.s > 0.5 + positive_part(np - nhalf) && pt.s > np - 1.0;
}

bool in_domain_lu(const SmoothnessPoint& pt, const SmoothnessPoint& apriori) {
    validate_point(pt);
    validate_point(apriori);
    require_same_dimension(pt, apriori);
    const double n = static_cast<double>(pt.n);
    return pt.s + apriori.s > 1.0 + positive_part(n / apriori.p + n / pt.p - n);
}

OperatorOrder order_omega(const SmoothnessPoint& apriori, double epsilon) {
    validate_point(apriori);
    if (!(epsilon >= 0.0)) throw PreconditionError("epsilon must be >= 0");
    const double np = static_cast<double>(apriori.n) / apriori.p;
    const bool on_line = std::abs(apriori.s - np) <= kEqualityTolerance;
    OperatorOrder order;
    order.epsilon = on_line ? epsilon : 0.0;
    order.omega = 1.0 + positive_part(np - apriori.s) + order.epsilon;
    return order;
}

bool embeds(const SmoothnessPoint& src, const SmoothnessPoint& dst) {
    validate_point(src);
    validate_point(dst);
    require_same_dimension(src, dst);
    if (!(dst.s <= src.s)) return false;
    if (dst.p <= src.p) return true;
    const double n = static_cast<double>(src.n);
    return src.s - n / src.p >= dst.s - n / dst.p;
}

MinimalNResult minimal_n(const SmoothnessPoint& apriori, const SmoothnessPoint& target,
                         double epsilon, int max_n) {
    validate_point(apriori);
    validate_point(target);
    require_same_dimension(apriori, target);
    if (max_n < 0) throw PreconditionError("max_n must be >= 0");

    if (!in_domain_a(apriori))
        throw PreconditionError("apriori " + describe(apriori) +
                                " violates s0 > 1/p0 (outside D(A))");
    if (!in_domain_n(apriori))
        throw PreconditionError(
            "apriori " + describe(apriori) +
            " violates s0 > 1/2 + (n/p0 - n/2)_+ or s0 > n/p0 - 1 (outside D(N))");
    if (!in_domain_a(target))
        throw PreconditionError("target " + describe(target) +
                                " violates t > 1/r (outside D(A))");
    if (!in_domain_lu(target, apriori))
        throw PreconditionError("target " + describe(target) +
                                " violates t + s0 > 1 + (n/p0 + n/r - n)_+ (outside "
                                "D(L_u))");

    const double gain = 2.0 - order_omega(apriori, epsilon).omega;
    MinimalNResult result;
    result.path.push_back({apriori.s, apriori.p, PathMove::start});

    const auto in_du = [&](const SmoothnessPoint& pt) {
        return in_domain_a(pt) && in_domain_lu(pt, apriori);
    };

    bool feasible = in_du(apriori);
    for (int n = 0; n <= max_n && feasible; ++n) {
        const SmoothnessPoint state{apriori.s + gain * static_cast<double>(n), apriori.p,
                                    apriori.n};
        if (n > 0) {
            if (!in_du(state)) {
                feasible = false;
                break;
            }
            result.path.push_back({state.s, state.p, PathMove::gain});
        }
        if (embeds(state, target)) {
            result.n = n;
            break;
        }
        if (gain <= 0.0) break; // stationary series can never land later
    }
    if (result.n) {
        result.path.resize(static_cast<std::size_t>(*result.n) + 1);
        result.path.push_back({target.s, target.p, PathMove::embed});
    } else {
        result.path.clear();
    }

    // Boot-strap comparison: the same stepping confined to D(A) cap D(N),
    // which also requires the target itself to lie there.
    const auto in_bootstrap = [&](const SmoothnessPoint& pt) {
        return in_domain_a(pt) && in_domain_n(pt);
    };
    if (in_bootstrap(target)) {
        for (int n = 0; n <= max_n; ++n) {
            const SmoothnessPoint state{apriori.s + gain * static_cast<double>(n),
                                        apriori.p, apriori.n};
            if (!in_bootstrap(state)) break;
            if (embeds(state, target)) {
                result.bootstrap_n = n;
                break;
            }
            if (gain <= 0.0) break;
        }
    }
    return result;
}

RegionGrid rasterize_domains(const SmoothnessPoint& apriori, double s_min, double s_max,
                             double invp_min, double invp_max, int resolution) {
    validate_point(apriori);
    if (resolution < 1 || resolution > 2000)
        throw PreconditionError("resolution must lie in [1, 2000]");
    if (!(s_min < s_max) || !(invp_min < invp_max))
        throw PreconditionError("degenerate window: need s_min < s_max and "
                                "invp_min < invp_max");

    RegionGrid grid;
    grid.resolution = resolution;
    grid.s_min = s_min;
    grid.s_max = s_max;
    grid.invp_min = invp_min;
    grid.invp_max = invp_max;
    grid.flags.assign(static_cast<std::size_t>(resolution) *
                          static_cast<std::size_t>(resolution),
                      0);

    for (int row = 0; row < resolution; ++row) {
        const double s = grid.s_at(row);
        for (int col = 0; col < resolution; ++col) {
            const double invp = grid.invp_at(col);
            if (!(invp > 0.0 && invp < 1.0)) continue;
            const SmoothnessPoint pt{s, 1.0 / invp, apriori.n};
            std::uint8_t flag = 0;
            if (in_domain_a(pt)) flag |= kRegionA;
            if (in_domain_n(pt)) flag |= kRegionN;
            if (in_domain_lu(pt, apriori)) flag |= kRegionLu;
            if ((flag & kRegionA) && (flag & kRegionLu)) flag |= kRegionDu;
            grid.flags[static_cast<std::size_t>(row) * static_cast<std::size_t>(resolution) +
                       static_cast<std::size_t>(col)] = flag;
        }
    }
    return grid;
}

} // namespace paracalc
