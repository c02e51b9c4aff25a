#include "paraproduct.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "errors.hpp"
#include "fft.hpp"

namespace paracalc {

namespace {

// Coefficients of the one-sided reflection extension of order M with
// contraction factors 1/i: E(-t) = sum_i c_i u(t/i). They satisfy
// sum_i c_i (1/i)^k = (-1)^k for k = 0..M-1, so M one-sided derivatives match
// at the boundary and polynomials of degree < M continue exactly.
const std::array<double, 2> kReflect2 = {-3.0, 4.0};
const std::array<double, 3> kReflect3 = {6.0, -32.0, 27.0};
const std::array<double, 4> kReflect4 = {-10.0, 160.0, -405.0, 256.0};

std::pair<const double*, int> reflection_coefficients(int order) {
    switch (order) {
        case 2: return {kReflect2.data(), 2};
        case 3: return {kReflect3.data(), 3};
        case 4: return {kReflect4.data(), 4};
        default:
            throw PreconditionError("extension order must be 2, 3 or 4, got " +
                                    std::to_string(order));
    }
}

// Evaluator of u at arbitrary y in [0, 1], exact at the nodes and exact on
// every represented frequency: u is split into an affine part, a cubic
// carrying the one-sided boundary curvature, and a remainder whose odd
// periodic continuation is smooth enough for its sine interpolant to read
// all bands faithfully. Local polynomial stencils are not used here: they
// misread the near-Nyquist content of the argument, and the reflection
// weights amplify that misreading.
class DomainSampler {
public:
    explicit DomainSampler(const std::vector<double>& u)
        : segments_(u.size() - 1), values_(u) {
        const double h = 1.0 / static_cast<double>(segments_);
        slope_ = u.back() - u.front();
        curv0_ = one_sided_curvature(u, h, false);
        curv1_ = one_sided_curvature(u, h, true);
        std::vector<double> interior(segments_ - 1);
        for (std::size_t k = 1; k < segments_; ++k) {
            const double y = static_cast<double>(k) * h;
            interior[k - 1] = u[k] - smooth_part(y);
        }
        sine_coeff_ = fft::dst1(interior);
        const double scale = 1.0 / static_cast<double>(segments_);
        for (double& c : sine_coeff_) c *= scale;
    }

    double operator()(double y) const {
        const double z = std::clamp(y, 0.0, 1.0) * static_cast<double>(segments_);
        const double nearest = std::round(z);
        if (std::abs(z - nearest) < 1e-12 * static_cast<double>(segments_))
            return values_[static_cast<std::size_t>(nearest)];
        // sin(j pi y) by recurrence over j
        const double theta = std::numbers::pi * y;
        const double two_cos = 2.0 * std::cos(theta);
        double prev = 0.0;
        double cur = std::sin(theta);
        double acc = 0.0;
        for (double c : sine_coeff_) {
            acc += c * cur;
            const double next = two_cos * cur - prev;
            prev = cur;
            cur = next;
        }
        return smooth_part(y) + acc;
    }

private:
    // affine part plus the cubic with matching one-sided curvature at both
    // ends; subtracting it leaves a remainder with (approximately) vanishing
    // values and second derivatives at the boundary, whose odd continuation
    // the sine interpolant handles at full accuracy. Exact for cubics.
    double smooth_part(double y) const {
        const double bridge0 = -y * (1.0 - y) * (2.0 - y) / 6.0; // ''(0)=1, ''(1)=0
        const double bridge1 = -y * (1.0 - y) * (1.0 + y) / 6.0; // ''(0)=0, ''(1)=1
        return values_.front() + slope_ * y + curv0_ * bridge0 + curv1_ * bridge1;
    }

    static double one_sided_curvature(const std::vector<double>& u, double h,
                                      bool at_right) {
        // 6-point one-sided second derivative, O(h^4), exact for cubics
        static constexpr double w[6] = {15.0 / 4.0,  -77.0 / 6.0, 107.0 / 6.0,
                                        -13.0,       61.0 / 12.0, -5.0 / 6.0};
        double acc = 0.0;
        const std::size_t last = u.size() - 1;
        for (int i = 0; i < 6; ++i)
            acc += w[i] * (at_right ? u[last - static_cast<std::size_t>(i)]
                                    : u[static_cast<std::size_t>(i)]);
        return acc / (h * h);
    }

    std::size_t segments_;
    const std::vector<double>& values_;
    double slope_ = 0.0;
    double curv0_ = 0.0;
    double curv1_ = 0.0;
    std::vector<double> sine_coeff_;
};

// C^infty crossfade on (0, 1): 0 near 0, 1 near 1, all derivatives vanishing
// at both ends.
double crossfade(double mu) {
    const auto f = [](double z) { return z > 0.0 ? std::exp(-1.0 / z) : 0.0; };
    const double a = f(mu);
    const double b = f(1.0 - mu);
    return a / (a + b);
}

std::vector<std::vector<double>> block_values(const DyadicPartition& partition,
                                              const GridFunction& g) {
    std::vector<std::vector<double>> out;
    out.reserve(static_cast<std::size_t>(partition.block_count()));
    for (int j = 0; j <= partition.top_block(); ++j)
        out.push_back(partition.apply_block(j, g).values());
    return out;
}

// pi_1 from precomputed block samples: running low-pass of g against the
// blocks of h, summed over j = 2..Jmax.
std::vector<double> pi1_from_blocks(const std::vector<std::vector<double>>& bg,
                                    const std::vector<std::vector<double>>& bh) {
    const std::size_t n = bg.front().size();
    std::vector<double> low(n, 0.0), acc(n, 0.0);
    for (std::size_t j = 2; j < bh.size(); ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            low[i] += bg[j - 2][i];
            acc[i] += low[i] * bh[j][i];
        }
    }
    return acc;
}

} // namespace

DomainFunction::DomainFunction(const TorusGrid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.domain_size())
        throw PreconditionError("domain function needs 2^{J-1}+1 samples, got " +
                                std::to_string(values_.size()));
}

double DomainFunction::sup_norm() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

DomainFunction operator+(const DomainFunction& a, const DomainFunction& b) {
    require_same_grid(a.grid(), b.grid());
    std::vector<double> v(a.values());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += b.values()[i];
    return DomainFunction(a.grid(), std::move(v));
}

DomainFunction operator-(const DomainFunction& a, const DomainFunction& b) {
    require_same_grid(a.grid(), b.grid());
    std::vector<double> v(a.values());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= b.values()[i];
    return DomainFunction(a.grid(), std::move(v));
}

DomainFunction operator*(double c, const DomainFunction& a) {
    std::vector<double> v(a.values());
    for (double& x : v) x *= c;
    return DomainFunction(a.grid(), std::move(v));
}

GridFunction extend(const DomainFunction& u, int order) {
    const auto [coeff, m] = reflection_coefficients(order);
    const TorusGrid& grid = u.grid();
    const std::size_t n = grid.size();
    const std::size_t half = n / 2;
    const auto& uv = u.values();

    std::vector<double> torus(n, 0.0);
    torus[0] = uv[half]; // x = 1 is the torus node at -1
    for (std::size_t i = 0; i < half; ++i) torus[half + i] = uv[i];

    const DomainSampler sample(uv);
    for (std::size_t k = 1; k < half; ++k) {
        const double mu = static_cast<double>(k) / static_cast<double>(half);
        const double s = 1.0 - mu; // distance below x = 0
        double from_left = 0.0, from_right = 0.0;
        for (int i = 0; i < m; ++i) {
            const double beta = 1.0 / static_cast<double>(i + 1);
            from_left += coeff[i] * sample(beta * s);
            from_right += coeff[i] * sample(1.0 - beta * mu);
        }
        const double w = crossfade(mu);
        torus[k] = w * from_left + (1.0 - w) * from_right;
    }
    return GridFunction(grid, std::move(torus));
}

DomainFunction restrict_to_domain(const GridFunction& g) {
    const std::size_t half = g.grid().size() / 2;
    std::vector<double> out(half + 1);
    for (std::size_t i = 0; i < half; ++i) out[i] = g.values()[half + i];
    out[half] = g.values()[0];
    return DomainFunction(g.grid(), std::move(out));
}

GridFunction paraproduct(int kind, const GridFunction& g, const GridFunction& h,
                         const DyadicPartition& partition) {
    require_same_grid(g.grid(), h.grid());
    require_same_grid(g.grid(), partition.grid());
    if (kind == 3) return paraproduct(1, h, g, partition);
    if (kind != 1 && kind != 2)
        throw PreconditionError("paraproduct kind must be 1, 2 or 3");

    const auto bg = block_values(partition, g);
    const auto bh = block_values(partition, h);
    if (kind == 1)
        return GridFunction(g.grid(), pi1_from_blocks(bg, bh));

    // kind 2: exact remainder of the decomposition.
    const auto p1 = pi1_from_blocks(bg, bh);
    const auto p3 = pi1_from_blocks(bh, bg);
    std::vector<double> out(g.values());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = out[i] * h.values()[i] - p1[i] - p3[i];
    return GridFunction(g.grid(), std::move(out));
}

Paralinearization::Paralinearization(const DomainFunction& base,
                                     const DyadicPartition& partition, int order)
    : base_(base),
      partition_(partition),
      order_(order),
      extended_(extend(base, order)),
      extended_deriv_(extended_.derivative()),
      blocks_base_(block_values(partition_, extended_)),
      blocks_base_deriv_(block_values(partition_, extended_deriv_)) {
    require_same_grid(base.grid(), partition.grid());
}

GridFunction Paralinearization::combine_torus(const GridFunction& lv) const {
    require_same_grid(lv.grid(), partition_.grid());
    const GridFunction dlv = lv.derivative();
    const auto blocks_lv = block_values(partition_, lv);
    const auto blocks_dlv = block_values(partition_, dlv);

    const auto near = pi1_from_blocks(blocks_base_, blocks_dlv);  // pi_1(lu, d lv)
    const auto swap = pi1_from_blocks(blocks_dlv, blocks_base_);  // pi_3(lu, d lv)
    const auto cross = pi1_from_blocks(blocks_base_deriv_, blocks_lv); // pi_3(lv, d lu)

    std::vector<double> out(lv.grid().size());
    const auto& lu = extended_.values();
    const auto& dv = dlv.values();
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double remainder = (lu[i] * dv[i] - near[i]) - swap[i]; // pi_2
        out[i] = (near[i] + remainder) + cross[i];
    }
    return GridFunction(lv.grid(), std::move(out));
}

DomainFunction Paralinearization::apply(const DomainFunction& v) const {
    require_same_grid(v.grid(), base_.grid());
    const GridFunction sum = combine_torus(extend(v, order_));
    return -1.0 * restrict_to_domain(sum);
}

Paralinearization paralinearize(const DomainFunction& u, const DyadicPartition& partition,
                                int order) {
    return Paralinearization(u, partition, order);
}

} // namespace paracalc
