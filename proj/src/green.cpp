#include "green.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "errors.hpp"
#include "fft.hpp"

namespace paracalc {

namespace {

// sin(k pi i / segments) with exact zeros whenever the argument is an integer
// multiple of pi, so traces of sine modes vanish exactly.
double sine_node(long k, long i, long segments) {
    if ((k * i) % segments == 0) return 0.0;
    return std::sin(std::numbers::pi * static_cast<double>(k * i) /
                    static_cast<double>(segments));
}

double cosine_node(long k, long i, long segments) {
    return std::cos(std::numbers::pi * static_cast<double>(k * i) /
                    static_cast<double>(segments));
}

} // namespace

BoundaryData trace(const DomainFunction& u) {
    return {u.values().front(), u.values().back()};
}

DomainFunction solve_dirichlet(const DomainFunction& f) {
    const std::size_t segments = f.size() - 1;
    std::vector<double> interior(f.values().begin() + 1, f.values().end() - 1);
    std::vector<double> coeff = fft::dst1(interior);
    for (std::size_t j = 0; j < coeff.size(); ++j) {
        const double mode = std::numbers::pi * static_cast<double>(j + 1);
        coeff[j] /= mode * mode;
    }
    std::vector<double> solved = fft::dst1(coeff);
    const double scale = 1.0 / (2.0 * static_cast<double>(segments));
    std::vector<double> out(f.size(), 0.0);
    for (std::size_t i = 0; i < solved.size(); ++i) out[i + 1] = solved[i] * scale;
    return DomainFunction(f.grid(), std::move(out));
}

DomainFunction poisson_part(const TorusGrid& grid, BoundaryData boundary) {
    const std::size_t count = grid.domain_size();
    const auto segments = static_cast<double>(count - 1);
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double x = static_cast<double>(i) / segments;
        out[i] = boundary.phi0 * (1.0 - x) + boundary.phi1 * x;
    }
    out.front() = boundary.phi0;
    out.back() = boundary.phi1;
    return DomainFunction(grid, std::move(out));
}

DomainFunction apply_a(const DomainFunction& u, int extension_order) {
    return -1.0 * restrict_to_domain(extend(u, extension_order).second_derivative());
}

ProblemInstance manufacture(const std::vector<SineMode>& modes, BoundaryData boundary,
                            const TorusGrid& grid) {
    return manufacture(modes, {}, boundary, grid);
}

ProblemInstance manufacture(const std::vector<SineMode>& modes,
                            const std::vector<CosineMode>& cosines,
                            BoundaryData boundary, const TorusGrid& grid) {
    const auto limit = std::size_t{1} << (grid.level() - 3);
    if (modes.size() + cosines.size() > limit)
        throw PreconditionError("too many modes: need count <= 2^{J-3} = " +
                                std::to_string(limit));
    const long segments = static_cast<long>(grid.domain_size()) - 1;
    for (const auto& mode : modes)
        if (mode.wavenumber < 1 || mode.wavenumber >= segments)
            throw PreconditionError("mode wavenumber must lie in [1, 2^{J-1})");
    for (const auto& mode : cosines)
        if (mode.wavenumber < 1 || mode.wavenumber >= segments)
            throw PreconditionError("mode wavenumber must lie in [1, 2^{J-1})");

    const double slope = boundary.phi1 - boundary.phi0;
    std::vector<double> u(grid.domain_size());
    std::vector<double> f(grid.domain_size());
    for (long i = 0; i <= segments; ++i) {
        const double x = static_cast<double>(i) / static_cast<double>(segments);
        double value = boundary.phi0 + slope * x;
        double deriv = slope;
        double curv = 0.0; // u''
        for (const auto& mode : modes) {
            const double kpi = std::numbers::pi * static_cast<double>(mode.wavenumber);
            const double sn = sine_node(mode.wavenumber, i, segments);
            const double cn = cosine_node(mode.wavenumber, i, segments);
            value += mode.amplitude * sn;
            deriv += mode.amplitude * kpi * cn;
            curv -= mode.amplitude * kpi * kpi * sn;
        }
        for (const auto& mode : cosines) {
            const double kpi = std::numbers::pi * static_cast<double>(mode.wavenumber);
            const double sn = sine_node(mode.wavenumber, i, segments);
            const double cn = cosine_node(mode.wavenumber, i, segments);
            value += mode.amplitude * cn;
            deriv -= mode.amplitude * kpi * sn;
            curv -= mode.amplitude * kpi * kpi * cn;
        }
        u[static_cast<std::size_t>(i)] = value;
        f[static_cast<std::size_t>(i)] = -curv + value * deriv;
    }

    DomainFunction reference(grid, std::move(u));
    ProblemInstance instance{DomainFunction(grid, std::move(f)), trace(reference),
                             std::move(reference)};
    return instance;
}

} // namespace paracalc
