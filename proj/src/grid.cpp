#include "grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "errors.hpp"
#include "fft.hpp"

namespace paracalc {

TorusGrid::TorusGrid(int level) : level_(level) {
    if (level < kMinLevel || level > kMaxLevel)
        throw PreconditionError("grid level out of range: need 4 <= J <= 16, got " +
                                std::to_string(level));
    size_ = std::size_t{1} << level;
}

double TorusGrid::frequency(std::size_t m) const {
    return std::numbers::pi * static_cast<double>(m);
}

GridFunction::GridFunction(const TorusGrid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size())
        throw PreconditionError("grid function needs 2^J samples");
    spectrum_ = fft::forward(values_);
}

GridFunction GridFunction::from_spectrum(const TorusGrid& grid,
                                         std::vector<std::complex<double>> spectrum) {
    if (spectrum.size() != grid.spectrum_size())
        throw PreconditionError("spectrum length must be 2^{J-1}+1");
    spectrum.front() = {spectrum.front().real(), 0.0};
    spectrum.back() = {spectrum.back().real(), 0.0};
    std::vector<double> values = fft::inverse(spectrum, grid.size());
    return GridFunction(grid, std::move(values), std::move(spectrum));
}

double GridFunction::sup_norm() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

GridFunction GridFunction::apply_multiplier(const std::vector<double>& multiplier) const {
    if (multiplier.size() != spectrum_.size())
        throw PreconditionError("multiplier length must match the half spectrum");
    std::vector<std::complex<double>> spec(spectrum_.size());
    for (std::size_t m = 0; m < spec.size(); ++m) spec[m] = multiplier[m] * spectrum_[m];
    return from_spectrum(grid_, std::move(spec));
}

GridFunction GridFunction::derivative() const {
    std::vector<std::complex<double>> spec(spectrum_.size());
    for (std::size_t m = 0; m + 1 < spec.size(); ++m)
        spec[m] = std::complex<double>(0.0, grid_.frequency(m)) * spectrum_[m];
    spec.back() = {0.0, 0.0}; // odd multiplier: drop the unpaired Nyquist mode
    return from_spectrum(grid_, std::move(spec));
}

GridFunction GridFunction::second_derivative() const {
    std::vector<std::complex<double>> spec(spectrum_.size());
    for (std::size_t m = 0; m < spec.size(); ++m) {
        const double xi = grid_.frequency(m);
        spec[m] = -(xi * xi) * spectrum_[m];
    }
    return from_spectrum(grid_, std::move(spec));
}

GridFunction operator+(const GridFunction& a, const GridFunction& b) {
    require_same_grid(a.grid(), b.grid());
    std::vector<double> v(a.values());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += b.values()[i];
    return GridFunction(a.grid(), std::move(v));
}

GridFunction operator-(const GridFunction& a, const GridFunction& b) {
    require_same_grid(a.grid(), b.grid());
    std::vector<double> v(a.values());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= b.values()[i];
    return GridFunction(a.grid(), std::move(v));
}

GridFunction operator*(const GridFunction& a, const GridFunction& b) {
    require_same_grid(a.grid(), b.grid());
    std::vector<double> v(a.values());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] *= b.values()[i];
    return GridFunction(a.grid(), std::move(v));
}

GridFunction operator*(double c, const GridFunction& a) {
    std::vector<double> v(a.values());
    for (double& x : v) x *= c;
    return GridFunction(a.grid(), std::move(v));
}

void require_same_grid(const TorusGrid& a, const TorusGrid& b) {
    if (!(a == b)) throw GridMismatchError("functions live on different grids");
}

} // namespace paracalc
