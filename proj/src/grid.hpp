#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace paracalc {

/// Uniform periodic grid on [-1, 1) with 2^J points, so that the interval
/// [0, 1] occupies exactly the upper half of the grid and both endpoints of
/// that interval are grid nodes. Represented frequencies are xi_m = pi*m for
/// m = 0 .. 2^{J-1} (half spectrum; the function values are real).
class TorusGrid {
public:
    static constexpr int kMinLevel = 4;
    static constexpr int kMaxLevel = 16;

    explicit TorusGrid(int level);

    int level() const { return level_; }
    std::size_t size() const { return size_; }
    std::size_t spectrum_size() const { return size_ / 2 + 1; }
    /// Number of nodes of the sub-grid covering [0, 1].
    std::size_t domain_size() const { return size_ / 2 + 1; }

    double spacing() const { return 2.0 / static_cast<double>(size_); }
    double point(std::size_t k) const {
        return -1.0 + static_cast<double>(k) * spacing();
    }
    double frequency(std::size_t m) const;
    double max_frequency() const { return frequency(size_ / 2); }

    friend bool operator==(const TorusGrid& a, const TorusGrid& b) {
        return a.level_ == b.level_;
    }

private:
    int level_;
    std::size_t size_;
};

/// A real function sampled on a TorusGrid together with its discrete Fourier
/// coefficients. Both representations are computed at construction and never
/// mutate, so instances are safely shareable across threads.
class GridFunction {
public:
    GridFunction(const TorusGrid& grid, std::vector<double> values);

    static GridFunction from_spectrum(const TorusGrid& grid,
                                      std::vector<std::complex<double>> spectrum);

    const TorusGrid& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    const std::vector<std::complex<double>>& spectrum() const { return spectrum_; }

    double sup_norm() const;

    /// Applies a real, even Fourier multiplier given by its values at the
    /// represented frequencies xi_m, m = 0..n/2.
    GridFunction apply_multiplier(const std::vector<double>& multiplier) const;

    /// Spectral derivative (multiplier i*xi). The Nyquist mode is zeroed to
    /// keep the result real.
    GridFunction derivative() const;

    /// Spectral second derivative (multiplier -(xi^2)).
    GridFunction second_derivative() const;

private:
    GridFunction(const TorusGrid& grid, std::vector<double> values,
                 std::vector<std::complex<double>> spectrum)
        : grid_(grid), values_(std::move(values)), spectrum_(std::move(spectrum)) {}

    TorusGrid grid_;
    std::vector<double> values_;
    std::vector<std::complex<double>> spectrum_;
};

GridFunction operator+(const GridFunction& a, const GridFunction& b);
GridFunction operator-(const GridFunction& a, const GridFunction& b);
GridFunction operator*(const GridFunction& a, const GridFunction& b); // pointwise
GridFunction operator*(double c, const GridFunction& a);

void require_same_grid(const TorusGrid& a, const TorusGrid& b);

} // namespace paracalc
