#include "fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>

namespace paracalc::fft {

namespace {

// FFTW plan creation/destruction is not thread safe; execution is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

} // namespace

std::vector<std::complex<double>> forward(const std::vector<double>& values) {
    const std::size_t n = values.size();
    if (n < 2 || (n & (n - 1)) != 0)
        throw std::invalid_argument("fft: length must be a power of two >= 2");
    std::vector<double> in(values);
    std::vector<std::complex<double>> out(n / 2 + 1);
    fftw_plan plan;
    {
        std::lock_guard lock(planner_mutex());
        plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(),
                                    reinterpret_cast<fftw_complex*>(out.data()),
                                    FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
    const double scale = 1.0 / static_cast<double>(n);
    for (auto& c : out) c *= scale;
    return out;
}

std::vector<double> inverse(const std::vector<std::complex<double>>& spectrum,
                            std::size_t n) {
    if (spectrum.size() != n / 2 + 1)
        throw std::invalid_argument("fft: spectrum length does not match n");
    // c2r destroys its input, so work on a sanitized copy.
    std::vector<std::complex<double>> in(spectrum);
    in.front() = {in.front().real(), 0.0};
    in.back() = {in.back().real(), 0.0};
    std::vector<double> out(n);
    fftw_plan plan;
    {
        std::lock_guard lock(planner_mutex());
        plan = fftw_plan_dft_c2r_1d(static_cast<int>(n),
                                    reinterpret_cast<fftw_complex*>(in.data()),
                                    out.data(), FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
    return out;
}

std::vector<double> dst1(const std::vector<double>& values) {
    if (values.empty()) return {};
    std::vector<double> in(values);
    std::vector<double> out(values.size());
    fftw_plan plan;
    {
        std::lock_guard lock(planner_mutex());
        plan = fftw_plan_r2r_1d(static_cast<int>(values.size()), in.data(),
                                out.data(), FFTW_RODFT00, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
    return out;
}

} // namespace paracalc::fft
