#include "css/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

namespace css {

namespace {

// The FFTW planner is not thread-safe; executing existing plans is.
std::mutex planner_mutex;

using GridKey = std::tuple<double, std::size_t, double, double>;

GridKey key_of(const Grid2D& g) { return {g.half_width(), g.n(), g.center().x1, g.center().x2}; }

}  // namespace

template <class T>
T* FftwAllocator<T>::allocate(std::size_t n) {
    void* p = fftw_malloc(n * sizeof(T));
    if (!p) throw std::bad_alloc();
    return static_cast<T*>(p);
}

template <class T>
void FftwAllocator<T>::deallocate(T* p, std::size_t) noexcept {
    fftw_free(p);
}

template struct FftwAllocator<double>;
template struct FftwAllocator<std::complex<double>>;

std::shared_ptr<const ConvolutionEngine> ConvolutionEngine::for_grid(const Grid2D& grid) {
    static std::mutex cache_mutex;
    static std::map<GridKey, std::shared_ptr<const ConvolutionEngine>> cache;
    std::lock_guard lock(cache_mutex);
    auto& slot = cache[key_of(grid)];
    if (!slot) slot = std::shared_ptr<const ConvolutionEngine>(new ConvolutionEngine(grid));
    return slot;
}

ConvolutionEngine::ConvolutionEngine(const Grid2D& grid) : grid_(grid), padded_(2 * grid.n()) {
    const int m = static_cast<int>(padded_);
    const std::size_t half = padded_ / 2 + 1;
    RealBuffer real(padded_ * padded_);
    Spectrum spec(padded_ * half);
    {
        // FFTW_ESTIMATE keeps the chosen algorithm, and so the rounding, identical run to run.
        std::lock_guard lock(planner_mutex);
        forward_plan_ = fftw_plan_dft_r2c_2d(m, m, real.data(), reinterpret_cast<fftw_complex*>(spec.data()),
                                             FFTW_ESTIMATE);
        inverse_plan_ = fftw_plan_dft_c2r_2d(m, m, reinterpret_cast<fftw_complex*>(spec.data()), real.data(),
                                             FFTW_ESTIMATE);
    }
    const long n = static_cast<long>(grid.n());
    const double h = grid.spacing();
    const KernelId ids[3] = {KernelId::K1, KernelId::K2, KernelId::Log};
    for (int k = 0; k < 3; ++k) {
        for (long j = 0; j < 2 * n; ++j) {
            const long m2 = j < n ? j : j - 2 * n;
            for (long i = 0; i < 2 * n; ++i) {
                const long m1 = i < n ? i : i - 2 * n;
                // Offsets of magnitude n never occur between points of the box.
                const bool unused = (m1 == -n) || (m2 == -n);
                real[static_cast<std::size_t>(j) * padded_ + static_cast<std::size_t>(i)] =
                    unused ? 0.0 : kernel_value(ids[k], m1, m2, h) * h * h;
            }
        }
        kernels_[k].assign(padded_ * half, {});
        fftw_execute_dft_r2c(static_cast<fftw_plan>(forward_plan_), real.data(),
                             reinterpret_cast<fftw_complex*>(kernels_[k].data()));
    }
}

ConvolutionEngine::~ConvolutionEngine() {
    std::lock_guard lock(planner_mutex);
    fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
    fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
}

Spectrum ConvolutionEngine::forward(const Field2D& f) const {
    if (!(f.grid() == grid_)) throw Error(ErrorKind::Parameter, "grid mismatch");
    const std::size_t n = grid_.n();
    RealBuffer real(padded_ * padded_, 0.0);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) real[j * padded_ + i] = f.at(i, j);
    Spectrum out(padded_ * (padded_ / 2 + 1));
    fftw_execute_dft_r2c(static_cast<fftw_plan>(forward_plan_), real.data(),
                         reinterpret_cast<fftw_complex*>(out.data()));
    return out;
}

Field2D ConvolutionEngine::inverse(const Spectrum& s) const {
    Spectrum work(s);
    RealBuffer real(padded_ * padded_);
    fftw_execute_dft_c2r(static_cast<fftw_plan>(inverse_plan_), reinterpret_cast<fftw_complex*>(work.data()),
                         real.data());
    const std::size_t n = grid_.n();
    const double norm = 1.0 / static_cast<double>(padded_ * padded_);
    Field2D out(grid_);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) out.at(i, j) = real[j * padded_ + i] * norm;
    return out;
}

const Spectrum& ConvolutionEngine::kernel(KernelId id) const { return kernels_[static_cast<int>(id)]; }

Spectrum ConvolutionEngine::combine(
    std::initializer_list<std::tuple<double, KernelId, const Spectrum*>> terms) const {
    Spectrum out(padded_ * (padded_ / 2 + 1), {0.0, 0.0});
    for (const auto& [coeff, id, spec] : terms) {
        const Spectrum& k = kernel(id);
        for (std::size_t q = 0; q < out.size(); ++q) out[q] += coeff * k[q] * (*spec)[q];
    }
    return out;
}

Field2D convolve_free_space(KernelId kernel, const Field2D& f) {
    if (!f.all_finite()) throw Error(ErrorKind::Numeric, "non-finite field");
    const double peak = f.max_abs();
    if (peak > 0.0 && boundary_ring_max(f) > 1e-6 * peak) warn("domain truncation suspect");
    const auto engine = ConvolutionEngine::for_grid(f.grid());
    const Spectrum s = engine->forward(f);
    return engine->inverse(engine->combine({{1.0, kernel, &s}}));
}

std::shared_ptr<const PeriodicEngine> PeriodicEngine::for_grid(const Grid2D& grid) {
    static std::mutex cache_mutex;
    static std::map<GridKey, std::shared_ptr<const PeriodicEngine>> cache;
    std::lock_guard lock(cache_mutex);
    auto& slot = cache[key_of(grid)];
    if (!slot) slot = std::shared_ptr<const PeriodicEngine>(new PeriodicEngine(grid));
    return slot;
}

PeriodicEngine::PeriodicEngine(const Grid2D& grid) : grid_(grid) {
    const std::size_t n = grid.n();
    const std::size_t half = n / 2 + 1;
    RealBuffer real(n * n);
    Spectrum spec(n * half);
    {
        std::lock_guard lock(planner_mutex);
        const int m = static_cast<int>(n);
        forward_plan_ =
            fftw_plan_dft_r2c_2d(m, m, real.data(), reinterpret_cast<fftw_complex*>(spec.data()), FFTW_ESTIMATE);
        inverse_plan_ =
            fftw_plan_dft_c2r_2d(m, m, reinterpret_cast<fftw_complex*>(spec.data()), real.data(), FFTW_ESTIMATE);
    }
    const double h2 = grid.spacing() * grid.spacing();
    symbol_.resize(n * half);
    for (std::size_t j = 0; j < n; ++j) {
        const double t2 = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
        for (std::size_t i = 0; i < half; ++i) {
            const double t1 = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
            symbol_[j * half + i] = (laplacian_symbol(t1) + laplacian_symbol(t2)) / h2;
        }
    }
}

PeriodicEngine::~PeriodicEngine() {
    std::lock_guard lock(planner_mutex);
    fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
    fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
}

Field2D PeriodicEngine::helmholtz(const Field2D& f, double a, double b) const {
    if (!(f.grid() == grid_)) throw Error(ErrorKind::Parameter, "grid mismatch");
    const std::size_t n = grid_.n();
    RealBuffer real(f.values().begin(), f.values().end());
    Spectrum spec(n * (n / 2 + 1));
    fftw_execute_dft_r2c(static_cast<fftw_plan>(forward_plan_), real.data(),
                         reinterpret_cast<fftw_complex*>(spec.data()));
    const double norm = 1.0 / static_cast<double>(n * n);
    for (std::size_t q = 0; q < spec.size(); ++q) spec[q] *= norm / (a * symbol_[q] + b);
    fftw_execute_dft_c2r(static_cast<fftw_plan>(inverse_plan_), reinterpret_cast<fftw_complex*>(spec.data()),
                         real.data());
    return Field2D(grid_, std::vector<double>(real.begin(), real.end()));
}

Field2D solve_helmholtz(const Field2D& f, double a, double b) {
    if (a < 0.0 || !(b > 0.0)) throw Error(ErrorKind::Parameter, "helmholtz requires a >= 0, b > 0");
    return PeriodicEngine::for_grid(f.grid())->helmholtz(f, a, b);
}

}  // namespace css
