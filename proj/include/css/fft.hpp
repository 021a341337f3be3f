#pragma once

// FFT-backed free-space convolution engine. One engine per grid geometry is
// cached process-wide; it owns the padded transform plans and the spectra of
// the three kernels.

#include <complex>
#include <initializer_list>
#include <tuple>
#include <memory>
#include <vector>

#include "css/grid.hpp"

namespace css {

template <class T>
struct FftwAllocator {
    using value_type = T;
    FftwAllocator() = default;
    template <class U>
    FftwAllocator(const FftwAllocator<U>&) {}
    T* allocate(std::size_t n);
    void deallocate(T* p, std::size_t) noexcept;
    template <class U>
    bool operator==(const FftwAllocator<U>&) const { return true; }
};

using RealBuffer = std::vector<double, FftwAllocator<double>>;
using Spectrum = std::vector<std::complex<double>, FftwAllocator<std::complex<double>>>;

class ConvolutionEngine {
public:
    static std::shared_ptr<const ConvolutionEngine> for_grid(const Grid2D& grid);

    ~ConvolutionEngine();
    ConvolutionEngine(const ConvolutionEngine&) = delete;
    ConvolutionEngine& operator=(const ConvolutionEngine&) = delete;

    const Grid2D& grid() const { return grid_; }

    /// Zero-padded forward transform of f.
    Spectrum forward(const Field2D& f) const;
    /// Inverse transform cropped to the original box.
    Field2D inverse(const Spectrum& s) const;
    /// Spectrum of the kernel array times spacing^2.
    const Spectrum& kernel(KernelId id) const;

    /// sum_t coeff_t * kernel_t * spectrum_t, pointwise in frequency space.
    Spectrum combine(std::initializer_list<std::tuple<double, KernelId, const Spectrum*>> terms) const;

private:
    explicit ConvolutionEngine(const Grid2D& grid);

    Grid2D grid_;
    std::size_t padded_;
    void* forward_plan_ = nullptr;
    void* inverse_plan_ = nullptr;
    Spectrum kernels_[3];
};

/// Periodic box transforms used by solve_helmholtz.
class PeriodicEngine {
public:
    static std::shared_ptr<const PeriodicEngine> for_grid(const Grid2D& grid);
    ~PeriodicEngine();
    PeriodicEngine(const PeriodicEngine&) = delete;
    PeriodicEngine& operator=(const PeriodicEngine&) = delete;

    /// Solves (a (-laplacian) + b) x = f.
    Field2D helmholtz(const Field2D& f, double a, double b) const;

private:
    explicit PeriodicEngine(const Grid2D& grid);
    Grid2D grid_;
    void* forward_plan_ = nullptr;
    void* inverse_plan_ = nullptr;
    std::vector<double> symbol_;  // -laplacian symbol per (k2, k1) half-spectrum entry
};

}  // namespace css
