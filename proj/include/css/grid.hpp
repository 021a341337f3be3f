#pragma once

// Uniform 2D grids, sampled scalar fields, discrete calculus and quadrature.
//
// A grid covers the square [c - hw, c + hw)^2 with n points per axis and
// spacing 2 hw / n. Values are stored row-major: index = j * n + i, where i
// runs along x1 and j along x2.

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "css/error.hpp"

namespace css {

struct Point {
    double x1 = 0.0;
    double x2 = 0.0;

    friend Point operator+(Point a, Point b) { return {a.x1 + b.x1, a.x2 + b.x2}; }
    friend Point operator-(Point a, Point b) { return {a.x1 - b.x1, a.x2 - b.x2}; }
    friend Point operator*(double s, Point a) { return {s * a.x1, s * a.x2}; }
    friend bool operator==(Point a, Point b) = default;
};

double norm(Point p);
double distance(Point a, Point b);

class Grid2D {
public:
    /// Throws Error(Parameter) unless n >= 16 is a power of two and half_width > 0.
    Grid2D(double half_width, std::size_t n, Point center = {});

    double half_width() const { return half_width_; }
    std::size_t n() const { return n_; }
    std::size_t size() const { return n_ * n_; }
    double spacing() const { return 2.0 * half_width_ / static_cast<double>(n_); }
    Point center() const { return center_; }

    double x1(std::size_t i) const { return center_.x1 - half_width_ + static_cast<double>(i) * spacing(); }
    double x2(std::size_t j) const { return center_.x2 - half_width_ + static_cast<double>(j) * spacing(); }
    Point point(std::size_t i, std::size_t j) const { return {x1(i), x2(j)}; }
    std::size_t index(std::size_t i, std::size_t j) const { return j * n_ + i; }

    /// Distance from p to the nearest edge of the box (negative if outside).
    double margin(Point p) const;

    friend bool operator==(const Grid2D&, const Grid2D&) = default;

private:
    double half_width_;
    std::size_t n_;
    Point center_;
};

class Field2D {
public:
    explicit Field2D(Grid2D grid);
    Field2D(Grid2D grid, std::vector<double> values);

    static Field2D sample(const Grid2D& grid, const std::function<double(Point)>& f);

    const Grid2D& grid() const { return grid_; }
    std::size_t size() const { return values_.size(); }
    std::span<double> values() { return values_; }
    std::span<const double> values() const { return values_; }
    double& operator[](std::size_t k) { return values_[k]; }
    double operator[](std::size_t k) const { return values_[k]; }
    double& at(std::size_t i, std::size_t j) { return values_[grid_.index(i, j)]; }
    double at(std::size_t i, std::size_t j) const { return values_[grid_.index(i, j)]; }

    Field2D& operator+=(const Field2D& o);
    Field2D& operator-=(const Field2D& o);
    Field2D& operator*=(double s);
    /// this += s * o
    Field2D& axpy(double s, const Field2D& o);

    friend Field2D operator+(Field2D a, const Field2D& b) { return a += b; }
    friend Field2D operator-(Field2D a, const Field2D& b) { return a -= b; }
    friend Field2D operator*(double s, Field2D a) { return a *= s; }

    bool all_finite() const;
    double max_abs() const;
    double max() const;
    double min() const;

private:
    Grid2D grid_;
    std::vector<double> values_;
};

/// Throws Error(Parameter, "grid mismatch") when the grids differ.
void require_same_grid(const Field2D& a, const Field2D& b);

/// Pointwise product.
Field2D multiply(const Field2D& a, const Field2D& b);

/// spacing^2 * sum of values. Throws Error(Numeric, "non-finite field").
double integrate(const Field2D& f);

/// spacing^2 * sum of a*b.
double dot(const Field2D& a, const Field2D& b);

/// Centered second-order differences in the interior, second-order one-sided
/// differences on the boundary rows/columns. Returns (d/dx1, d/dx2).
std::pair<Field2D, Field2D> gradient(const Field2D& f);

/// Sixth-order centred differences at least three points from the edge, `gradient` elsewhere.
std::pair<Field2D, Field2D> gradient_sixth_order(const Field2D& f);

/// Sixth-order accurate discrete Laplacian on the periodic box. Fields used
/// with it decay to ~0 at the box edge, so periodic closure and zero extension
/// agree to truncation level. The stencil is symmetric negative semidefinite.
Field2D laplacian(const Field2D& f);

/// Symbol of the discrete Laplacian along one axis at angular wavenumber theta
/// (= -(stencil eigenvalue)), multiplied by spacing^2.
double laplacian_symbol(double theta);

/// Largest |value| on the outermost ring of grid points.
double boundary_ring_max(const Field2D& f);

/// Largest |value| over points within the inner half-box (|x - c|_inf < hw/2).
double inner_half_max(const Field2D& f);

/// Free-space convolution kernels:
///   K1(x) = -x1 / (2 pi |x|^2),  K2(x) = -x2 / (2 pi |x|^2),
///   Log(x) = log|x| / (2 pi).
enum class KernelId { K1, K2, Log };

/// Aperiodic discrete convolution (kernel * f)(x_i) = h^2 sum_j kernel(x_i - x_j) f(x_j),
/// evaluated by zero padding to 2n per axis and FFT. The kernel origin value is
/// 0 for K1/K2 and the equal-area-disk cell average of Log. The K_i weights at the
/// two nearest neighbours along axis i carry the singular-quadrature correction,
/// which makes the K_i sums fourth-order accurate for smooth f.
/// Emits a "domain truncation suspect" warning if f is non-negligible on the boundary ring.
Field2D convolve_free_space(KernelId kernel, const Field2D& f);

/// Value of the discrete kernel array at lattice offset (m1, m2) for spacing h.
double kernel_value(KernelId kernel, long m1, long m2, double h);

/// Solves (a (-laplacian) + b) x = f exactly on the periodic box (a >= 0, b > 0).
Field2D solve_helmholtz(const Field2D& f, double a, double b);

}  // namespace css
