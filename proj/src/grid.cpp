#include "css/grid.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <mutex>
#include <numbers>

namespace css {

namespace {

std::mutex warning_mutex;
WarningHandler warning_handler = [](const std::string& m) { std::cerr << "warning: " << m << '\n'; };

// Sixth-order second-derivative stencil, coefficients / (180 h^2).
constexpr double kLap[4] = {-490.0, 270.0, -27.0, 2.0};

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace

void set_warning_handler(WarningHandler handler) {
    std::lock_guard lock(warning_mutex);
    warning_handler = std::move(handler);
}

void warn(const std::string& message) {
    std::lock_guard lock(warning_mutex);
    if (warning_handler) warning_handler(message);
}

double norm(Point p) { return std::hypot(p.x1, p.x2); }
double distance(Point a, Point b) { return norm(a - b); }

Grid2D::Grid2D(double half_width, std::size_t n, Point center)
    : half_width_(half_width), n_(n), center_(center) {
    if (!(half_width > 0.0) || !std::isfinite(half_width))
        throw Error(ErrorKind::Parameter, "grid half_width must be positive");
    if (n < 16 || !is_power_of_two(n))
        throw Error(ErrorKind::Parameter, "grid n must be a power of two >= 16");
}

double Grid2D::margin(Point p) const {
    const double lo = -half_width_;
    const double hi = half_width_ - spacing();
    const double d1 = std::min(p.x1 - center_.x1 - lo, hi - (p.x1 - center_.x1));
    const double d2 = std::min(p.x2 - center_.x2 - lo, hi - (p.x2 - center_.x2));
    return std::min(d1, d2);
}

Field2D::Field2D(Grid2D grid) : grid_(grid), values_(grid.size(), 0.0) {}

Field2D::Field2D(Grid2D grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size()) throw Error(ErrorKind::Parameter, "field size does not match grid");
}

Field2D Field2D::sample(const Grid2D& grid, const std::function<double(Point)>& f) {
    Field2D out(grid);
    const std::size_t n = grid.n();
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) out.at(i, j) = f(grid.point(i, j));
    return out;
}

void require_same_grid(const Field2D& a, const Field2D& b) {
    if (!(a.grid() == b.grid())) throw Error(ErrorKind::Parameter, "grid mismatch");
}

Field2D& Field2D::operator+=(const Field2D& o) {
    require_same_grid(*this, o);
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += o.values_[k];
    return *this;
}

Field2D& Field2D::operator-=(const Field2D& o) {
    require_same_grid(*this, o);
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= o.values_[k];
    return *this;
}

Field2D& Field2D::operator*=(double s) {
    for (double& v : values_) v *= s;
    return *this;
}

Field2D& Field2D::axpy(double s, const Field2D& o) {
    require_same_grid(*this, o);
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += s * o.values_[k];
    return *this;
}

bool Field2D::all_finite() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double Field2D::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

double Field2D::max() const { return *std::max_element(values_.begin(), values_.end()); }
double Field2D::min() const { return *std::min_element(values_.begin(), values_.end()); }

Field2D multiply(const Field2D& a, const Field2D& b) {
    require_same_grid(a, b);
    Field2D out(a.grid());
    for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] * b[k];
    return out;
}

double integrate(const Field2D& f) {
    double sum = 0.0;
    for (double v : f.values()) {
        if (!std::isfinite(v)) throw Error(ErrorKind::Numeric, "non-finite field");
        sum += v;
    }
    const double h = f.grid().spacing();
    return h * h * sum;
}

double dot(const Field2D& a, const Field2D& b) {
    require_same_grid(a, b);
    double sum = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) sum += a[k] * b[k];
    if (!std::isfinite(sum)) throw Error(ErrorKind::Numeric, "non-finite field");
    const double h = a.grid().spacing();
    return h * h * sum;
}

std::pair<Field2D, Field2D> gradient(const Field2D& f) {
    if (!f.all_finite()) throw Error(ErrorKind::Numeric, "non-finite field");
    const Grid2D& g = f.grid();
    const std::size_t n = g.n();
    const double inv2h = 1.0 / (2.0 * g.spacing());
    Field2D d1(g), d2(g);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            if (i == 0)
                d1.at(i, j) = (-3.0 * f.at(0, j) + 4.0 * f.at(1, j) - f.at(2, j)) * inv2h;
            else if (i == n - 1)
                d1.at(i, j) = (3.0 * f.at(n - 1, j) - 4.0 * f.at(n - 2, j) + f.at(n - 3, j)) * inv2h;
            else
                d1.at(i, j) = (f.at(i + 1, j) - f.at(i - 1, j)) * inv2h;

            if (j == 0)
                d2.at(i, j) = (-3.0 * f.at(i, 0) + 4.0 * f.at(i, 1) - f.at(i, 2)) * inv2h;
            else if (j == n - 1)
                d2.at(i, j) = (3.0 * f.at(i, n - 1) - 4.0 * f.at(i, n - 2) + f.at(i, n - 3)) * inv2h;
            else
                d2.at(i, j) = (f.at(i, j + 1) - f.at(i, j - 1)) * inv2h;
        }
    }
    return {std::move(d1), std::move(d2)};
}

std::pair<Field2D, Field2D> gradient_sixth_order(const Field2D& f) {
    auto [d1, d2] = gradient(f);
    const Grid2D& g = f.grid();
    const std::size_t n = g.n();
    const double c[3] = {45.0 / 60.0, -9.0 / 60.0, 1.0 / 60.0};
    const double inv_h = 1.0 / g.spacing();
    for (std::size_t j = 3; j + 3 < n; ++j)
        for (std::size_t i = 3; i + 3 < n; ++i) {
            double s1 = 0.0, s2 = 0.0;
            for (std::size_t k = 1; k <= 3; ++k) {
                s1 += c[k - 1] * (f.at(i + k, j) - f.at(i - k, j));
                s2 += c[k - 1] * (f.at(i, j + k) - f.at(i, j - k));
            }
            d1.at(i, j) = s1 * inv_h;
            d2.at(i, j) = s2 * inv_h;
        }
    return {std::move(d1), std::move(d2)};
}

Field2D laplacian(const Field2D& f) {
    const Grid2D& g = f.grid();
    const std::size_t n = g.n();
    const double scale = 1.0 / (180.0 * g.spacing() * g.spacing());
    Field2D out(g);
    auto wrap = [n](std::size_t i, long d) { return static_cast<std::size_t>((static_cast<long>(i) + d + static_cast<long>(n)) % static_cast<long>(n)); };
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            double acc = 2.0 * kLap[0] * f.at(i, j);
            for (long d = 1; d <= 3; ++d) {
                acc += kLap[d] * (f.at(wrap(i, d), j) + f.at(wrap(i, -d), j));
                acc += kLap[d] * (f.at(i, wrap(j, d)) + f.at(i, wrap(j, -d)));
            }
            out.at(i, j) = acc * scale;
        }
    }
    return out;
}

double laplacian_symbol(double theta) {
    return -(kLap[0] + 2.0 * kLap[1] * std::cos(theta) + 2.0 * kLap[2] * std::cos(2.0 * theta) +
             2.0 * kLap[3] * std::cos(3.0 * theta)) /
           180.0;
}

double boundary_ring_max(const Field2D& f) {
    const std::size_t n = f.grid().n();
    double m = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        m = std::max({m, std::abs(f.at(k, 0)), std::abs(f.at(k, n - 1)), std::abs(f.at(0, k)),
                      std::abs(f.at(n - 1, k))});
    }
    return m;
}

double inner_half_max(const Field2D& f) {
    const Grid2D& g = f.grid();
    const double lim = 0.5 * g.half_width();
    double m = 0.0;
    for (std::size_t j = 0; j < g.n(); ++j) {
        for (std::size_t i = 0; i < g.n(); ++i) {
            const Point p = g.point(i, j) - g.center();
            if (std::abs(p.x1) < lim && std::abs(p.x2) < lim) m = std::max(m, std::abs(f.at(i, j)));
        }
    }
    return m;
}

double kernel_value(KernelId kernel, long m1, long m2, double h) {
    const double two_pi = 2.0 * std::numbers::pi;
    if (m1 == 0 && m2 == 0) {
        if (kernel == KernelId::Log) {
            // Average of log|x| over the disk with the cell's area: log(R) - 1/2.
            const double radius = h / std::sqrt(std::numbers::pi);
            return (std::log(radius) - 0.5) / two_pi;
        }
        return 0.0;
    }
    const double x1 = static_cast<double>(m1) * h;
    const double x2 = static_cast<double>(m2) * h;
    const double r2 = x1 * x1 + x2 * x2;
    // The punctured lattice sum of K_i misses h^2/(4 pi) d_i f; a centred difference of that
    // term folds into the nearest neighbours along axis i as a factor 5/4.
    const bool k1_neighbour = m2 == 0 && (m1 == 1 || m1 == -1);
    const bool k2_neighbour = m1 == 0 && (m2 == 1 || m2 == -1);
    switch (kernel) {
        case KernelId::K1: return (k1_neighbour ? 1.25 : 1.0) * -x1 / (two_pi * r2);
        case KernelId::K2: return (k2_neighbour ? 1.25 : 1.0) * -x2 / (two_pi * r2);
        case KernelId::Log: return 0.5 * std::log(r2) / two_pi;
    }
    return 0.0;
}

}  // namespace css
