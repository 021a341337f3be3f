#include "css/ground_state.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/numeric/odeint.hpp>

namespace css {

namespace {

using State = std::array<double, 2>;

enum class Shot { Under, Over };

struct Trajectory {
    Shot kind = Shot::Under;
    std::vector<double> u;   // samples at nodes i * dr, up to the event
    std::vector<double> du;
};

struct RadialOde {
    double p, v0;
    void operator()(const State& y, State& dy, double r) const {
        dy[0] = y[1];
        const double nonlinear = std::pow(std::abs(y[0]), p - 2.0) * y[0];
        dy[1] = -y[1] / r + v0 * y[0] - nonlinear;
    }
};

// Integrates from the series start until U < 0 (Over), U' > 0 (Under) or the horizon.
Trajectory shoot(double u0, double p, double v0, double horizon, double dr, std::size_t record_nodes) {
    namespace odeint = boost::numeric::odeint;
    const double r0 = 1e-5;
    const double c = 0.5 * (v0 * u0 - std::pow(u0, p - 1.0));
    State y{u0 + 0.5 * c * r0 * r0, c * r0};
    auto stepper = odeint::make_dense_output(1e-14, 1e-13, odeint::runge_kutta_dopri5<State>());
    const RadialOde ode{p, v0};
    stepper.initialize(y, r0, 1e-4);

    Trajectory out;
    if (record_nodes > 0) {
        out.u.push_back(u0);
        out.du.push_back(0.0);
    }
    std::size_t next = 1;
    while (stepper.current_time() < horizon) {
        stepper.do_step(std::cref(ode));
        const double t = stepper.current_time();
        while (next < record_nodes && static_cast<double>(next) * dr <= t) {
            State s;
            stepper.calc_state(static_cast<double>(next) * dr, s);
            out.u.push_back(s[0]);
            out.du.push_back(s[1]);
            ++next;
        }
        const State& s = stepper.current_state();
        if (s[0] < 0.0) {
            out.kind = Shot::Over;
            return out;
        }
        if (s[1] > 0.0) {
            out.kind = Shot::Under;
            return out;
        }
    }
    // Undecided at the horizon: U(0) is exact to working precision.
    out.kind = Shot::Under;
    return out;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

RadialProfile RadialProfile::from_samples(std::vector<double> r, std::vector<double> u, std::vector<double> du,
                                          double p, double v0) {
    if (r.size() < 3 || u.size() != r.size() || du.size() != r.size())
        throw Error(ErrorKind::Parameter, "profile samples must have matching sizes >= 3");
    RadialProfile prof;
    prof.p = p;
    prof.v0 = v0;
    prof.dr = r[1] - r[0];
    prof.r_max = r.back();
    prof.u0 = u.front();
    prof.r = std::move(r);
    prof.u = std::move(u);
    prof.du = std::move(du);
    return prof;
}

double RadialProfile::value(double radius) const {
    if (radius >= r_max) return 0.0;
    const std::size_t i = std::min(static_cast<std::size_t>(radius / dr), r.size() - 2);
    const double t = (radius - r[i]) / dr;
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * u[i] + (t3 - 2 * t2 + t) * dr * du[i] + (-2 * t3 + 3 * t2) * u[i + 1] +
           (t3 - t2) * dr * du[i + 1];
}

double RadialProfile::derivative(double radius) const {
    if (radius >= r_max) return 0.0;
    const std::size_t i = std::min(static_cast<std::size_t>(radius / dr), r.size() - 2);
    const double t = (radius - r[i]) / dr;
    const double t2 = t * t;
    return ((6 * t2 - 6 * t) * u[i] + (-6 * t2 + 6 * t) * u[i + 1]) / dr + (3 * t2 - 4 * t + 1) * du[i] +
           (3 * t2 - 2 * t) * du[i + 1];
}

namespace {

template <class F>
double simpson_radial(const RadialProfile& prof, F f) {
    std::size_t last = prof.r.size() - 1;
    if (last % 2) --last;
    double s = 0.0;
    for (std::size_t i = 0; i <= last; ++i) {
        const double w = (i == 0 || i == last) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        s += w * prof.r[i] * f(i);
    }
    return 2.0 * std::numbers::pi * s * prof.dr / 3.0;
}

}  // namespace

double RadialProfile::integral_pow(double q) const {
    return simpson_radial(*this, [&](std::size_t i) { return std::pow(std::abs(u[i]), q); });
}

double RadialProfile::integral_grad_sq() const {
    return simpson_radial(*this, [&](std::size_t i) { return du[i] * du[i]; });
}

double RadialProfile::equation_residual() const {
    double worst = 0.0;
    for (std::size_t i = 2; i + 2 < r.size(); ++i) {
        const double upp = (-du[i + 2] + 8.0 * du[i + 1] - 8.0 * du[i - 1] + du[i - 2]) / (12.0 * dr);
        const double res = -upp - du[i] / r[i] + v0 * u[i] - std::pow(std::abs(u[i]), p - 2.0) * u[i];
        worst = std::max(worst, std::abs(res));
    }
    return worst;
}

RadialProfile solve_ground_state(double p, double v0, double tol, const GroundStateOptions& options) {
    if (!(p > 2.0)) throw Error(ErrorKind::Parameter, "exponent p must exceed 2");
    if (!(v0 > 0.0)) throw Error(ErrorKind::Parameter, "v0 must be positive");
    if (!(tol > 0.0) || tol > 1e-6) throw Error(ErrorKind::Parameter, "tol must lie in (0, 1e-6]");
    if (!(options.r_max > 1.0) || !(options.dr > 0.0))
        throw Error(ErrorKind::Parameter, "invalid radial discretization");

    const double horizon = std::max(options.shooting_horizon, options.r_max) / std::sqrt(v0);
    const double constant_state = std::pow(v0, 1.0 / (p - 2.0));

    double lo = constant_state * (1.0 + 1e-6);
    if (shoot(lo, p, v0, horizon, options.dr, 0).kind != Shot::Under)
        throw Error(ErrorKind::Solver, "no ground state bracket");
    double hi = 2.0 * constant_state;
    while (shoot(hi, p, v0, horizon, options.dr, 0).kind != Shot::Over) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e6 * constant_state) throw Error(ErrorKind::Solver, "no ground state bracket");
    }
    // Bisect to working precision; the requested tol is an upper bound on the final width.
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (shoot(mid, p, v0, horizon, options.dr, 0).kind == Shot::Over ? hi : lo) = mid;
    }
    if (hi - lo > tol * lo) throw Error(ErrorKind::Solver, "ground state bisection did not converge");

    const std::size_t nodes = static_cast<std::size_t>(std::llround(options.r_max / options.dr)) + 1;
    const Trajectory under = shoot(lo, p, v0, horizon, options.dr, nodes);
    const Trajectory over = shoot(hi, p, v0, horizon, options.dr, nodes);

    // The two bracketing trajectories agree until the growing mode takes over.
    // Beyond that point the nonlinearity is negligible and the decaying solution
    // of the linear equation, a multiple of K0(sqrt(v0) r), continues the profile.
    const std::size_t common = std::min(under.u.size(), over.u.size());
    std::size_t split = common - 1;
    for (std::size_t i = 1; i < common; ++i) {
        const double mean = 0.5 * (under.u[i] + over.u[i]);
        if (std::abs(under.u[i] - over.u[i]) > 1e-9 * mean || under.du[i] >= 0.0 || over.u[i] <= 0.0) {
            split = i > 8 ? i - 8 : 1;
            break;
        }
    }
    const double kappa = std::sqrt(v0);
    const double r_split = static_cast<double>(split) * options.dr;
    // Relative size of the dropped nonlinearity at the matching point.
    if (std::pow(0.5 * (under.u[split] + over.u[split]), p - 2.0) > 1e-3 * v0 && split + 1 < nodes)
        throw Error(ErrorKind::Solver, "ground state tail could not be resolved");

    std::vector<double> r(nodes), u(nodes), du(nodes);
    const double u_split = 0.5 * (under.u[split] + over.u[split]);
    const double k0_split = boost::math::cyl_bessel_k(0, kappa * r_split);
    for (std::size_t i = 0; i < nodes; ++i) {
        r[i] = static_cast<double>(i) * options.dr;
        if (i <= split) {
            u[i] = 0.5 * (under.u[i] + over.u[i]);
            du[i] = 0.5 * (under.du[i] + over.du[i]);
        } else {
            u[i] = u_split * boost::math::cyl_bessel_k(0, kappa * r[i]) / k0_split;
            du[i] = -kappa * u_split * boost::math::cyl_bessel_k(1, kappa * r[i]) / k0_split;
        }
    }
    RadialProfile prof = RadialProfile::from_samples(std::move(r), std::move(u), std::move(du), p, v0);
    prof.u0 = 0.5 * (lo + hi);
    prof.u[0] = prof.u0;
    prof.tol = tol;
    return prof;
}

AsymptoticsReport check_decay_asymptotics(const RadialProfile& profile) {
    if (profile.r_max < 12.0) throw Error(ErrorKind::Parameter, "tail window unavailable");
    const double kappa = std::sqrt(profile.v0);
    std::vector<double> c_vals, slopes;
    for (std::size_t i = 0; i < profile.r.size(); ++i) {
        const double r = profile.r[i];
        if (r < profile.r_max - 4.0 || r > profile.r_max - 1.0) continue;
        if (!(profile.u[i] > 0.0)) throw Error(ErrorKind::Numeric, "profile not positive in tail window");
        const double s = kappa * r;
        c_vals.push_back(std::sqrt(s) * std::exp(s) * profile.u[i]);
        slopes.push_back(profile.du[i] / (kappa * profile.u[i]));
    }
    if (c_vals.empty()) throw Error(ErrorKind::Parameter, "tail window unavailable");
    AsymptoticsReport rep;
    rep.c_hat = median(c_vals);
    const auto [mn, mx] = std::minmax_element(c_vals.begin(), c_vals.end());
    rep.c_spread = (*mx - *mn) / rep.c_hat;
    rep.slope = median(slopes);
    rep.pass = rep.c_spread <= 0.05 && std::abs(rep.slope + 1.0) <= 2e-2;
    return rep;
}

Field2D sample_profile(const RadialProfile& profile, const Grid2D& grid, Point c, double scale) {
    return Field2D::sample(grid, [&](Point x) { return profile.value(distance(x, c) / scale); });
}

}  // namespace css
