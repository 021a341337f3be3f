#include "css/energy.hpp"

#include <cmath>
#include <utility>

#include "css/fft.hpp"

namespace css {

void validate(const ProblemSpec& spec) {
    if (!(spec.p > 2.0)) throw Error(ErrorKind::Parameter, "exponent p must exceed 2");
    if (!(spec.epsilon > 0.0 && spec.epsilon < 1.0)) throw Error(ErrorKind::Parameter, "epsilon must lie in (0, 1)");
    if (!spec.potential.evaluator) throw Error(ErrorKind::Parameter, "potential has no evaluator");
}

Field2D apply_metric(const Field2D& v, double epsilon) {
    Field2D out = laplacian(v);
    out *= -epsilon * epsilon;
    out += v;
    return out;
}

double inner_product_eps(const Field2D& v1, const Field2D& v2, double epsilon) {
    require_same_grid(v1, v2);
    return dot(v1, apply_metric(v2, epsilon));
}

double norm_eps(const Field2D& v, double epsilon) { return std::sqrt(std::max(0.0, inner_product_eps(v, v, epsilon))); }

Field2D riesz_representative(const Field2D& g, double epsilon) { return solve_helmholtz(g, epsilon * epsilon, 1.0); }

namespace {

// Gauge fields in the convention whose A0 is the variation of the gauge energy.
GaugeFields slaved_gauge(const Field2D& u) { return compute_gauge(u, GaugeConvention::CurlConsistent); }

}  // namespace

EnergyModel::EnergyModel(ProblemSpec spec, Grid2D grid)
    : spec_(std::move(spec)), grid_(grid), v_(Field2D::sample(grid, spec_.potential.evaluator)) {
    validate(spec_);
}

EnergyBreakdown EnergyModel::evaluate(const Field2D& u) const {
    if (!(u.grid() == grid_)) throw Error(ErrorKind::Parameter, "grid mismatch");
    if (!u.all_finite()) throw Error(ErrorKind::Numeric, "non-finite field");
    const double eps2 = spec_.epsilon * spec_.epsilon;
    const Field2D rho = multiply(u, u);

    EnergyBreakdown e;
    e.kinetic = -0.5 * eps2 * dot(u, laplacian(u));
    e.potential_term = 0.5 * dot(v_, rho);
    double up = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) up += std::pow(std::abs(u[k]), spec_.p);
    const double h = grid_.spacing();
    e.nonlinear = -up * h * h / spec_.p;

    double a_sq_rho = 0.0, a0_rho = 0.0, a0_f12 = 0.0;
    if (spec_.gauge) {
        const GaugeFields g = slaved_gauge(u);
        Field2D a_sq(grid_);
        for (std::size_t k = 0; k < u.size(); ++k) a_sq[k] = g.a1[k] * g.a1[k] + g.a2[k] * g.a2[k];
        a_sq_rho = dot(a_sq, rho);
        a0_rho = dot(g.a0, rho);
        a0_f12 = chern_simons_identity(u, g).first;
    }
    e.gauge_term = 0.5 * a_sq_rho;
    e.total = e.kinetic + e.potential_term + e.gauge_term + e.nonlinear;

    // Same terms regrouped as J(u, A(u)); the A0 contributions cancel by the constraint identity.
    e.j_functional = 0.5 * (-eps2 * dot(u, laplacian(u)) + dot(v_, rho) + a_sq_rho) + e.nonlinear;
    e.j_with_a0 = e.j_functional + 0.5 * a0_rho + a0_f12;
    return e;
}

Field2D EnergyModel::first_variation(const Field2D& u) const {
    if (!(u.grid() == grid_)) throw Error(ErrorKind::Parameter, "grid mismatch");
    if (!u.all_finite()) throw Error(ErrorKind::Numeric, "non-finite field");
    const double eps2 = spec_.epsilon * spec_.epsilon;
    Field2D g = laplacian(u);
    g *= -eps2;
    std::optional<GaugeFields> gauge;
    if (spec_.gauge) gauge = slaved_gauge(u);
    for (std::size_t k = 0; k < u.size(); ++k) {
        double coeff = v_[k] - std::pow(std::abs(u[k]), spec_.p - 2.0);
        if (gauge) coeff += gauge->a1[k] * gauge->a1[k] + gauge->a2[k] * gauge->a2[k] + gauge->a0[k];
        g[k] += coeff * u[k];
    }
    return g;
}

EnergyModel::Linearization::Linearization(const EnergyModel& model, Field2D u)
    : model_(&model), u_(std::move(u)), rho_(multiply(u_, u_)), local_(model.grid_) {
    if (!(u_.grid() == model.grid_)) throw Error(ErrorKind::Parameter, "grid mismatch");
    if (!u_.all_finite()) throw Error(ErrorKind::Numeric, "non-finite field");
    if (model.spec_.gauge) gauge_ = slaved_gauge(u_);
    const double p = model.spec_.p;
    for (std::size_t k = 0; k < u_.size(); ++k) {
        double c = model.v_[k] - (p - 1.0) * std::pow(std::abs(u_[k]), p - 2.0);
        if (gauge_) c += gauge_->a1[k] * gauge_->a1[k] + gauge_->a2[k] * gauge_->a2[k] + gauge_->a0[k];
        local_[k] = c;
    }
}

EnergyModel::Linearization EnergyModel::linearize(const Field2D& u) const { return Linearization(*this, u); }

Field2D EnergyModel::Linearization::apply(const Field2D& w) const {
    require_same_grid(u_, w);
    const double eps = model_->spec_.epsilon;
    Field2D out = laplacian(w);
    out *= -eps * eps;
    for (std::size_t k = 0; k < w.size(); ++k) out[k] += local_[k] * w[k];
    if (!gauge_) return out;

    const GaugeFields& g = *gauge_;
    const Grid2D& grid = u_.grid();
    const auto engine = ConvolutionEngine::for_grid(grid);
    const Field2D drho = 2.0 * multiply(u_, w);
    const Spectrum drho_hat = engine->forward(drho);
    const Field2D da1 = engine->inverse(engine->combine({{-0.5, KernelId::K2, &drho_hat}}));
    const Field2D da2 = engine->inverse(engine->combine({{0.5, KernelId::K1, &drho_hat}}));
    Field2D j1(grid), j2(grid);
    for (std::size_t k = 0; k < w.size(); ++k) {
        j1[k] = da1[k] * rho_[k] + g.a1[k] * drho[k];
        j2[k] = da2[k] * rho_[k] + g.a2[k] * drho[k];
    }
    const Spectrum j1_hat = engine->forward(j1);
    const Spectrum j2_hat = engine->forward(j2);
    const Field2D da0 = engine->inverse(engine->combine({{1.0, KernelId::K2, &j1_hat}, {-1.0, KernelId::K1, &j2_hat}}));
    for (std::size_t k = 0; k < w.size(); ++k)
        out[k] += u_[k] * (2.0 * (g.a1[k] * da1[k] + g.a2[k] * da2[k]) + da0[k]);
    return out;
}

EnergyBreakdown evaluate_I(const ProblemSpec& spec, const Field2D& u) { return EnergyModel(spec, u.grid()).evaluate(u); }

Field2D first_variation(const ProblemSpec& spec, const Field2D& u) {
    return EnergyModel(spec, u.grid()).first_variation(u);
}

Field2D second_variation_apply(const ProblemSpec& spec, const Field2D& u, const Field2D& w) {
    return EnergyModel(spec, u.grid()).second_variation_apply(u, w);
}

double expansion_prediction(const ProblemSpec& spec, const RadialProfile& profile, const PeakConfiguration& peaks,
                            double c_fit) {
    validate(spec);
    std::string why;
    if (!peaks.admissible(&why)) throw Error(ErrorKind::Infeasible, "outside D_k: " + why);
    const double eps2 = spec.epsilon * spec.epsilon;
    const double k = static_cast<double>(peaks.k());
    const double vmax = spec.potential(peaks.x0);

    double result = (0.5 - 1.0 / spec.p) * k * eps2 * profile.integral_pow(spec.p);
    double offset = 0.0;
    for (const Point& y : peaks.peaks) offset += vmax - spec.potential(y);
    result -= 0.5 * offset * eps2 * profile.integral_pow(2.0);
    double interaction = 0.0;
    for (std::size_t i = 0; i < peaks.peaks.size(); ++i)
        for (std::size_t j = 0; j < peaks.peaks.size(); ++j)
            if (i != j) interaction += std::exp(-distance(peaks.peaks[i], peaks.peaks[j]) / spec.epsilon);
    result -= c_fit * eps2 * interaction;
    return result;
}

DecompositionReport decomposition_residual(const EnergyModel& model, const Field2D& ansatz, const Field2D& phi) {
    require_same_grid(ansatz, phi);
    DecompositionReport rep;
    if (phi.max_abs() == 0.0) return rep;
    const Field2D g = model.first_variation(ansatz);
    rep.linear = dot(g, phi);
    rep.quadratic = 0.5 * dot(model.linearize(ansatz).apply(phi), phi);
    rep.remainder = model.evaluate(ansatz + phi).total - model.evaluate(ansatz).total - rep.linear - rep.quadratic;
    rep.phi_norm = norm_eps(phi, model.spec().epsilon);
    return rep;
}

}  // namespace css
