#include "css/gauge.hpp"

#include <cmath>

#include "css/fft.hpp"

namespace css {

GaugeFields compute_gauge(const Field2D& u, GaugeConvention convention) {
    if (!u.all_finite()) throw Error(ErrorKind::Numeric, "non-finite field");
    const Field2D rho = multiply(u, u);
    const double peak = rho.max_abs();
    if (peak > 0.0 && boundary_ring_max(rho) > 1e-6 * peak) warn("domain truncation suspect");

    const auto engine = ConvolutionEngine::for_grid(u.grid());
    const Spectrum rho_hat = engine->forward(rho);
    // K2 * rho = -(1/2pi) \int (x2-y2)/|x-y|^2 rho, so the printed A1 is K2 * rho / 2.
    const double s = convention == GaugeConvention::AsPrinted ? 0.5 : -0.5;
    GaugeFields g{Field2D(u.grid()), engine->inverse(engine->combine({{s, KernelId::K2, &rho_hat}})),
                  engine->inverse(engine->combine({{-s, KernelId::K1, &rho_hat}})), integrate(rho), convention};

    const Spectrum j1 = engine->forward(multiply(g.a1, rho));
    const Spectrum j2 = engine->forward(multiply(g.a2, rho));
    if (convention == GaugeConvention::AsPrinted)
        g.a0 = engine->inverse(engine->combine({{1.0, KernelId::K1, &j1}, {-1.0, KernelId::K2, &j2}}));
    else
        g.a0 = engine->inverse(engine->combine({{1.0, KernelId::K2, &j1}, {-1.0, KernelId::K1, &j2}}));
    return g;
}

ResidualReport gauge_residuals(const Field2D& u, const GaugeFields& g) {
    require_same_grid(u, g.a1);
    const Grid2D& grid = u.grid();
    const Field2D rho = multiply(u, u);
    const auto [d1a1, d2a1] = gradient_sixth_order(g.a1);
    const auto [d1a2, d2a2] = gradient_sixth_order(g.a2);
    const auto [d1a0, d2a0] = gradient_sixth_order(g.a0);

    Field2D curl(grid), coulomb(grid), r3(grid), r4(grid), src(grid);
    for (std::size_t k = 0; k < u.size(); ++k) {
        curl[k] = d1a2[k] - d2a1[k] + 0.5 * rho[k];
        coulomb[k] = d1a1[k] + d2a2[k];
        r3[k] = d1a0[k] - g.a2[k] * rho[k];
        r4[k] = d2a0[k] + g.a1[k] * rho[k];
        src[k] = std::hypot(g.a1[k], g.a2[k]) * rho[k];
    }
    ResidualReport rep;
    rep.curl = inner_half_max(curl);
    rep.coulomb = inner_half_max(coulomb);
    rep.a0_x1 = inner_half_max(r3);
    rep.a0_x2 = inner_half_max(r4);
    rep.density_scale = rho.max_abs();
    rep.source_scale = src.max_abs();

    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        const double f12 = d1a2[k] - d2a1[k];
        num += f12 * rho[k];
        den += rho[k] * rho[k];
    }
    rep.curl_proportionality = den > 0.0 ? num / den : 0.0;
    rep.curl_sign_consistent = den == 0.0 || rep.curl_proportionality < 0.0;
    if (!rep.curl_sign_consistent) warn("gauge curl has sign opposite to -u^2/2 under the printed convention");
    return rep;
}

std::pair<double, double> chern_simons_identity(const Field2D& u, const GaugeFields& g) {
    require_same_grid(u, g.a0);
    const auto [d1a2, d2a2] = gradient_sixth_order(g.a2);
    const auto [d1a1, d2a1] = gradient_sixth_order(g.a1);
    Field2D f12 = d1a2 - d2a1;
    const Field2D rho = multiply(u, u);
    return {dot(g.a0, f12), -0.5 * dot(g.a0, rho)};
}

}  // namespace css
