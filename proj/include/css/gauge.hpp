#pragma once

// Gauge fields slaved to a matter field u through free-space convolutions,
// and the residuals of the static constraint equations
//
//   d1 A2 - d2 A1 = -u^2 / 2,   d1 A1 + d2 A2 = 0,
//   d1 A0 = A2 u^2,             d2 A0 = -A1 u^2.
//
// Two sign conventions are available. `AsPrinted` evaluates
//   A1 = -(1/4pi) \int (x2-y2)/|x-y|^2 u^2(y) dy,   A2 = (1/4pi) \int (x1-y1)/|x-y|^2 u^2(y) dy,
//   A0 = K1 * (A1 u^2) - K2 * (A2 u^2)
// literally; these have curl +u^2/2, and that A0 does not satisfy the last two
// equations. `CurlConsistent` (the default) flips the sign of (A1, A2) and uses
//   A0 = K2 * (A1 u^2) - K1 * (A2 u^2),
// which satisfies all four equations and makes A0 u the exact variation of the
// gauge energy. The energy (1/2) \int (A1^2 + A2^2) u^2 is identical in both.

#include <string>

#include "css/grid.hpp"

namespace css {

enum class GaugeConvention { CurlConsistent, AsPrinted };

struct GaugeFields {
    Field2D a0, a1, a2;
    double source_norm = 0.0;  // \int u^2
    GaugeConvention convention = GaugeConvention::CurlConsistent;
};

GaugeFields compute_gauge(const Field2D& u, GaugeConvention convention = GaugeConvention::CurlConsistent);

struct ResidualReport {
    // Max-norm residuals on the inner half-box, derivatives by sixth-order differences.
    double curl = 0.0;       // d1 a2 - d2 a1 + u^2/2
    double coulomb = 0.0;    // d1 a1 + d2 a2
    double a0_x1 = 0.0;      // d1 a0 - a2 u^2
    double a0_x2 = 0.0;      // d2 a0 + a1 u^2
    // Natural scales for normalization.
    double density_scale = 0.0;  // max u^2
    double source_scale = 0.0;   // max(|a| u^2)
    // Least-squares c in F12 ~ c u^2; the constraint equation asks for c = -1/2.
    double curl_proportionality = 0.0;
    bool curl_sign_consistent = true;
};

ResidualReport gauge_residuals(const Field2D& u, const GaugeFields& g);

/// (\int a0 F12, -(1/2) \int a0 u^2) with F12 = d1 a2 - d2 a1.
std::pair<double, double> chern_simons_identity(const Field2D& u, const GaugeFields& g);

}  // namespace css
