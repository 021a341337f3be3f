#pragma once

#include <string>
#include <vector>

#include "css/grid.hpp"

namespace css {

/// Peak locations y^1..y^k at semiclassical parameter epsilon.
struct PeakConfiguration {
    double epsilon = 0.0;
    std::vector<Point> peaks;
    Point x0;            // local maximum of the potential
    double delta = 2.0;  // admissible peaks lie in B_{delta/2}(x0)

    std::size_t k() const { return peaks.size(); }

    /// |ln eps|^{1/2}: the minimum admissible separation in units of eps.
    double min_separation_ratio() const;
    /// min_{i != j} |y^i - y^j| / eps (infinity for k = 1).
    double separation_over_eps() const;
    /// max_i |y^i - x0|.
    double max_distance_to_x0() const;

    /// Membership in D_k: every peak in B_{delta/2}(x0), pairwise separation
    /// at least eps |ln eps|^{1/2}. `why` receives the failing condition.
    bool admissible(std::string* why = nullptr) const;
};

}  // namespace css
