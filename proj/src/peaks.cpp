#include "css/peaks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace css {

double PeakConfiguration::min_separation_ratio() const { return std::sqrt(std::abs(std::log(epsilon))); }

double PeakConfiguration::separation_over_eps() const {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < peaks.size(); ++i)
        for (std::size_t j = i + 1; j < peaks.size(); ++j) best = std::min(best, distance(peaks[i], peaks[j]) / epsilon);
    return best;
}

double PeakConfiguration::max_distance_to_x0() const {
    double worst = 0.0;
    for (const Point& y : peaks) worst = std::max(worst, distance(y, x0));
    return worst;
}

bool PeakConfiguration::admissible(std::string* why) const {
    auto fail = [why](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    if (!(epsilon > 0.0) || epsilon >= 1.0) return fail("epsilon must lie in (0, 1)");
    if (peaks.empty()) return fail("no peaks");
    for (const Point& y : peaks)
        if (!std::isfinite(y.x1) || !std::isfinite(y.x2)) return fail("non-finite peak");
    if (max_distance_to_x0() >= 0.5 * delta) {
        std::ostringstream os;
        os << "peak at distance " << max_distance_to_x0() << " from x0 exceeds delta/2 = " << 0.5 * delta;
        return fail(os.str());
    }
    if (separation_over_eps() < min_separation_ratio()) {
        std::ostringstream os;
        os << "separation/eps " << separation_over_eps() << " below |ln eps|^(1/2) = " << min_separation_ratio();
        return fail(os.str());
    }
    return true;
}

}  // namespace css
