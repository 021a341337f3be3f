#pragma once

// File formats: Field2D (binary, CSV), ground-state profile cache, gauge
// bundles, and JSON records for reports.

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "css/energy.hpp"
#include "css/gauge.hpp"
#include "css/ground_state.hpp"
#include "css/landscape.hpp"
#include "css/reduction.hpp"

namespace css {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

/// Binary layout: "CSSF2D01", n (u64), half_width, center.x1, center.x2 (f64), tag length (u32), tag bytes,
/// n*n values (f64, row-major). The tag carries the config hash.
void write_field_binary(const fs::path& path, const Field2D& f, const std::string& tag = {});
Field2D read_field_binary(const fs::path& path);

/// First line `# half_width=<v> n=<v>`, optional further `#` lines, then n rows of n comma-separated values.
void write_field_csv(const fs::path& path, const Field2D& f, const std::string& config_hash = {});
Field2D read_field_csv(const fs::path& path);

/// Cache key files: profile_<key>.csv (header `# p=<v> v0=<v> u0=<v>`, columns r,u,du) and profile_<key>.json.
struct ProfileCacheEntry {
    RadialProfile profile;
    std::optional<double> c_fit;
};
std::string profile_cache_key(double p, double v0, double tol);
void store_profile(const fs::path& dir, const RadialProfile& profile, std::optional<double> c_fit = std::nullopt);
std::optional<ProfileCacheEntry> load_profile(const fs::path& dir, double p, double v0, double tol);

/// <stem>_a0.bin, <stem>_a1.bin, <stem>_a2.bin and <stem>.json with {source_norm, residuals}.
void write_gauge(const fs::path& dir, const std::string& stem, const GaugeFields& g, const ResidualReport& residuals,
                 const std::string& config_hash = {});

Json to_json(const EnergyBreakdown& e);
Json to_json(const DecompositionReport& d);
Json to_json(const ReductionResult& r);
Json to_json(const AsymptoticsReport& a);
Json to_json(const ResidualReport& r);
Json to_json(const SpectrumReport& s);
Json to_json(const PeakConfiguration& p);
Json to_json(const LandscapeRun& run);
Json to_json(const SweepReport& s);

/// Writes text to path, creating parent directories. Throws Error(Io).
void write_text(const fs::path& path, const std::string& text);

/// JSON with a fixed 2-space layout and 17 significant digits for doubles.
std::string dump_json(const Json& j);

}  // namespace css
