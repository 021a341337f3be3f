#include "css/io.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace css {

namespace {

constexpr char kMagic[8] = {'C', 'S', 'S', 'F', '2', 'D', '0', '1'};

std::ofstream open_out(const fs::path& path, std::ios::openmode mode = std::ios::out) {
    if (path.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, mode);
    if (!out) throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
    return out;
}

std::ifstream open_in(const fs::path& path, std::ios::openmode mode = std::ios::in) {
    std::ifstream in(path, mode);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
    return in;
}

std::string g17(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

template <class T>
void put(std::ofstream& out, T v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::ifstream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!in) throw Error(ErrorKind::Io, "truncated field file");
    return v;
}

double number_after(const std::string& line, const std::string& key) {
    const auto pos = line.find(key + "=");
    if (pos == std::string::npos) throw Error(ErrorKind::Io, "missing '" + key + "' in header");
    return std::stod(line.substr(pos + key.size() + 1));
}

Json vec_json(const std::vector<double>& v) {
    Json a = Json::array();
    for (double x : v) a.push_back(x);
    return a;
}

}  // namespace

void write_field_binary(const fs::path& path, const Field2D& f, const std::string& tag) {
    auto out = open_out(path, std::ios::binary);
    out.write(kMagic, sizeof kMagic);
    const Grid2D& g = f.grid();
    put<std::uint64_t>(out, g.n());
    put(out, g.half_width());
    put(out, g.center().x1);
    put(out, g.center().x2);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(tag.size()));
    out.write(tag.data(), static_cast<std::streamsize>(tag.size()));
    out.write(reinterpret_cast<const char*>(f.values().data()), static_cast<std::streamsize>(f.size() * sizeof(double)));
    if (!out) throw Error(ErrorKind::Io, "write failed: " + path.string());
}

Field2D read_field_binary(const fs::path& path) {
    auto in = open_in(path, std::ios::binary);
    char magic[sizeof kMagic];
    in.read(magic, sizeof magic);
    if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0) throw Error(ErrorKind::Io, "not a field file: " + path.string());
    const auto n = get<std::uint64_t>(in);
    const double hw = get<double>(in);
    const double c1 = get<double>(in);
    const double c2 = get<double>(in);
    std::string tag(get<std::uint32_t>(in), '\0');
    in.read(tag.data(), static_cast<std::streamsize>(tag.size()));
    const Grid2D grid(hw, n, {c1, c2});
    std::vector<double> values(grid.size());
    in.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(values.size() * sizeof(double)));
    if (!in) throw Error(ErrorKind::Io, "truncated field file");
    return Field2D(grid, std::move(values));
}

void write_field_csv(const fs::path& path, const Field2D& f, const std::string& config_hash) {
    auto out = open_out(path);
    const Grid2D& g = f.grid();
    out << "# half_width=" << g17(g.half_width()) << " n=" << g.n() << '\n';
    if (g.center().x1 != 0.0 || g.center().x2 != 0.0)
        out << "# center=" << g17(g.center().x1) << ',' << g17(g.center().x2) << '\n';
    if (!config_hash.empty()) out << "# config_hash=" << config_hash << '\n';
    for (std::size_t j = 0; j < g.n(); ++j) {
        for (std::size_t i = 0; i < g.n(); ++i) out << (i ? "," : "") << g17(f.at(i, j));
        out << '\n';
    }
}

Field2D read_field_csv(const fs::path& path) {
    auto in = open_in(path);
    std::string line;
    std::getline(in, line);
    if (line.rfind("#", 0) != 0) throw Error(ErrorKind::Io, "missing field header");
    const double hw = number_after(line, "half_width");
    const auto n = static_cast<std::size_t>(number_after(line, "n"));
    Point center;
    std::vector<double> values;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (const auto pos = line.find("center="); pos != std::string::npos) {
                std::istringstream is(line.substr(pos + 7));
                char comma;
                is >> center.x1 >> comma >> center.x2;
            }
            continue;
        }
        std::istringstream is(line);
        std::string cell;
        while (std::getline(is, cell, ',')) values.push_back(std::stod(cell));
    }
    const Grid2D grid(hw, n, center);
    if (values.size() != grid.size()) throw Error(ErrorKind::Io, "field size does not match header");
    return Field2D(grid, std::move(values));
}

std::string profile_cache_key(double p, double v0, double tol) {
    std::ostringstream os;
    os << "p" << g17(p) << "_v" << g17(v0) << "_t" << g17(tol);
    return os.str();
}

void store_profile(const fs::path& dir, const RadialProfile& profile, std::optional<double> c_fit) {
    const std::string key = profile_cache_key(profile.p, profile.v0, profile.tol);
    {
        auto out = open_out(dir / ("profile_" + key + ".csv"));
        out << "# p=" << g17(profile.p) << " v0=" << g17(profile.v0) << " u0=" << g17(profile.u0) << '\n';
        out << "r,u,du\n";
        for (std::size_t i = 0; i < profile.r.size(); ++i)
            out << g17(profile.r[i]) << ',' << g17(profile.u[i]) << ',' << g17(profile.du[i]) << '\n';
    }
    Json side;
    side["p"] = profile.p;
    side["v0"] = profile.v0;
    side["tol"] = profile.tol;
    side["u0"] = profile.u0;
    side["r_max"] = profile.r_max;
    side["dr"] = profile.dr;
    side["c_fit"] = c_fit ? Json(*c_fit) : Json(nullptr);
    write_text(dir / ("profile_" + key + ".json"), dump_json(side));
}

std::optional<ProfileCacheEntry> load_profile(const fs::path& dir, double p, double v0, double tol) {
    const std::string key = profile_cache_key(p, v0, tol);
    const fs::path csv = dir / ("profile_" + key + ".csv");
    const fs::path side = dir / ("profile_" + key + ".json");
    if (!fs::exists(csv) || !fs::exists(side)) return std::nullopt;

    auto sin = open_in(side);
    Json meta = Json::parse(sin, nullptr, false);
    if (meta.is_discarded() || meta.value("p", 0.0) != p || meta.value("v0", 0.0) != v0 || meta.value("tol", 0.0) != tol)
        return std::nullopt;

    auto in = open_in(csv);
    std::string line;
    std::getline(in, line);
    std::getline(in, line);  // column names
    std::vector<double> r, u, du;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream is(line);
        std::string a, b, c;
        std::getline(is, a, ',');
        std::getline(is, b, ',');
        std::getline(is, c, ',');
        r.push_back(std::stod(a));
        u.push_back(std::stod(b));
        du.push_back(std::stod(c));
    }
    ProfileCacheEntry e{RadialProfile::from_samples(std::move(r), std::move(u), std::move(du), p, v0), std::nullopt};
    e.profile.tol = tol;
    if (meta.contains("c_fit") && meta["c_fit"].is_number()) e.c_fit = meta["c_fit"].get<double>();
    return e;
}

void write_gauge(const fs::path& dir, const std::string& stem, const GaugeFields& g, const ResidualReport& residuals,
                 const std::string& config_hash) {
    write_field_binary(dir / (stem + "_a0.bin"), g.a0, config_hash);
    write_field_binary(dir / (stem + "_a1.bin"), g.a1, config_hash);
    write_field_binary(dir / (stem + "_a2.bin"), g.a2, config_hash);
    Json j;
    if (!config_hash.empty()) j["config_hash"] = config_hash;
    j["source_norm"] = g.source_norm;
    j["convention"] = g.convention == GaugeConvention::CurlConsistent ? "curl-consistent" : "as-printed";
    j["residuals"] = to_json(residuals);
    write_text(dir / (stem + ".json"), dump_json(j));
}

Json to_json(const EnergyBreakdown& e) {
    return Json{{"kinetic", e.kinetic},         {"potential", e.potential_term}, {"gauge", e.gauge_term},
                {"nonlinear", e.nonlinear},     {"total", e.total},              {"j_functional", e.j_functional},
                {"j_with_a0", e.j_with_a0}};
}

Json to_json(const DecompositionReport& d) {
    return Json{{"linear", d.linear}, {"quadratic", d.quadratic}, {"remainder", d.remainder}, {"phi_norm", d.phi_norm}};
}

Json to_json(const ReductionResult& r) {
    return Json{{"phi_norm_eps", r.phi_norm_eps},
                {"iterations", r.iterations},
                {"contraction_ratios", vec_json(r.contraction_ratios)},
                {"residual_norm", r.residual_norm},
                {"initial_residual_norm", r.initial_residual_norm},
                {"membership_defect", r.membership_defect},
                {"min_abs_ritz", r.min_abs_ritz},
                {"linear_iterations", r.linear_iterations}};
}

Json to_json(const AsymptoticsReport& a) {
    return Json{{"c_hat", a.c_hat}, {"c_spread", a.c_spread}, {"slope", a.slope}, {"pass", a.pass}};
}

Json to_json(const ResidualReport& r) {
    return Json{{"curl", r.curl},
                {"coulomb", r.coulomb},
                {"a0_x1", r.a0_x1},
                {"a0_x2", r.a0_x2},
                {"density_scale", r.density_scale},
                {"source_scale", r.source_scale},
                {"curl_proportionality", r.curl_proportionality},
                {"curl_sign_consistent", r.curl_sign_consistent}};
}

Json to_json(const SpectrumReport& s) {
    return Json{{"eigenvalues", vec_json(s.eigenvalues)},
                {"near_kernel_dim", s.near_kernel_dim},
                {"near_kernel_threshold", s.near_kernel_threshold},
                {"alignment", s.alignment},
                {"lowest_eigenvalue", s.lowest_eigenvalue},
                {"iterations", s.iterations}};
}

Json to_json(const PeakConfiguration& p) {
    Json peaks = Json::array();
    for (const Point& y : p.peaks) peaks.push_back(Json::array({y.x1, y.x2}));
    return Json{{"epsilon", p.epsilon}, {"k", p.k()}, {"peaks", peaks}, {"x0", Json::array({p.x0.x1, p.x0.x2})},
                {"delta", p.delta}};
}

Json to_json(const LandscapeRun& run) {
    Json cands = Json::array();
    for (const Candidate& c : run.candidates) {
        Json peaks = Json::array();
        for (const Point& y : c.peaks) peaks.push_back(Json::array({y.x1, y.x2}));
        cands.push_back(Json{{"peaks", peaks}, {"F", std::isfinite(c.F) ? Json(c.F) : Json("-inf")}, {"phi_norm", c.phi_norm}});
    }
    Json j{{"epsilon", run.spec.epsilon},
           {"k", run.k},
           {"argmax", to_json(run.argmax)},
           {"F_max", run.F_max},
           {"phi_norm", run.phi_norm},
           {"interior", run.interior_flag},
           {"evaluations", run.evaluations},
           {"candidates", cands}};
    if (run.reduction) j["reduction"] = to_json(*run.reduction);
    return j;
}

Json to_json(const SweepReport& s) {
    Json entries = Json::array();
    for (const SweepEntry& e : s.entries)
        entries.push_back(Json{{"epsilon", e.epsilon},
                               {"argmax", to_json(e.argmax)},
                               {"max_distance", e.max_distance},
                               {"separation_over_eps", std::isfinite(e.separation) ? Json(e.separation) : Json(nullptr)},
                               {"F", e.F},
                               {"phi_norm", e.phi_norm},
                               {"interior", e.interior},
                               {"positive", e.positive}});
    return Json{{"entries", entries},
                {"monotonicity_violations", s.monotonicity_violations},
                {"monotone", s.monotone},
                {"concentration_signal", s.concentration_signal},
                {"note", s.note},
                {"fitted_slope", s.fitted_slope}};
}

void write_text(const fs::path& path, const std::string& text) {
    auto out = open_out(path);
    out << text;
    if (!out) throw Error(ErrorKind::Io, "write failed: " + path.string());
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace css
