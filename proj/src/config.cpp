#include "css/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace css {

Potential RunConfig::make_potential() const {
    const PotentialSpec& s = potential;
    if (s.family == "constant") {
        Potential v = Potential::constant(s.value);
        v.x0 = s.x0;
        v.delta = s.delta;
        return v;
    }
    if (s.family == "radial-bump") return Potential::radial_bump(s.a, s.b, s.x0, s.delta);
    if (s.family == "anisotropic-bump") return Potential::anisotropic_bump(s.a, s.b, s.q1, s.q2, s.x0, s.delta);
    throw Error(ErrorKind::Parameter, "unknown potential family '" + s.family + "'");
}

ProblemSpec RunConfig::problem(double epsilon) const { return ProblemSpec{p, make_potential(), epsilon, true}; }

ReductionOptions RunConfig::reduction() const {
    ReductionOptions r;
    r.step_tol = step_tol;
    r.linear_tol = linear_tol;
    return r;
}

SearchConfig RunConfig::search() const {
    SearchConfig s;
    s.budget = budget;
    s.M = M;
    s.initial_step = initial_step;
    s.tolerance = search_tol;
    s.n = landscape_n;
    s.box_scale = box_scale;
    s.reduction.step_tol = search_step_tol;
    s.reduction.linear_tol = search_linear_tol;
    return s;
}

void RunConfig::validate() const {
    auto need = [](bool ok, const char* msg) {
        if (!ok) throw Error(ErrorKind::Parameter, msg);
    };
    need(p > 2.0, "exponent p must exceed 2");
    need(!epsilons.empty(), "epsilon list is empty");
    for (double e : epsilons) need(e > 0.0 && e < 1.0, "epsilon must lie in (0, 1)");
    for (std::size_t i = 1; i < epsilons.size(); ++i)
        need(epsilons[i] < epsilons[i - 1], "epsilon list must be strictly decreasing");
    auto pow2 = [](std::size_t v) { return v >= 16 && (v & (v - 1)) == 0; };
    need(pow2(n) && pow2(landscape_n), "grid sizes must be powers of two, at least 16");
    need(k >= 1 && k <= 8, "k must lie in [1, 8]");
    need(box_scale >= 6.0, "box_scale must be at least 6");
    need(ground_state_tol > 0.0 && ground_state_tol <= 1e-6, "ground_state_tol must lie in (0, 1e-6]");
    need(ground_state_r_max >= 12.0, "ground_state_r_max must be at least 12");
    need(step_tol > 0.0 && linear_tol > 0.0, "tolerances must be positive");
    need(budget >= 50, "search budget must be at least 50 evaluations");
    need(M > 0.0, "M must be positive");
    need(initial_step > 0.0 && search_tol > 0.0 && search_step_tol > 0.0 && search_linear_tol > 0.0, "search steps must be positive");
    need(threads >= 1, "threads must be at least 1");
    (void)make_potential();
    (void)Grid2D(1.0, n);
    (void)Grid2D(1.0, landscape_n);
}

namespace {

template <class T>
void read(const Json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

RunConfig config_from_json(const Json& j) {
    RunConfig c;
    try {
        read(j, "p", c.p);
        if (j.contains("epsilon")) {
            const Json& e = j.at("epsilon");
            c.epsilons = e.is_array() ? e.get<std::vector<double>>() : std::vector<double>{e.get<double>()};
        }
        read(j, "k", c.k);
        if (j.contains("potential")) {
            const Json& v = j.at("potential");
            read(v, "family", c.potential.family);
            read(v, "value", c.potential.value);
            read(v, "a", c.potential.a);
            read(v, "b", c.potential.b);
            read(v, "q1", c.potential.q1);
            read(v, "q2", c.potential.q2);
            read(v, "delta", c.potential.delta);
            if (v.contains("x0")) {
                const auto x = v.at("x0").get<std::vector<double>>();
                if (x.size() != 2) throw Error(ErrorKind::Parameter, "potential.x0 must have two entries");
                c.potential.x0 = {x[0], x[1]};
            }
        }
        if (j.contains("grid")) {
            const Json& g = j.at("grid");
            read(g, "n", c.n);
            read(g, "landscape_n", c.landscape_n);
            read(g, "box_scale", c.box_scale);
        }
        if (j.contains("tolerances")) {
            const Json& t = j.at("tolerances");
            read(t, "ground_state", c.ground_state_tol);
            read(t, "ground_state_r_max", c.ground_state_r_max);
            read(t, "step", c.step_tol);
            read(t, "linear", c.linear_tol);
        }
        if (j.contains("search")) {
            const Json& s = j.at("search");
            read(s, "budget", c.budget);
            read(s, "M", c.M);
            read(s, "initial_step", c.initial_step);
            read(s, "tolerance", c.search_tol);
            read(s, "step", c.search_step_tol);
            read(s, "linear", c.search_linear_tol);
        }
        read(j, "cache_dir", c.cache_dir);
        read(j, "out_dir", c.out_dir);
        read(j, "seed", c.seed);
        read(j, "threads", c.threads);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Parameter, std::string("bad config: ") + e.what());
    }
    return c;
}

Json config_to_json(const RunConfig& c) {
    return Json{{"p", c.p},
                {"epsilon", c.epsilons},
                {"k", c.k},
                {"potential",
                 {{"family", c.potential.family},
                  {"value", c.potential.value},
                  {"a", c.potential.a},
                  {"b", c.potential.b},
                  {"q1", c.potential.q1},
                  {"q2", c.potential.q2},
                  {"x0", {c.potential.x0.x1, c.potential.x0.x2}},
                  {"delta", c.potential.delta}}},
                {"grid", {{"n", c.n}, {"landscape_n", c.landscape_n}, {"box_scale", c.box_scale}}},
                {"tolerances",
                 {{"ground_state", c.ground_state_tol},
                  {"ground_state_r_max", c.ground_state_r_max},
                  {"step", c.step_tol},
                  {"linear", c.linear_tol}}},
                {"search",
                 {{"budget", c.budget}, {"M", c.M}, {"initial_step", c.initial_step}, {"tolerance", c.search_tol},
                  {"step", c.search_step_tol},
                  {"linear", c.search_linear_tol}}},
                {"cache_dir", c.cache_dir},
                {"out_dir", c.out_dir},
                {"seed", c.seed},
                {"threads", c.threads}};
}

RunConfig load_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot open config " + path.string());
    const Json j = Json::parse(in, nullptr, false, true);
    if (j.is_discarded() || !j.is_object()) throw Error(ErrorKind::Parameter, "config is not a JSON object");
    return config_from_json(j);
}

std::string config_hash(const RunConfig& c) {
    Json j = config_to_json(c);
    // Output locations do not change results.
    j.erase("cache_dir");
    j.erase("out_dir");
    j.erase("threads");
    const std::string text = j.dump();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace css
