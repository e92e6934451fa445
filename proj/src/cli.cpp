#include "quatsurf/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <sstream>

#include "json.hpp"

#include "quatsurf/bonnet.hpp"
#include "quatsurf/duality.hpp"
#include "quatsurf/errors.hpp"
#include "quatsurf/fields.hpp"
#include "quatsurf/io.hpp"
#include "quatsurf/ivp.hpp"
#include "quatsurf/verify.hpp"

namespace quatsurf {

namespace {

using json = nlohmann::json;

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json opt_number(const std::optional<double>& v) { return v ? number(*v) : json(nullptr); }

json nodes(const NodeList& list) { return json(list); }

json stats_json(const std::vector<double>& v) {
    const Stats s = stats(v);
    return {{"mean", number(s.mean)}, {"stddev", number(s.stddev)}, {"min", number(s.min)},
            {"max", number(s.max)},   {"count", s.count}};
}

json grid_json(const GridChart& g) {
    return {{"nx", g.nx}, {"ny", g.ny}, {"hx", g.hx}, {"hy", g.hy}, {"x0", g.x0}, {"y0", g.y0}};
}

json tolerances_json(const Tolerances& t) {
    return {{"stencil_order", t.stencil_order}, {"conformality", t.conformality}, {"closedness", t.closedness},
            {"holomorphy", t.holomorphy},       {"zero", t.zero},                 {"umbilic", t.umbilic},
            {"congruence", t.congruence},       {"pole_threshold", t.pole_threshold}};
}

json config_json(const RunConfig& c) {
    const auto& p = c.params;
    json j;
    j["command"] = c.command;
    j["generator"] = c.generator;
    j["params"] = {{"radius", p.radius}, {"order", p.order},   {"neck", p.neck},  {"bulge", p.bulge},
                   {"semi_a", p.semi_a}, {"semi_c", p.semi_c}, {"theta", p.theta}};
    j["positions_csv"] = c.positions_csv ? json(*c.positions_csv) : json(nullptr);
    j["qdiff_csv"] = c.qdiff_csv ? json(*c.qdiff_csv) : json(nullptr);
    j["grid"] = {{"n", c.grid.n},
                 {"xmin", opt_number(c.grid.xmin)},
                 {"xmax", opt_number(c.grid.xmax)},
                 {"ymin", opt_number(c.grid.ymin)},
                 {"ymax", opt_number(c.grid.ymax)},
                 {"nx", c.grid.nx ? json(*c.grid.nx) : json(nullptr)},
                 {"ny", c.grid.ny ? json(*c.grid.ny) : json(nullptr)}};
    j["tolerances"] = tolerances_json(c.tol);
    j["eps"] = c.eps;
    j["phi"] = c.phi;
    j["row"] = c.row ? json(*c.row) : json(nullptr);
    j["steps"] = c.steps;
    j["all"] = c.all;
    j["checks"] = c.checks;
    j["seed"] = c.seed;
    return j;
}

ImmersionOptions immersion_options(const Tolerances& t) {
    ImmersionOptions o;
    o.stencil_order = t.stencil_order;
    o.conformality_tol = t.conformality;
    return o;
}

void validate_config(const RunConfig& c) {
    const auto& cmds = command_names();
    if (std::find(cmds.begin(), cmds.end(), c.command) == cmds.end()) {
        throw ValidationError("cli", "run", "unknown command '" + c.command + "'");
    }
    const auto& t = c.tol;
    for (double v : {t.conformality, t.closedness, t.holomorphy, t.zero, t.umbilic, t.congruence, t.pole_threshold}) {
        if (!(v > 0.0)) throw ValidationError("cli", "run", "tolerances must be positive");
    }
    if (c.grid.n < 5) throw ValidationError("cli", "run", "grid needs at least 5 nodes per axis");
    for (const auto& path : {c.positions_csv, c.qdiff_csv}) {
        if (path && !std::filesystem::exists(*path)) {
            throw ValidationError("cli", "run", "input file '" + *path + "' does not exist");
        }
    }
    if (c.command == "verify" && !c.all && c.checks.empty()) {
        throw ValidationError("cli", "verify", "select --all or at least one --check group");
    }
}

GridChart chart_for(const RunConfig& c, const GridChart& base) {
    const GridSpec& s = c.grid;
    if (!s.xmin && !s.xmax && !s.ymin && !s.ymax && !s.nx && !s.ny) return base;
    const GridChart g = GridChart::span(s.xmin.value_or(base.x0), s.xmax.value_or(base.xmax()), s.nx.value_or(base.nx),
                                        s.ymin.value_or(base.y0), s.ymax.value_or(base.ymax()), s.ny.value_or(base.ny));
    g.validate();
    return g;
}

struct Input {
    ChartImmersion immersion;
    std::optional<QuadDifferential> q;
    std::optional<std::vector<Quaternion>> dual;
    std::string source;
};

Input load_input(const RunConfig& c, const std::optional<GridChart>& chart_override = std::nullopt) {
    const ImmersionOptions opts = immersion_options(c.tol);
    Input in;
    if (c.positions_csv) {
        auto samples = read_positions_csv(*c.positions_csv);
        in.immersion = build_immersion(samples.grid, std::move(samples.positions), opts);
        in.source = *c.positions_csv;
    } else {
        const GridChart grid = chart_for(c, chart_override.value_or(default_chart(c.generator, c.grid.n)));
        auto g = generate(c.generator, grid, c.params, opts);
        in.immersion = std::move(g.immersion);
        in.q = std::move(g.q);
        in.dual = std::move(g.dual);
        in.source = c.generator;
    }
    if (c.qdiff_csv) {
        auto q = read_qdiff_csv(*c.qdiff_csv);
        if (!q.grid.same_layout(in.immersion.grid())) {
            throw ValidationError("cli", "load_input", "quadratic differential grid does not match the surface grid");
        }
        in.q = std::move(q);
        in.dual.reset();
    }
    return in;
}

std::string obj_text(const GridChart& g, const std::vector<Quaternion>& p, const std::string& name) {
    std::ostringstream s;
    write_obj(s, g, p, name);
    return s.str();
}

std::string positions_text(const GridChart& g, const std::vector<Quaternion>& p) {
    std::ostringstream s;
    write_positions_csv(s, g, p);
    return s.str();
}

struct Outcome {
    json results;
    std::vector<Artifact> artifacts;
    GridChart grid;
    bool pass = true;
};

DualOptions dual_options(const RunConfig& c, const Input& in) {
    DualOptions o;
    o.closedness_tol = c.tol.closedness;
    o.holomorphy_tol = c.tol.holomorphy;
    o.zero_tol = c.tol.zero;
    o.pole_threshold = c.tol.pole_threshold;
    // Anchor at the closed-form dual when the generator has one.
    if (in.dual) o.base_value = in.dual->front();
    return o;
}

const QuadDifferential& require_q(const Input& in, const char* op) {
    if (!in.q) throw ValidationError("cli", op, "no quadratic differential: pass --qdiff or use a generator that has one");
    return *in.q;
}

Outcome cmd_generate(const RunConfig& c) {
    const GridChart grid = chart_for(c, default_chart(c.generator, c.grid.n));
    const auto g = generate(c.generator, grid, c.params, immersion_options(c.tol));
    Outcome o;
    o.grid = grid;
    o.results = {{"name", g.name},
                 {"orientation", g.orientation},
                 {"mean_curvature", opt_number(g.mean_curvature)},
                 {"conformality_residual", g.immersion.conformality_residual()},
                 {"diameter", g.immersion.diameter()},
                 {"has_q", g.q.has_value()},
                 {"has_dual", g.dual.has_value()}};
    o.artifacts.push_back({"surface.obj", obj_text(grid, g.immersion.position(), g.name)});
    o.artifacts.push_back({"positions.csv", positions_text(grid, g.immersion.position())});
    if (g.q) {
        std::ostringstream s;
        write_qdiff_csv(s, *g.q);
        o.artifacts.push_back({"qdiff.csv", s.str()});
    }
    if (g.dual) o.artifacts.push_back({"dual.obj", obj_text(grid, *g.dual, g.name + "_dual")});
    return o;
}

Outcome cmd_analyze(const RunConfig& c) {
    const Input in = load_input(c);
    const auto& imm = in.immersion;
    const auto curv = weingarten_split(imm);
    const auto res = weingarten_residuals(imm, curv);
    const auto umb = umbilics(curv, c.tol.umbilic);
    const auto pc = principal_curvatures(curv);
    const GridChart& g = imm.grid();
    std::vector<double> K(g.size()), k1(g.size()), k2(g.size()), hre(g.size()), him(g.size()), habs(g.size());
    for (std::size_t n = 0; n < g.size(); ++n) {
        k1[n] = pc[n].first;
        k2[n] = pc[n].second;
        K[n] = k1[n] * k2[n];
        hre[n] = curv.hopf_qd[n].real();
        him[n] = curv.hopf_qd[n].imag();
        habs[n] = std::abs(curv.hopf_qd[n]);
    }
    Outcome o;
    o.grid = g;
    o.results = {{"source", in.source},
                 {"conformality_residual", imm.conformality_residual()},
                 {"H", stats_json(curv.H)},
                 {"gauss_curvature", stats_json(K)},
                 {"k1", stats_json(k1)},
                 {"k2", stats_json(k2)},
                 {"hopf_abs", stats_json(habs)},
                 {"umbilic_count", umb.size()},
                 {"umbilic_nodes", nodes(umb)},
                 {"branch_nodes", nodes(imm.branch_nodes())},
                 {"residuals",
                  {{"weingarten", res.weingarten},
                   {"anticonformality", res.anticonformality},
                   {"normal_leak", res.normal_leak},
                   {"omega_fraction", res.omega_fraction},
                   {"hopf_relation_max", max_abs(relate_hopf(imm, curv))}}}};
    std::ostringstream fields;
    write_fields_csv(fields, g,
                     {{"H", &curv.H}, {"K", &K}, {"k1", &k1}, {"k2", &k2}, {"hopf_re", &hre}, {"hopf_im", &him},
                      {"conformality", &imm.conformality()}});
    o.artifacts.push_back({"fields.csv", fields.str()});
    o.artifacts.push_back({"surface.obj", obj_text(g, imm.position(), in.source)});
    return o;
}

json dual_json(const DualResult& d, const DualityReport& r) {
    return {{"closedness", d.closedness},
            {"path_deviation", d.path_deviation},
            {"classical", r.classical},
            {"commutator", r.commutator},
            {"real_multiple", r.real_multiple},
            {"normal_flip", r.normal_flip},
            {"branch_nodes", nodes(d.branch_nodes)},
            {"pole_nodes", nodes(d.pole_nodes)},
            {"Hstar", stats_json(d.Hstar)},
            {"Hstar_fit", stats_json(r.hstar_fit)},
            {"stretch", stats_json(d.stretch)}};
}

Outcome cmd_dual(const RunConfig& c) {
    const Input in = load_input(c);
    const auto dual = integrate_dual(in.immersion, require_q(in, "dual"), dual_options(c, in));
    const auto rep = verify_duality(in.immersion, dual, weingarten_split(in.immersion));
    Outcome o;
    o.grid = in.immersion.grid();
    o.results = dual_json(dual, rep);
    o.results["source"] = in.source;
    o.artifacts.push_back({"surface.obj", obj_text(o.grid, in.immersion.position(), in.source)});
    o.artifacts.push_back({"dual.obj", obj_text(o.grid, dual.fstar, in.source + "_dual")});
    o.artifacts.push_back({"dual_positions.csv", positions_text(o.grid, dual.fstar)});
    return o;
}

Outcome cmd_bonnet(const RunConfig& c) {
    const Input in = load_input(c);
    const auto dual = integrate_dual(in.immersion, require_q(in, "bonnet"), dual_options(c, in));
    BonnetOptions bo;
    bo.closedness_tol = c.tol.closedness;
    bo.congruence_tol = c.tol.congruence;
    const auto pair = bonnet_pair(in.immersion, dual, c.eps, bo);
    json zeros = nullptr;
    try {
        zeros = nodes(zero_locus(pair.D, c.tol.zero).nodes);
    } catch (const ValidationError&) {
        // D vanishes identically: no distinguished zeros.
    }
    const auto corr = umbilic_branch_correspondence(pair, dual, c.tol.umbilic);
    Outcome o;
    o.grid = in.immersion.grid();
    o.results = {{"source", in.source},
                 {"eps", pair.eps},
                 {"metric_residual", pair.metric_residual},
                 {"H_difference", pair.H_difference},
                 {"H_relative", pair.H_relative},
                 {"lambda_norm_gap", pair.lambda_norm_gap},
                 {"normal_recovery", pair.normal_recovery},
                 {"congruence_rms", pair.congruence_rms},
                 {"diameter", pair.diameter},
                 {"congruent", pair.congruent},
                 {"shape_distortion", shape_distortion_check(in.immersion, dual, pair)},
                 {"D_cr_residual", pair.D_cr_residual},
                 {"D_zero_nodes", zeros},
                 {"H_plus", stats_json(pair.Hplus)},
                 {"H_minus", stats_json(pair.Hminus)},
                 {"umbilics_plus", nodes(corr.umbilics_plus)},
                 {"umbilics_minus", nodes(corr.umbilics_minus)},
                 {"branch_nodes", nodes(corr.branch_nodes)},
                 {"umbilic_branch_coincide", corr.coincide}};
    o.artifacts.push_back({"fplus.obj", obj_text(o.grid, pair.fplus.position(), "fplus")});
    o.artifacts.push_back({"fminus.obj", obj_text(o.grid, pair.fminus.position(), "fminus")});
    return o;
}

QuadDifferential ivp_q(const RunConfig& c, const Input& in) {
    const GridChart& g = in.immersion.grid();
    if (c.phi == "generator" || c.phi == "csv") {
        if (c.phi == "csv" && !c.qdiff_csv) throw ValidationError("cli", "solve-ivp", "phi=csv needs --qdiff");
        return require_q(in, "solve-ivp");
    }
    Complex v;
    if (c.phi == "one") {
        v = 1.0;
    } else if (c.phi == "i") {
        v = {0.0, 1.0};
    } else if (c.phi == "minus_one") {
        v = -1.0;
    } else {
        throw ValidationError("cli", "solve-ivp", "unknown phi '" + c.phi + "' (generator, one, i, minus_one, csv)");
    }
    return QuadDifferential::constant(g, v);
}

Outcome cmd_solve_ivp(const RunConfig& c) {
    const std::size_t rows = std::max<std::size_t>(c.grid.n, 2 * c.steps + 1);
    const Input in = load_input(c, strip_chart(rows | 1, c.steps));
    const GridChart& g = in.immersion.grid();
    const auto q = ivp_q(c, in);
    const std::size_t row = c.row.value_or(g.ny / 2);
    const auto prob = CauchyProblem::make(in.immersion, q, row);
    const auto wp = check_wellposed(prob);
    const auto march = march_solve(prob, c.steps);
    ReconstructOptions ro;
    ro.closedness_tol = std::max(c.tol.closedness, 1e-2);
    const auto rec = reconstruct(prob, march, ro);
    const auto sys = system_residuals(prob, march);
    double dev = 0.0;
    for (const auto& l : march.lambda.lambda) dev = std::max(dev, (l - quaternion_units::one).norm());

    Outcome o;
    o.grid = g;
    o.results = {{"source", in.source},
                 {"phi", c.phi},
                 {"row", row},
                 {"steps", c.steps},
                 {"wellposed", {{"det_margin", wp.det_margin}, {"angle_margin_deg", wp.angle_margin_deg}}},
                 {"strip", grid_json(march.strip)},
                 {"max_condition", march.max_condition},
                 {"lambda_deviation_from_one", dev},
                 {"initial_mismatch", rec.initial_mismatch},
                 {"closedness", rec.closedness},
                 {"dual_curl", rec.dual_curl},
                 {"dual_curl_tangential", rec.dual_curl_tangential},
                 {"path_deviation", rec.path_deviation},
                 {"system_closedness", sys.closedness},
                 {"system_scalar", sys.scalar}};
    o.artifacts.push_back({"strip.obj", obj_text(march.strip, rec.ftilde.position(), "ftilde")});
    std::vector<double> lw, lx, ly, lz;
    for (const auto& l : march.lambda.lambda) {
        lw.push_back(l.w);
        lx.push_back(l.x);
        ly.push_back(l.y);
        lz.push_back(l.z);
    }
    std::ostringstream s;
    write_fields_csv(s, march.strip, {{"lambda_w", &lw}, {"lambda_x", &lx}, {"lambda_y", &ly}, {"lambda_z", &lz}});
    o.artifacts.push_back({"lambda.csv", s.str()});
    return o;
}

Outcome cmd_verify(const RunConfig& c) {
    VerifyOptions vo;
    vo.n = c.grid.n;
    if (!c.all) vo.groups = c.checks;
    const auto rep = run_verification(vo);
    json checks = json::array();
    std::size_t failed = 0;
    for (const auto& ch : rep.checks) {
        checks.push_back({{"group", ch.group},
                          {"name", ch.name},
                          {"value", number(ch.value)},
                          {"relation", ch.relation},
                          {"threshold", ch.threshold},
                          {"pass", ch.pass},
                          {"series", ch.series}});
        failed += ch.pass ? 0 : 1;
    }
    Outcome o;
    o.grid = default_chart("cylinder", c.grid.n);
    o.pass = rep.pass;
    o.results = {{"ladder", rep.ladder},
                 {"checks", checks},
                 {"total", rep.checks.size()},
                 {"failed", failed},
                 {"pass", rep.pass}};
    return o;
}

double round2(double v) { return std::isfinite(v) ? std::round(v * 100.0) / 100.0 : v; }

json ladder_json(const std::vector<double>& series) {
    json orders = json::array();
    for (std::size_t k = 0; k + 1 < series.size(); ++k) {
        orders.push_back(number(round2(std::log2(series[k] / series[k + 1]))));
    }
    return {{"values", series}, {"orders", orders}, {"min_order", number(round2(observed_order(series)))}};
}

Outcome cmd_converge(const RunConfig& c) {
    if (c.positions_csv) throw ValidationError("cli", "converge", "converge needs a generator, not sampled input");
    const std::vector<std::size_t> ladder{c.grid.n, 2 * c.grid.n - 1, 4 * c.grid.n - 3};
    std::map<std::string, std::vector<double>> series;
    bool dual_ok = true;
    for (std::size_t n : ladder) {
        RunConfig level = c;
        level.grid.n = n;
        if (c.grid.nx) level.grid.nx = (*c.grid.nx - 1) * (n - 1) / (c.grid.n - 1) + 1;
        if (c.grid.ny) level.grid.ny = (*c.grid.ny - 1) * (n - 1) / (c.grid.n - 1) + 1;
        const Input in = load_input(level);
        const auto curv = weingarten_split(in.immersion);
        const auto r = weingarten_residuals(in.immersion, curv);
        series["weingarten"].push_back(r.weingarten);
        series["anticonformality"].push_back(r.anticonformality);
        series["normal_leak"].push_back(r.normal_leak);
        series["conformality"].push_back(in.immersion.conformality_residual());
        if (in.q && dual_ok) {
            try {
                const auto dual = integrate_dual(in.immersion, *in.q, dual_options(level, in));
                const auto rep = verify_duality(in.immersion, dual, curv);
                series["dual_closedness"].push_back(dual.closedness);
                series["dual_classical"].push_back(rep.classical);
            } catch (const Error&) {
                dual_ok = false;
            }
        }
    }
    if (!dual_ok) {
        series.erase("dual_closedness");
        series.erase("dual_classical");
    }
    Outcome o;
    o.grid = load_input(c).immersion.grid();
    json res;
    for (const auto& [name, s] : series) res[name] = ladder_json(s);
    o.results = {{"source", c.generator}, {"ladder", ladder}, {"residuals", res}};
    return o;
}

// 64-bit FNV-1a.
std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

std::optional<std::string> output_dir(const RunConfig& c) {
    if (const char* env = std::getenv("QUATSURF_OUTPUT_DIR"); env && *env) return std::string(env);
    return c.output_dir;
}

json error_json(const char* kind, const std::string& module, const std::string& op, const std::string& message,
                const std::optional<std::size_t>& node) {
    return {{"kind", kind},
            {"module", module},
            {"op", op},
            {"message", message},
            {"node", node ? json(*node) : json(nullptr)}};
}

}  // namespace

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> c{"generate", "analyze", "dual", "bonnet", "solve-ivp", "verify", "converge"};
    return c;
}

std::string canonical_config(const RunConfig& config) { return config_json(config).dump(); }

namespace {

// Reads the keys of j into the matching fields; unknown keys are rejected.
class Reader {
public:
    Reader(const json& j, std::string where) : j_(j), where_(std::move(where)) {
        if (!j_.is_object()) throw ValidationError("cli", "config", where_ + " must be an object");
    }

    template <class T>
    Reader& get(const char* key, T& out) {
        seen_.push_back(key);
        if (const auto it = j_.find(key); it != j_.end()) out = convert<T>(*it, key);
        return *this;
    }

    template <class T>
    Reader& get(const char* key, std::optional<T>& out) {
        seen_.push_back(key);
        if (const auto it = j_.find(key); it != j_.end()) {
            out = it->is_null() ? std::nullopt : std::optional<T>(convert<T>(*it, key));
        }
        return *this;
    }

    const json* child(const char* key) {
        seen_.push_back(key);
        const auto it = j_.find(key);
        return it == j_.end() ? nullptr : &*it;
    }

    void finish() const {
        for (const auto& [k, v] : j_.items()) {
            if (std::find(seen_.begin(), seen_.end(), k) == seen_.end()) {
                throw ValidationError("cli", "config", "unknown key '" + k + "' in " + where_);
            }
        }
    }

private:
    template <class T>
    T convert(const json& v, const char* key) const {
        try {
            return v.get<T>();
        } catch (const json::exception&) {
            throw ValidationError("cli", "config", "bad value for '" + std::string(key) + "' in " + where_);
        }
    }

    const json& j_;
    std::string where_;
    std::vector<std::string> seen_;
};

}  // namespace

RunConfig config_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError("cli", "config", std::string("invalid JSON: ") + e.what());
    }
    RunConfig c;
    Reader r(j, "config");
    r.get("command", c.command)
        .get("generator", c.generator)
        .get("positions_csv", c.positions_csv)
        .get("qdiff_csv", c.qdiff_csv)
        .get("eps", c.eps)
        .get("phi", c.phi)
        .get("row", c.row)
        .get("steps", c.steps)
        .get("all", c.all)
        .get("checks", c.checks)
        .get("output_dir", c.output_dir)
        .get("seed", c.seed);
    if (const json* p = r.child("params")) {
        Reader(*p, "params")
            .get("radius", c.params.radius)
            .get("order", c.params.order)
            .get("neck", c.params.neck)
            .get("bulge", c.params.bulge)
            .get("semi_a", c.params.semi_a)
            .get("semi_c", c.params.semi_c)
            .get("theta", c.params.theta)
            .finish();
    }
    if (const json* g = r.child("grid")) {
        Reader(*g, "grid")
            .get("n", c.grid.n)
            .get("xmin", c.grid.xmin)
            .get("xmax", c.grid.xmax)
            .get("ymin", c.grid.ymin)
            .get("ymax", c.grid.ymax)
            .get("nx", c.grid.nx)
            .get("ny", c.grid.ny)
            .finish();
    }
    if (const json* t = r.child("tolerances")) {
        Reader(*t, "tolerances")
            .get("stencil_order", c.tol.stencil_order)
            .get("conformality", c.tol.conformality)
            .get("closedness", c.tol.closedness)
            .get("holomorphy", c.tol.holomorphy)
            .get("zero", c.tol.zero)
            .get("umbilic", c.tol.umbilic)
            .get("congruence", c.tol.congruence)
            .get("pole_threshold", c.tol.pole_threshold)
            .finish();
    }
    r.finish();
    return c;
}

std::string config_hash(const RunConfig& config) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a(canonical_config(config))));
    return buf;
}

RunResult run(const RunConfig& config) {
    RunResult out;
    out.output_dir = output_dir(config);
    json report;
    report["command"] = config.command;
    report["config"] = config_json(config);
    report["config_hash"] = config_hash(config);
    report["tolerances"] = tolerances_json(config.tol);
    std::vector<Artifact> artifacts;
    try {
        validate_config(config);
        Outcome o;
        const std::string& cmd = config.command;
        if (cmd == "generate") {
            o = cmd_generate(config);
        } else if (cmd == "analyze") {
            o = cmd_analyze(config);
        } else if (cmd == "dual") {
            o = cmd_dual(config);
        } else if (cmd == "bonnet") {
            o = cmd_bonnet(config);
        } else if (cmd == "solve-ivp") {
            o = cmd_solve_ivp(config);
        } else if (cmd == "verify") {
            o = cmd_verify(config);
        } else {
            o = cmd_converge(config);
        }
        report["grid"] = grid_json(o.grid);
        report["results"] = std::move(o.results);
        report["status"] = o.pass ? "ok" : "failed";
        out.exit_code = o.pass ? 0 : 2;
        artifacts = std::move(o.artifacts);
    } catch (const ValidationError& e) {
        report["status"] = "error";
        report["error"] = error_json("validation", e.module(), e.op(), e.detail(), e.node());
        out.exit_code = 1;
    } catch (const NumericalError& e) {
        report["status"] = "error";
        report["error"] = error_json("numerical", e.module(), e.op(), e.detail(), e.node());
        out.exit_code = 2;
    } catch (const std::exception& e) {
        report["status"] = "error";
        report["error"] = error_json("validation", "cli", config.command, e.what(), std::nullopt);
        out.exit_code = 1;
    }
    out.report = report.dump(2) + "\n";
    const std::string report_name =
        report["status"] == "error" ? std::string("error.json") : config.command + "_report.json";
    artifacts.push_back({report_name, out.report});
    if (out.output_dir) {
        for (const auto& a : artifacts) write_text_file((std::filesystem::path(*out.output_dir) / a.name).string(), a.content);
    }
    out.artifacts = std::move(artifacts);
    return out;
}

}  // namespace quatsurf
