// eulervac: batch front end for the toolkit.
//
// Exit status: 0 all criteria pass, 1 a criterion fails, 2 usage, config or
// input error. Artifacts go to --out; each write is atomic and the run ends
// with manifest.json listing the config digest, inputs and outputs.

#include <openssl/evp.h>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <numbers>

#include "CLI11.hpp"
#include "config.hpp"
#include "eulervac/admissibility.hpp"
#include "eulervac/besov.hpp"
#include "eulervac/commutator.hpp"
#include "eulervac/exponents.hpp"
#include "eulervac/field_io.hpp"
#include "eulervac/parallel.hpp"
#include "eulervac/relative_energy.hpp"
#include "eulervac/report.hpp"
#include "eulervac/riemann.hpp"
#include "eulervac/solver.hpp"
#include "eulervac/strong_solution.hpp"
#include "eulervac/vacuum_example.hpp"

namespace fs = std::filesystem;
using namespace eulervac;
using namespace eulervac::cli;

namespace {

constexpr const char* kToolkitVersion = "0.1.0";

std::string sha256_hex(const std::string& data)
{
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int n = 0;
    if (EVP_Digest(data.data(), data.size(), md, &n, EVP_sha256(), nullptr) != 1) throw Error("SHA-256 digest failed");
    static const char* hex = "0123456789abcdef";
    std::string s;
    for (unsigned int i = 0; i < n; ++i) {
        s += hex[md[i] >> 4];
        s += hex[md[i] & 15];
    }
    return s;
}

Json eos_json(const EosParams& p)
{
    Json j;
    j["kappa"] = json_number(p.kappa);
    j["gamma"] = json_number(p.gamma);
    j["rho_max"] = json_number(p.rho_max);
    return j;
}

/// Output directory plus the list of files written, in write order.
class Artifacts {
public:
    explicit Artifacts(fs::path dir) : dir_(std::move(dir)) {}

    void text(const std::string& name, const std::string& body)
    {
        write_atomic(dir_ / name, body);
        outputs_.push_back(name);
    }

    void json(const std::string& name, const Json& j) { text(name, j.dump(2) + "\n"); }

    /// Field CSV and sidecar; the sidecar also records the EOS for `check`.
    void field(const std::string& name, const FlowField& f, const EosParams& p)
    {
        write_field(f, dir_ / name);
        const fs::path side = sidecar_path(dir_ / name);
        Json meta = Json::parse(read_file(side));
        meta["eos"] = eos_json(p);
        write_atomic(side, meta.dump(2) + "\n");
        outputs_.push_back(name);
        outputs_.push_back(side.filename().string());
    }

    const std::vector<std::string>& outputs() const { return outputs_; }
    const fs::path& dir() const { return dir_; }

private:
    fs::path dir_;
    std::vector<std::string> outputs_;
};

struct Invocation {
    std::string command;
    std::string digest_source;  ///< config bytes, or the canonical argument JSON
    Json arguments = Json::object();
    std::vector<std::string> inputs;
};

/// report.json, manifest.json and the report on stdout.
int finish(Artifacts* out, const Invocation& inv, Json report, bool pass)
{
    report["pass"] = pass;
    if (out) {
        out->json("report.json", report);
        Json m;
        m["command"] = inv.command;
        m["arguments"] = inv.arguments;
        m["config_digest"] = sha256_hex(inv.digest_source);
        m["inputs"] = inv.inputs;
        m["outputs"] = out->outputs();
        m["toolkit_version"] = kToolkitVersion;
        write_json(out->dir() / "manifest.json", m);
    }
    std::cout << report.dump(2) << "\n";
    return pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// Schema fragments.

FieldSpec above_one(std::string key, std::string fallback)
{
    FieldSpec f = real(std::move(key), std::move(fallback));
    f.lo = 1.0;
    f.lo_open = true;
    return f;
}

FieldSpec nonnegative(std::string key, std::optional<std::string> fallback = std::nullopt)
{
    FieldSpec f = real(std::move(key), std::move(fallback));
    f.lo = 0.0;
    return f;
}

Schema eos_schema(const std::string& gamma, const std::string& rho_max = "10")
{
    return {positive("eos.kappa", "1"), above_one("eos.gamma", gamma), positive("eos.rho_max", rho_max)};
}

Schema grid_schema(bool with_geometry)
{
    Schema s = {real("grid.x_min"), real("grid.x_max"), count("grid.n_cells", std::nullopt, 8), positive("grid.t_end"),
                count("grid.frames", "33", 2)};
    if (with_geometry) s.push_back(choice("grid.geometry", {"planar", "radial"}, "planar"));
    return s;
}

Schema scheme_schema()
{
    FieldSpec cfl = positive("scheme.cfl", "0.45");
    cfl.hi = 0.9;
    return {choice("scheme.flux", {"rusanov", "hll"}, "rusanov"), choice("scheme.limiter", {"none", "minmod"}, "none"), cfl};
}

EosParams eos_of(const Config& c)
{
    EosParams p{c.real("eos.kappa"), c.real("eos.gamma"), c.real("eos.rho_max")};
    p.validate();
    return p;
}

SchemeConfig scheme_of(const Config& c, Geometry geometry)
{
    SchemeConfig s;
    s.flux = c.text("scheme.flux") == "hll" ? Flux::hll : Flux::rusanov;
    s.limiter = c.text("scheme.limiter") == "minmod" ? Limiter::minmod : Limiter::none;
    s.cfl = c.real("scheme.cfl");
    s.geometry = geometry;
    s.validate();
    return s;
}

Grid grid_of(const Config& c, int n_cells)
{
    Grid g;
    g.dim = c.has("grid.geometry") && c.text("grid.geometry") == "radial" ? 2 : 1;
    g.x_min = c.real("grid.x_min");
    g.x_max = c.real("grid.x_max");
    g.n_cells = n_cells;
    g.t_start = 0.0;
    g.t_end = c.real("grid.t_end");
    g.n_steps = c.integer("grid.frames");
    try {
        g.validate();
    } catch (const Error& e) {
        throw ConfigError("grid", e.what());
    }
    return g;
}

std::vector<int> resolutions_of(const Config& c, const std::string& key, int fallback)
{
    if (!c.has(key)) return {fallback};
    std::vector<int> n;
    for (double v : c.list(key)) {
        if (v != std::floor(v) || v < 8 || v > 1e8) throw ConfigError(key, "entries must be integers >= 8");
        n.push_back(static_cast<int>(v));
    }
    std::sort(n.begin(), n.end());
    if (std::adjacent_find(n.begin(), n.end()) != n.end()) throw ConfigError(key, "entries must be distinct");
    return n;
}

std::vector<double> eps_of(const Config& c, const std::string& key, std::size_t min_size)
{
    std::vector<double> e = c.list(key);
    if (e.size() < min_size) throw ConfigError(key, "at least " + std::to_string(min_size) + " values required");
    std::sort(e.begin(), e.end(), std::greater<>());
    return e;
}

// ---------------------------------------------------------------------------
// simulate

Schema simulate_schema()
{
    return eos_schema("1.4") + grid_schema(true) + scheme_schema() +
           Schema{choice("initial.kind", {"riemann", "constant", "gaussian"}), nonnegative("initial.rho_left", "1"), real("initial.u_left", "0"),
                  nonnegative("initial.rho_right", "1"), real("initial.u_right", "0"), real("initial.x0", "0"), nonnegative("initial.rho", "1"),
                  real("initial.u", "0"), nonnegative("initial.amplitude", "0"), real("initial.center", "0"), positive("initial.width", "0.1")};
}

int cmd_simulate(const fs::path& config, Artifacts& out)
{
    const Config c = Config::load(config, simulate_schema());
    const EosParams p = eos_of(c);
    const Grid g = grid_of(c, c.integer("grid.n_cells"));
    const SchemeConfig s = scheme_of(c, g.geometry());
    const std::string kind = c.text("initial.kind");
    std::function<double(double)> rho0, u0;
    if (kind == "riemann") {
        const double x0 = c.real("initial.x0"), rl = c.real("initial.rho_left"), rr = c.real("initial.rho_right");
        const double ul = c.real("initial.u_left"), ur = c.real("initial.u_right");
        rho0 = [=](double x) { return x < x0 ? rl : rr; };
        u0 = [=](double x) { return x < x0 ? ul : ur; };
    } else {
        const double r = c.real("initial.rho"), u = c.real("initial.u");
        const double a = kind == "gaussian" ? c.real("initial.amplitude") : 0.0, x0 = c.real("initial.center"), w = c.real("initial.width");
        rho0 = [=](double x) { return r + a * std::exp(-(x - x0) * (x - x0) / (w * w)); };
        u0 = [=](double) { return u; };
    }
    AdvanceStats st;
    const FlowField f = simulate(rho0, u0, g, s, p, &st);
    const EnergyCheck e = check_energy_admissibility(f, p);

    CsvTable t({"t", "mass", "energy"});
    for (int k = 0; k < g.n_steps; ++k) t.add({g.t(k), f.frame_mass(k), e.energy[k]});
    out.field("field.csv", f, p);
    out.text("energy.csv", t.str());

    Json r;
    r["command"] = "simulate";
    r["steps"] = st.steps;
    r["rounding_zeroed"] = st.rounding_zeroed;
    r["min_density"] = json_number(*std::min_element(f.rho.begin(), f.rho.end()));
    r["mass_initial"] = json_number(f.frame_mass(0));
    r["mass_final"] = json_number(f.frame_mass(g.n_steps - 1));
    r["energy_margin"] = json_number(e.margin);
    r["energy_tol"] = json_number(e.tol);
    return finish(&out, {"simulate", c.raw(), Json::object(), {config.string()}}, r, e.pass);
}

// ---------------------------------------------------------------------------
// riemann

Schema riemann_schema()
{
    return eos_schema("1.4") + grid_schema(false) + scheme_schema() +
           Schema{positive("riemann.rho_left"), real("riemann.u_left"), positive("riemann.rho_right"), real("riemann.u_right"),
                  real("riemann.x0", "0"), nonnegative("riemann.tau", "0"), positive_list("study.resolutions", ""), real("study.min_order", "0.8")};
}

int cmd_riemann(const fs::path& config, Artifacts& out)
{
    const Config c = Config::load(config, riemann_schema());
    RiemannSetup s;
    s.rho_L = c.real("riemann.rho_left");
    s.u_L = c.real("riemann.u_left");
    s.rho_R = c.real("riemann.rho_right");
    s.u_R = c.real("riemann.u_right");
    s.x0 = c.real("riemann.x0");
    s.params = eos_of(c);
    const RarefactionWaves w = rarefaction_waves(s);
    const double tau = c.real("riemann.tau");
    const SchemeConfig scheme = scheme_of(c, Geometry::planar);
    const std::vector<int> ns = resolutions_of(c, "study.resolutions", c.integer("grid.n_cells"));

    struct Result {
        FlowField field;
        double l1_rho = 0.0, l1_mom = 0.0;
    };
    const std::function<Result(std::size_t)> one = [&](std::size_t j) {
        const Grid g = grid_of(c, ns[j]);
        const double T = g.t_end + tau;
        Result r;
        if (tau > 0.0)
            r.field = simulate([&](double x) { return exact_rarefaction(s, w, tau, x).rho; }, [&](double x) { return exact_rarefaction(s, w, tau, x).u; },
                               g, scheme, s.params);
        else
            r.field = simulate([&](double x) { return x < s.x0 ? s.rho_L : s.rho_R; }, [&](double x) { return x < s.x0 ? s.u_L : s.u_R; }, g, scheme,
                               s.params);
        const int k = g.n_steps - 1;
        for (int i = 0; i < g.n_cells; ++i) {
            const PointState e = exact_rarefaction(s, w, T, g.x(i));
            r.l1_rho += std::abs(r.field.rho_at(k, i) - e.rho) * g.dx();
            r.l1_mom += std::abs(r.field.mom_at(k, i) - e.rho * e.u) * g.dx();
        }
        return r;
    };
    const std::vector<Result> res = parallel_map<Result>(ns.size(), one, worker_count());

    CsvTable errors({"n_cells", "dx", "l1_rho", "l1_mom"});
    std::vector<double> h, e;
    for (std::size_t j = 0; j < ns.size(); ++j) {
        const Grid& g = res[j].field.grid;
        errors.add({static_cast<double>(ns[j]), g.dx(), res[j].l1_rho, res[j].l1_mom});
        h.push_back(g.dx());
        e.push_back(res[j].l1_rho);
    }
    const FlowField& fine = res.back().field;
    const Grid& g = fine.grid;
    const int k = g.n_steps - 1;
    CsvTable profile({"x", "rho_exact", "u_exact", "rho", "mom"});
    SvgSeries exact{"exact", {}, {}, true}, numeric{"finite volume", {}, {}, false};
    for (int i = 0; i < g.n_cells; ++i) {
        const PointState q = exact_rarefaction(s, w, g.t_end + tau, g.x(i));
        profile.add({g.x(i), q.rho, q.u, fine.rho_at(k, i), fine.mom_at(k, i)});
        exact.x.push_back(g.x(i));
        exact.y.push_back(q.rho);
        numeric.x.push_back(g.x(i));
        numeric.y.push_back(fine.rho_at(k, i));
    }
    out.text("errors.csv", errors.str());
    out.text("profile.csv", profile.str());
    out.text("profile.svg", svg_plot("density at t_end", "x", "rho", {exact, numeric}, false, false));

    Json r;
    r["command"] = "riemann";
    r["rho_star"] = json_number(w.rho_star);
    r["u_star"] = json_number(w.u_star);
    r["vacuum_middle"] = w.vacuum_middle;
    r["left_fan"] = json_array({w.left_head, w.left_tail});
    r["right_fan"] = json_array({w.right_tail, w.right_head});
    r["resolutions"] = ns;
    r["l1_rho"] = json_array(e);
    bool pass = true;
    if (ns.size() >= 2) {
        const double order = round_slope(loglog_slope(h, e));
        r["l1_order"] = json_number(order);
        r["min_order"] = json_number(c.real("study.min_order"));
        pass = order >= c.real("study.min_order");
    }
    return finish(&out, {"riemann", c.raw(), Json::object(), {config.string()}}, r, pass);
}

// ---------------------------------------------------------------------------
// check

struct CheckOptions {
    std::string input;
    std::string criterion = "energy";
    std::optional<double> gamma, kappa, rho_max;
    double allowance = 0.0;
    double weak_tol = 1e-2;
    double vacuum_tol = 1e-6;
};

int cmd_check(const CheckOptions& o, Artifacts* out)
{
    const FlowField f = read_field(o.input);
    const Json meta = Json::parse(read_file(sidecar_path(o.input)));
    EosParams p;
    if (meta.contains("eos")) p = {meta["eos"].at("kappa").get<double>(), meta["eos"].at("gamma").get<double>(), p.rho_max};
    if (meta.contains("eos") && meta["eos"].at("rho_max").is_number()) p.rho_max = meta["eos"]["rho_max"].get<double>();
    if (!meta.contains("eos") && !o.gamma) throw ConfigError("--gamma", "the input records no EOS; pass --gamma (and --kappa)");
    if (o.gamma) p.gamma = *o.gamma;
    if (o.kappa) p.kappa = *o.kappa;
    if (o.rho_max) p.rho_max = *o.rho_max;
    p.validate();

    Json r;
    r["command"] = "check";
    r["criterion"] = o.criterion;
    r["eos"] = eos_json(p);
    bool pass = true;
    if (o.criterion == "energy") {
        const EnergyCheck e = check_energy_admissibility(f, p, o.allowance);
        r["margin"] = json_number(e.margin);
        r["tol"] = json_number(e.tol);
        r["energy"] = json_array(e.energy);
        pass = e.pass;
    } else if (o.criterion == "lambda") {
        r["lambda"] = json_array(lambda_series(f));
    } else {
        AdmissibilityOptions ao;
        ao.energy_allowance = o.allowance;
        ao.weak_tol = o.weak_tol;
        ao.vacuum_velocity_tol = o.vacuum_tol;
        const bool has_vacuum = std::any_of(f.rho.begin(), f.rho.end(), [](double x) { return x <= 0.0; });
        const AdmissibilityReport a = check_admissibility(f, p, ao);
        Json verdicts = Json::object();
        for (const auto& [name, ok] : a.verdicts) verdicts[name] = ok;
        if (has_vacuum && !f.exterior_velocity) verdicts["vacuum_velocity"] = false;
        r["weak_residual"] = json_array({a.weak_residual->first, a.weak_residual->second});
        r["energy_margin"] = json_number(a.energy->margin);
        if (a.vacuum_velocity) r["vacuum_velocity_residual"] = json_number(a.vacuum_velocity->max_residual);
        r["verdicts"] = verdicts;
        if (o.criterion == "weak") {
            pass = verdicts["weak_form"].get<bool>();
        } else if (o.criterion == "vacuum") {
            pass = !verdicts.contains("vacuum_velocity") || verdicts["vacuum_velocity"].get<bool>();
        } else {
            for (const auto& [name, ok] : verdicts.items()) pass = pass && ok.get<bool>();
        }
    }
    Invocation inv{"check", "", Json::object(), {o.input, sidecar_path(o.input).string()}};
    inv.arguments["criterion"] = o.criterion;
    inv.arguments["eos"] = eos_json(p);
    inv.arguments["allowance"] = json_number(o.allowance);
    inv.arguments["weak_tol"] = json_number(o.weak_tol);
    inv.arguments["vacuum_tol"] = json_number(o.vacuum_tol);
    inv.digest_source = inv.arguments.dump() + read_file(o.input) + read_file(sidecar_path(o.input));
    return finish(out, inv, r, pass);
}

// ---------------------------------------------------------------------------
// exponents

struct ExponentOptions {
    double gamma = 0.0, alpha = 0.0, beta = 0.0, theta = 0.0, q = 0.0;
    std::optional<double> kappa_exp, nu;
};

Json slack_json(const SlackReport& s)
{
    Json j;
    for (std::size_t i = 0; i < s.names.size(); ++i) j["slacks"][s.names[i]] = json_number(s.slacks[i]);
    j["pass"] = s.pass;
    return j;
}

int cmd_exponents(const ExponentOptions& o, Artifacts* out)
{
    const ExponentWindow w = solve_window(o.gamma, o.alpha, o.beta, o.theta, o.q);
    Json r;
    r["command"] = "exponents";
    r["gamma"] = json_number(o.gamma);
    r["alpha"] = json_number(o.alpha);
    r["beta"] = json_number(o.beta);
    r["theta"] = json_number(o.theta);
    r["q"] = json_number(o.q);
    r["theta_threshold"] = json_number(w.threshold);
    r["feasible"] = w.feasible;
    if (!w.reason.empty()) r["reason"] = w.reason;
    bool pass = w.feasible;
    if (w.feasible) {
        r["kappa_window"] = json_array({w.kappa_lo, w.kappa_hi});
        r["nu_window"] = json_array({w.nu_lo, w.nu_hi});
        r["q_tilde"] = json_number(w.q_tilde);
        r["q_tilde_unbounded"] = w.q_tilde_unbounded;
        r["p"] = json_number(w.p_exp);
        const WindowCheck wc = check_window(w);
        r["window_check"] = {{"interior_samples", wc.interior_samples}, {"interior_passed", wc.interior_passed}, {"pass", wc.pass}};
        pass = wc.pass;
    }
    if (o.kappa_exp || o.nu) {
        if (!o.kappa_exp || !o.nu) throw ConfigError("--kappa-exp", "--kappa-exp and --nu must be given together");
        const SlackReport s = verify_full_system(w, *o.kappa_exp, *o.nu);
        r["point"] = slack_json(s);
        r["point"]["kappa_exp"] = json_number(*o.kappa_exp);
        r["point"]["nu"] = json_number(*o.nu);
        pass = pass && s.pass;
    }
    Invocation inv{"exponents", "", Json::object(), {}};
    for (const char* k : {"gamma", "alpha", "beta", "theta", "q"}) inv.arguments[k] = r[k];
    if (o.kappa_exp) inv.arguments["kappa_exp"] = json_number(*o.kappa_exp);
    if (o.nu) inv.arguments["nu"] = json_number(*o.nu);
    inv.digest_source = inv.arguments.dump();
    return finish(out, inv, r, pass);
}

// ---------------------------------------------------------------------------
// besov

Schema besov_schema()
{
    FieldSpec q = real("besov.q", "2");
    q.lo = 1.0;
    return {choice("profile.kind", {"cusp", "weierstrass", "smooth", "constant"}),
            positive("profile.alpha", "0.5"),
            real("profile.center", "0"),
            count("profile.levels", "12", 1),
            real("profile.value", "1"),
            real("profile.x_min", "-1"),
            real("profile.x_max", "1"),
            count("profile.n_cells", "4096", 16),
            positive("besov.alpha"),
            q,
            positive_list("besov.eps"),
            positive("besov.tol", "0.05")};
}

int cmd_besov(const fs::path& config, Artifacts& out)
{
    const Config c = Config::load(config, besov_schema());
    const std::string kind = c.text("profile.kind");
    const double a = c.real("profile.alpha"), x0 = c.real("profile.center"), v = c.real("profile.value");
    std::function<double(double)> fn;
    if (kind == "cusp") fn = cusp(x0, a);
    if (kind == "weierstrass") fn = weierstrass_sawtooth(a, c.integer("profile.levels"));
    if (kind == "smooth") fn = [](double x) { return std::sin(std::numbers::pi * x); };
    if (kind == "constant") fn = [v](double) { return v; };
    if (!(c.real("profile.x_min") < c.real("profile.x_max"))) throw ConfigError("profile.x_max", "must exceed profile.x_min");
    const Profile u = sample_profile(c.real("profile.x_min"), c.real("profile.x_max"), c.integer("profile.n_cells"), fn);
    const double alpha = c.real("besov.alpha"), q = c.real("besov.q");
    const std::vector<double> eps = eps_of(c, "besov.eps", 3);
    const MollificationRateReport m = verify_mollification_rates(u, default_kernel(1), alpha, q, eps, c.real("besov.tol"));

    CsvTable t({"eps", "error_norm", "gradient_norm"});
    SvgSeries err{"||u_eps - u||", {}, {}, false}, grad{"||grad u_eps||", {}, {}, true};
    for (std::size_t j = 0; j < m.eps.size(); ++j) {
        t.add({m.eps[j], m.error_norms[j], m.gradient_norms[j]});
        err.x.push_back(m.eps[j]);
        err.y.push_back(m.error_norms[j]);
        grad.x.push_back(m.eps[j]);
        grad.y.push_back(m.gradient_norms[j]);
    }
    out.text("rates.csv", t.str());
    out.text("rates.svg", svg_plot("mollification rates", "eps", "L^q norm", {err, grad}, true, true));

    Json r;
    r["command"] = "besov";
    r["profile"] = kind;
    r["alpha"] = json_number(alpha);
    r["q"] = json_number(q);
    if (alpha < 1.0) r["seminorm"] = json_number(estimate_seminorm(u, alpha, q, default_shifts(u.size())).seminorm);
    r["error_slope"] = m.error_slope ? json_number(round_slope(*m.error_slope)) : Json(nullptr);
    r["gradient_slope"] = m.gradient_slope ? json_number(round_slope(*m.gradient_slope)) : Json(nullptr);
    r["expected_error_slope"] = json_number(alpha);
    r["expected_gradient_slope"] = json_number(alpha - 1.0);
    r["tol"] = json_number(m.tol);
    return finish(&out, {"besov", c.raw(), Json::object(), {config.string()}}, r, m.pass);
}

// ---------------------------------------------------------------------------
// commutator-rate

Schema commutator_schema()
{
    FieldSpec q = real("commutator.q", "4");
    q.lo = 2.0;
    return {choice("fields.kind", {"weierstrass", "random_weierstrass", "cusp"}, "random_weierstrass"),
            positive("fields.alpha1", "0.8"),
            positive("fields.alpha2", "0.8"),
            count("fields.levels", "12", 1),
            count("fields.n_cells", "4096", 64),
            count("fields.ensemble", "1", 1),
            count("fields.seed", "1", 0),
            nonnegative("fields.offset", "1"),
            real("fields.phase", "0.25"),
            choice("commutator.nonlinearity", {"product", "affine", "pressure"}, "product"),
            q,
            positive_list("commutator.eps"),
            real("commutator.x_lo", "0.25"),
            real("commutator.x_hi", "0.75"),
            positive("commutator.tol", "0.1"),
            positive("commutator.affine_tol", "1e-12"),
            real("commutator.a", "1"),
            real("commutator.b", "2"),
            real("commutator.c", "0"),
            positive("commutator.kappa", "1"),
            above_one("commutator.gamma", "1.4")};
}

int cmd_commutator(const fs::path& config, Artifacts& out)
{
    const Config c = Config::load(config, commutator_schema());
    const std::string kind = c.text("fields.kind");
    const double a1 = c.real("fields.alpha1"), a2 = c.real("fields.alpha2"), offset = c.real("fields.offset");
    const int levels = c.integer("fields.levels"), n = c.integer("fields.n_cells"), ensemble = c.integer("fields.ensemble");
    if (kind != "random_weierstrass" && ensemble != 1) throw ConfigError("fields.ensemble", "only random_weierstrass fields form an ensemble");
    const auto seed = static_cast<std::uint64_t>(c.integer("fields.seed"));

    const std::string nl = c.text("commutator.nonlinearity");
    const Nonlinearity G = nl == "affine"     ? affine_nonlinearity(c.real("commutator.a"), c.real("commutator.b"), c.real("commutator.c"))
                           : nl == "pressure" ? pressure_nonlinearity(c.real("commutator.kappa"), c.real("commutator.gamma"))
                                              : product_nonlinearity();
    const MollifierKernel k = default_kernel(1);
    const double q = c.real("commutator.q"), x_lo = c.real("commutator.x_lo"), x_hi = c.real("commutator.x_hi"), tol = c.real("commutator.tol");
    const std::vector<double> eps = eps_of(c, "commutator.eps", 4);

    using Pair = std::pair<Profile, Profile>;
    const std::function<Pair(std::size_t)> make = [&](std::size_t j) {
        std::function<double(double)> f, g;
        if (kind == "random_weierstrass") {
            f = random_phase_weierstrass(a1, levels, seed + 2 * j);
            g = random_phase_weierstrass(a2, levels, seed + 2 * j + 1);
        } else if (kind == "weierstrass") {
            f = weierstrass_sawtooth(a1, levels);
            g = weierstrass_sawtooth(a2, levels, c.real("fields.phase"));
        } else {
            f = cusp(0.5, a1);
            g = cusp(0.5 + c.real("fields.phase") * 0.1, a2);
        }
        return Pair{sample_profile(0.0, 1.0, n, [&](double x) { return offset + f(x); }), sample_profile(0.0, 1.0, n, g)};
    };
    const int workers = worker_count();
    const std::vector<Pair> pairs = parallel_map<Pair>(static_cast<std::size_t>(ensemble), make, workers);
    const RateReport rate = ensemble_rate(pairs, G, k, a1, a2, q, eps, x_lo, x_hi, tol);

    struct Diag {
        double max_abs = 0.0, defect = 0.0;
    };
    const std::function<Diag(std::size_t)> diag = [&](std::size_t j) {
        const CommutatorField f = commutator_field(pairs[0].first, pairs[0].second, G, k, rate.eps_sequence[j]);
        Diag d;
        for (int i = f.window.first; i < f.window.second; ++i) d.max_abs = std::max(d.max_abs, std::abs(f.total[i]));
        d.defect = f.rearrangement_defect();
        return d;
    };
    const std::vector<Diag> diags = parallel_map<Diag>(rate.eps_sequence.size(), diag, workers);

    CsvTable t({"eps", "norm", "max_abs", "rearrangement_defect"});
    double max_abs = 0.0, max_defect = 0.0;
    for (std::size_t j = 0; j < rate.eps_sequence.size(); ++j) {
        t.add({rate.eps_sequence[j], rate.measured_norms[j], diags[j].max_abs, diags[j].defect});
        max_abs = std::max(max_abs, diags[j].max_abs);
        max_defect = std::max(max_defect, diags[j].defect);
    }
    out.text("rates.csv", t.str());
    out.text("rates.svg", svg_plot("commutator decay", "eps", "L^(q/2) norm", {{"measured", rate.eps_sequence, rate.measured_norms, false}}, true, true));

    Json r;
    r["command"] = "commutator-rate";
    r["nonlinearity"] = nl;
    r["ensemble"] = ensemble;
    r["q"] = json_number(q);
    r["predicted_slope"] = json_number(round_slope(rate.predicted_slope));
    r["fitted_slope"] = json_number(round_slope(rate.fitted_slope));
    r["tol"] = json_number(tol);
    r["vacuous"] = rate.vacuous;
    r["max_abs"] = json_number(max_abs);
    r["max_rearrangement_defect"] = json_number(max_defect);
    // affine G: the commutator vanishes identically, so the verdict is on its size
    bool pass = rate.pass;
    if (nl == "affine") {
        r["affine_tol"] = json_number(c.real("commutator.affine_tol"));
        pass = max_abs <= c.real("commutator.affine_tol");
    }
    return finish(&out, {"commutator-rate", c.raw(), Json::object(), {config.string()}}, r, pass);
}

// ---------------------------------------------------------------------------
// relenergy

Schema relenergy_schema()
{
    return eos_schema("1.4") + scheme_schema() +
           Schema{real("grid.x_min", "-3"), real("grid.x_max", "3"), positive("grid.t_end", "0.5"), count("grid.frames", "33", 2),
                  positive("problem.rho", "1"), real("problem.u", "1"), positive("problem.tau", "0.25"), real("problem.perturb_amplitude", "0.1"),
                  real("problem.perturb_center", "0.8"), positive("problem.perturb_sharpness", "40"), positive_list("study.resolutions", "512 1024")};
}

int cmd_relenergy(const fs::path& config, Artifacts& out)
{
    const Config c = Config::load(config, relenergy_schema());
    RiemannSetup s;
    s.rho_L = s.rho_R = c.real("problem.rho");
    s.u_L = -c.real("problem.u");
    s.u_R = c.real("problem.u");
    s.params = eos_of(c);
    const AnalyticStrong strong = time_shifted(rarefaction_strong(s), c.real("problem.tau"));
    const SchemeConfig scheme = scheme_of(c, Geometry::planar);
    const double A = c.real("problem.perturb_amplitude"), xc = c.real("problem.perturb_center"), kk = c.real("problem.perturb_sharpness");
    const std::vector<int> ns = resolutions_of(c, "study.resolutions", 512);

    struct Result {
        std::vector<double> times, energy, lambda, envelope;
        double allowance = 0.0;
        bool envelope_holds = true;
    };
    const std::function<Result(std::size_t)> one = [&](std::size_t j) {
        const Grid g = grid_of(c, ns[j]);
        const FlowField w = simulate([&](double x) { return std::max(0.0, strong.r(0.0, x) + A * std::exp(-kk * (x - xc) * (x - xc))); },
                                     [&](double x) { return strong.v(0.0, x); }, g, scheme, s.params);
        const FlowField sf = sample_strong(strong, g);
        Result r;
        for (int k = 0; k < g.n_steps; ++k) r.times.push_back(g.t(k));
        r.energy = relative_energy_series(w, sf, s.params);
        r.lambda = lambda_series(sf);
        r.allowance = gronwall_allowance(r.energy, r.lambda, r.times);
        double integral = 0.0;
        for (std::size_t k = 0; k < r.times.size(); ++k) {
            if (k > 0) integral += 0.5 * (r.lambda[k] + r.lambda[k - 1]) * (r.times[k] - r.times[k - 1]);
            r.envelope.push_back((r.energy[0] + r.allowance) * std::exp(integral));
            r.envelope_holds = r.envelope_holds && r.energy[k] <= r.envelope[k] * (1.0 + 1e-12);
        }
        return r;
    };
    const std::vector<Result> res = parallel_map<Result>(ns.size(), one, worker_count());

    Json r;
    r["command"] = "relenergy";
    r["resolutions"] = ns;
    Json rows = Json::array();
    bool pass = true;
    for (std::size_t j = 0; j < ns.size(); ++j) {
        CsvTable t({"t", "relative_energy", "lambda", "envelope"});
        for (std::size_t k = 0; k < res[j].times.size(); ++k) t.add({res[j].times[k], res[j].energy[k], res[j].lambda[k], res[j].envelope[k]});
        out.text("energy_" + std::to_string(ns[j]) + ".csv", t.str());
        rows.push_back({{"n_cells", ns[j]},
                        {"initial_energy", json_number(res[j].energy.front())},
                        {"final_energy", json_number(res[j].energy.back())},
                        {"allowance", json_number(res[j].allowance)},
                        {"envelope_holds", res[j].envelope_holds}});
        pass = pass && res[j].envelope_holds;
        if (j > 0) pass = pass && res[j].allowance < res[j - 1].allowance;
    }
    r["runs"] = rows;
    r["allowance_shrinks"] = ns.size() < 2 ? Json(nullptr) : Json(pass);
    return finish(&out, {"relenergy", c.raw(), Json::object(), {config.string()}}, r, pass);
}

// ---------------------------------------------------------------------------
// example4

Schema example4_schema()
{
    return eos_schema("2", "inf") + Schema{positive("example.R", "1"),
                                           count("example.N", "4", 3),
                                           positive("example.theta", "0.125"),
                                           positive("example.T", "1"),
                                           positive("example.r_max", "3"),
                                           count("example.n_cells", "1024", 8),
                                           count("example.frames", "129", 2),
                                           positive_list("example.eps", "0.125 0.0625 0.03125 0.015625"),
                                           positive_list("example.delta", "1e-4 1e-6 1e-8"),
                                           count("example.kernel_power", "2", 1),
                                           positive("example.eps_floor", "1e-3"),
                                           positive("example.tol", "0.1"),
                                           positive("example.track_tol_cells", "2")};
}

struct Example4Options {
    std::string mode;
    std::string input;
    std::optional<double> theta;
};

int cmd_example4(const fs::path& config, const Example4Options& o, Artifacts& out)
{
    const Config c = Config::load(config, example4_schema());
    const EosParams p = eos_of(c);
    Example4Config ec;
    ec.R = c.real("example.R");
    ec.N_profile = c.integer("example.N");
    ec.theta = c.real("example.theta");
    ec.T = c.real("example.T");
    ec.r_max = c.real("example.r_max");
    ec.n_cells = c.integer("example.n_cells");
    ec.n_frames = c.integer("example.frames");
    ec.eps_seq = eps_of(c, "example.eps", 2);
    ec.delta_seq = c.list("example.delta");
    ec.kernel_power = c.integer("example.kernel_power");
    try {
        ec.validate();
    } catch (const Error& e) {
        throw ConfigError("example", e.what());
    }

    Invocation inv{"example4 " + o.mode, c.raw(), Json::object(), {config.string()}};
    inv.arguments["mode"] = o.mode;
    FlowField run;
    if (!o.input.empty()) {
        run = read_field(o.input);
        if (!run.grid.same_as(ec.grid())) throw ConfigError("--input", "field grid does not match the [example] section");
        inv.inputs.push_back(o.input);
        inv.digest_source += read_file(o.input);
    } else {
        const ExampleData d = build_example(ec, p);
        run = run_example(d, p);
    }
    const double dr = run.grid.dx();

    Json r;
    r["command"] = "example4";
    r["mode"] = o.mode;
    r["n_cells"] = ec.n_cells;
    r["dr"] = json_number(dr);
    bool pass = false;
    if (o.mode == "run") {
        const BoundaryTrack b = track_boundary(run, ec.N_profile, ec.R);
        CsvTable t({"t", "radius", "expected", "error"});
        for (std::size_t k = 0; k < b.times.size(); ++k) t.add({b.times[k], b.radius[k], b.expected[k], b.radius[k] - b.expected[k]});
        if (o.input.empty()) out.field("field.csv", run, p);
        out.text("track.csv", t.str());
        out.text("track.svg", svg_plot("vacuum boundary", "t", "radius", {{"tracked", b.times, b.radius, false}, {"(1 + t) R", b.times, b.expected, true}},
                                       false, false));
        const double bound = c.real("example.track_tol_cells") * dr;
        r["max_error"] = json_number(b.max_error);
        r["max_error_cells"] = json_number(b.max_error / dr);
        r["bound"] = json_number(bound);
        pass = b.max_error <= bound;
    } else if (o.mode == "monitor") {
        const GronwallMonitor m = gronwall_monitor(run, ec.N_profile, ec.R, ec.theta, c.real("example.eps_floor"), c.real("example.tol"));
        CsvTable t({"t", "J", "log_ratio", "bound", "max_div"});
        for (std::size_t k = 0; k < m.times.size(); ++k)
            t.add({m.times[k], m.J[k], std::log(m.J[k] / m.J[0]), (m.C_hat + m.tol) * m.times[k], m.max_div[k]});
        out.text("monitor.csv", t.str());
        r["theta"] = json_number(ec.theta);
        r["eps_floor"] = json_number(m.eps_floor);
        r["C_hat"] = json_number(m.C_hat);
        r["tol"] = json_number(m.tol);
        r["max_excess"] = json_number(m.max_excess);
        r["max_boundary_mismatch"] = json_number(m.max_boundary_mismatch);
        pass = m.pass;
    } else {
        const double theta = o.theta.value_or(ec.theta);
        inv.arguments["theta"] = json_number(theta);
        const IntegrabilityReport ir = check_uniform_integrability(run, example_kernel(ec.kernel_power), ec.R, theta, ec.delta_seq, ec.eps_seq);
        CsvTable t({"eps", "delta", "integral", "jensen_rhs", "product_bound"});
        for (const IntegrabilityRow& row : ir.rows) t.add({row.eps, row.delta, row.integral, row.jensen_rhs, row.product_bound});
        out.text("integrability.csv", t.str());
        r["theta"] = json_number(theta);
        r["N_theta"] = json_number(ec.N_profile * theta);
        r["smallest_delta_integrals"] = json_array(ir.smallest_delta_integrals);
        r["eps_slope"] = json_number(round_slope(ir.eps_slope));
        r["jensen_holds"] = ir.jensen_holds;
        r["delta_stable"] = ir.delta_stable;
        r["uniform"] = ir.uniform;
        r["divergent"] = ir.divergent;
        pass = ir.uniform && !ir.divergent;
    }
    return finish(&out, inv, r, pass);
}

std::string usage_of(const CLI::App& app)
{
    const CLI::App* deepest = &app;
    for (bool more = true; more;) {
        more = false;
        for (const CLI::App* s : deepest->get_subcommands()) {
            deepest = s;
            more = true;
            break;
        }
    }
    return deepest->help();
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Weak-strong uniqueness toolkit for the isentropic Euler equations", "eulervac"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolkitVersion);

    std::string config, out_dir = "eulervac_out";
    auto add_common = [&](CLI::App* s) {
        s->add_option("--config", config, "INI file (schema in configs/README.md)")->required();
        s->add_option("--out", out_dir, "artifact directory")->capture_default_str();
    };
    CLI::App* simulate_cmd = app.add_subcommand("simulate", "finite volume run from an initial state");
    CLI::App* riemann_cmd = app.add_subcommand("riemann", "finite volume vs exact rarefaction solution");
    CLI::App* besov_cmd = app.add_subcommand("besov", "Besov seminorm and mollification rates of a profile");
    CLI::App* commutator_cmd = app.add_subcommand("commutator-rate", "commutator decay rate in eps");
    CLI::App* relenergy_cmd = app.add_subcommand("relenergy", "relative energy against an exact rarefaction");
    for (CLI::App* s : {simulate_cmd, riemann_cmd, besov_cmd, commutator_cmd, relenergy_cmd}) add_common(s);

    CheckOptions co;
    std::string check_out;
    CLI::App* check_cmd = app.add_subcommand("check", "admissibility checks on a stored field");
    check_cmd->add_option("--input", co.input, "field CSV written by simulate or example4")->required();
    check_cmd->add_option("--criterion", co.criterion, "energy | weak | lambda | vacuum | all")
        ->check(CLI::IsMember({"energy", "weak", "lambda", "vacuum", "all"}))
        ->capture_default_str();
    check_cmd->add_option("--gamma", co.gamma, "override the recorded adiabatic exponent");
    check_cmd->add_option("--kappa", co.kappa, "override the recorded pressure constant");
    check_cmd->add_option("--rho-max", co.rho_max, "override the recorded density bound");
    check_cmd->add_option("--allowance", co.allowance, "energy growth allowed before failing")->capture_default_str();
    check_cmd->add_option("--weak-tol", co.weak_tol, "weak-form residual tolerance")->capture_default_str();
    check_cmd->add_option("--vacuum-tol", co.vacuum_tol, "vacuum velocity residual tolerance")->capture_default_str();
    check_cmd->add_option("--out", check_out, "artifact directory (report and manifest)");

    ExponentOptions eo;
    std::string exponents_out;
    CLI::App* exponents_cmd = app.add_subcommand("exponents", "feasible (kappa_exp, nu) window");
    exponents_cmd->add_option("--gamma", eo.gamma)->required();
    exponents_cmd->add_option("--alpha", eo.alpha)->required();
    exponents_cmd->add_option("--beta", eo.beta)->required();
    exponents_cmd->add_option("--theta", eo.theta)->required();
    exponents_cmd->add_option("--q", eo.q)->required();
    exponents_cmd->add_option("--kappa-exp", eo.kappa_exp, "also test this point against the full system");
    exponents_cmd->add_option("--nu", eo.nu);
    exponents_cmd->add_option("--out", exponents_out, "artifact directory (report and manifest)");

    Example4Options xo;
    CLI::App* example_cmd = app.add_subcommand("example4", "radial expanding vacuum example");
    example_cmd->add_option("mode", xo.mode, "run | monitor | integrability")->required()->check(CLI::IsMember({"run", "monitor", "integrability"}));
    add_common(example_cmd);
    example_cmd->add_option("--input", xo.input, "reuse a field written by 'example4 run'");
    example_cmd->add_option("--theta", xo.theta, "integrability exponent; may exceed the config bound");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << "eulervac: " << e.what() << "\n\n" << usage_of(app);
        return 2;
    }

    try {
        worker_count();
        if (check_cmd->parsed()) {
            std::optional<Artifacts> out;
            if (!check_out.empty()) out.emplace(check_out);
            return cmd_check(co, out ? &*out : nullptr);
        }
        if (exponents_cmd->parsed()) {
            std::optional<Artifacts> out;
            if (!exponents_out.empty()) out.emplace(exponents_out);
            return cmd_exponents(eo, out ? &*out : nullptr);
        }
        if (example_cmd->parsed() && xo.theta && xo.mode != "integrability") throw ConfigError("--theta", "only valid with the integrability mode");
        if (!fs::is_regular_file(config)) throw ConfigError("--config", "file '" + config + "' not found");
        Artifacts out(out_dir);
        if (simulate_cmd->parsed()) return cmd_simulate(config, out);
        if (riemann_cmd->parsed()) return cmd_riemann(config, out);
        if (besov_cmd->parsed()) return cmd_besov(config, out);
        if (commutator_cmd->parsed()) return cmd_commutator(config, out);
        if (relenergy_cmd->parsed()) return cmd_relenergy(config, out);
        return cmd_example4(config, xo, out);
    } catch (const ConfigError& e) {
        std::cerr << "eulervac: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "eulervac: error: " << e.what() << "\n";
        return 2;
    }
}
