#include "cli.hpp"

#include "mglcop/copula.hpp"
#include "mglcop/diagnostics.hpp"
#include "mglcop/errors.hpp"
#include "mglcop/evcopula.hpp"
#include "mglcop/glmga.hpp"
#include "mglcop/io.hpp"
#include "mglcop/margins.hpp"
#include "mglcop/regression.hpp"
#include "mglcop/specfun.hpp"
#include "mglcop/stats.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

namespace mglcop::cli {

using nlohmann::json;

namespace {

struct Context {
    std::string command_line;
};

std::string join_args(const std::vector<std::string>& args) {
    std::string out;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (i) out += ' ';
        const bool quote = args[i].empty() || args[i].find_first_of(" \t\"'") != std::string::npos;
        out += quote ? "'" + args[i] + "'" : args[i];
    }
    return out;
}

std::uint64_t resolve_seed(const std::string& s) {
    if (s.empty()) {
        std::random_device rd;
        return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    }
    try {
        std::size_t pos = 0;
        const unsigned long long v = std::stoull(s, &pos);
        if (pos != s.size() || s[0] == '-') throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ValidationError("seed must be an unsigned 64-bit integer, got '" + s + "'");
    }
}

json metadata(const Context& ctx, std::uint64_t seed, const std::string& input_checksum) {
    json m;
    m["version"] = MGLCOP_VERSION;
    m["command_line"] = ctx.command_line;
    m["seed"] = seed;
    m["input_checksum"] = input_checksum;
    return m;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ValidationError("cannot write '" + path + "'");
    f << text;
    if (!f) throw ValidationError("failed writing '" + path + "'");
}

void write_json(const std::string& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

json to_json(const Eigen::VectorXd& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

json to_json(const Eigen::MatrixXd& m) {
    json a = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) a.push_back(to_json(Eigen::VectorXd(m.row(i).transpose())));
    return a;
}

json trace_json(const std::vector<IterationRecord>& trace) {
    json a = json::array();
    for (const auto& r : trace)
        a.push_back({{"iteration", r.iteration}, {"objective", r.objective}, {"grad_norm", r.grad_norm}, {"step", r.step}});
    return a;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep))
        if (!cur.empty()) out.push_back(cur);
    return out;
}

double parse_number(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ValidationError(what + ": not a number: '" + s + "'");
    }
}

// ---- data loading shared by fit and diagnose -------------------------------

struct DataSpec {
    std::vector<std::string> columns;
    std::string pseudo = "rank";
    double bandwidth = 0.2;
    bool log = false;
    bool positive = false;
    std::string covariate;
    std::vector<std::string> knots;
};

json spec_json(const DataSpec& s) {
    return {{"columns", s.columns}, {"pseudo", s.pseudo}, {"bandwidth", s.bandwidth}, {"log", s.log},
            {"positive", s.positive}, {"covariate", s.covariate}, {"knots", s.knots}};
}

DataSpec spec_from_json(const json& j) {
    DataSpec s;
    s.columns = j.at("columns").get<std::vector<std::string>>();
    s.pseudo = j.at("pseudo").get<std::string>();
    s.bandwidth = j.at("bandwidth").get<double>();
    s.log = j.at("log").get<bool>();
    s.positive = j.at("positive").get<bool>();
    s.covariate = j.at("covariate").get<std::string>();
    s.knots = j.at("knots").get<std::vector<std::string>>();
    return s;
}

struct Loaded {
    std::vector<std::vector<double>> cols;  // raw, after the positivity filter
    std::vector<double> covariate;
    std::size_t rows_read = 0;
    std::string checksum;
};

Loaded load(const std::string& path, const DataSpec& spec) {
    const std::string bytes = io::read_file(path);
    std::istringstream in(bytes);
    const io::Table t = io::parse_csv(in);
    Loaded out;
    out.checksum = io::checksum(bytes);
    out.rows_read = t.rows.size();
    std::vector<std::vector<double>> cols;
    for (const auto& c : spec.columns) cols.push_back(t.numeric(c));
    std::vector<double> cov;
    if (!spec.covariate.empty()) cov = t.numeric(spec.covariate);
    out.cols.resize(cols.size());
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        bool keep = true;
        if (spec.positive)
            for (const auto& c : cols) keep = keep && c[i] > 0.0;
        if (!keep) continue;
        for (std::size_t j = 0; j < cols.size(); ++j) out.cols[j].push_back(cols[j][i]);
        if (!cov.empty()) out.covariate.push_back(cov[i]);
    }
    if (out.cols.empty() || out.cols[0].empty()) throw ValidationError("no usable rows in '" + path + "'");
    return out;
}

PseudoSample make_pseudo(const Loaded& d, const DataSpec& spec) {
    const Eigen::Index n = static_cast<Eigen::Index>(d.cols[0].size());
    Eigen::MatrixXd m(n, static_cast<Eigen::Index>(d.cols.size()));
    for (std::size_t j = 0; j < d.cols.size(); ++j)
        for (Eigen::Index i = 0; i < n; ++i) {
            double v = d.cols[j][i];
            if (spec.log) {
                if (!(v > 0.0)) throw ValidationError("--log needs positive values in column '" + spec.columns[j] + "'");
                v = std::log(v);
            }
            m(i, static_cast<Eigen::Index>(j)) = v;
        }
    if (spec.pseudo == "rank") return margins::rank_pseudo_obs(m);
    if (spec.pseudo == "kernel") return margins::kernel_pseudo_obs(m, spec.bandwidth);
    if (spec.pseudo == "none") {
        if (!((m.array() > 0.0).all() && (m.array() < 1.0).all()))
            throw ValidationError("--pseudo none needs values strictly inside (0,1)");
        return PseudoSample{m, PseudoMethod::parametric};
    }
    throw ValidationError("unknown pseudo-observation method '" + spec.pseudo + "'");
}

struct Design {
    Eigen::MatrixXd x;
    std::vector<double> knots;
    double lo = 0.0, hi = 0.0;
};

Design make_design(const Loaded& d, const DataSpec& spec) {
    Design out;
    const std::size_t n = d.cols[0].size();
    if (spec.covariate.empty()) {
        if (!spec.knots.empty()) throw ValidationError("--spline-knots needs --covariate");
        out.x = regression::intercept_design(n);
        return out;
    }
    for (const auto& k : spec.knots) {
        if (!k.empty() && (k[0] == 'q' || k[0] == 'Q')) {
            const double p = parse_number(k.substr(1), "--spline-knots") / 100.0;
            if (!(p > 0.0 && p < 1.0)) throw ValidationError("knot quantile must be strictly between 0 and 100");
            out.knots.push_back(stats::quantile(d.covariate, p));
        } else {
            out.knots.push_back(parse_number(k, "--spline-knots"));
        }
    }
    std::sort(out.knots.begin(), out.knots.end());
    const auto [lo, hi] = std::minmax_element(d.covariate.begin(), d.covariate.end());
    out.lo = *lo;
    out.hi = *hi;
    out.x = regression::ns_basis(d.covariate, out.knots, out.lo, out.hi);
    return out;
}

json regression_json(const regression::RegressionFit& f, const Design& des, bool with_rows) {
    json j;
    j["family"] = to_string(f.family);
    j["beta"] = to_json(f.beta);
    j["se"] = to_json(f.se);
    j["cov"] = to_json(f.cov);
    j["loglik"] = f.loglik;
    j["aic"] = f.aic;
    j["bic"] = f.bic;
    j["n"] = f.n;
    j["iterations"] = f.iterations;
    j["singular_hessian"] = f.singular_hessian;
    if (f.beta.size() == 1) j["delta"] = f.fitted_delta[0];
    if (with_rows) j["fitted_delta"] = to_json(f.fitted_delta);
    if (des.x.cols() > 1 || !des.knots.empty()) {
        j["spline"] = {{"interior_knots", des.knots}, {"boundary", {des.lo, des.hi}}};
    }
    return j;
}

json glmga_json(const GlmgaFit& f) {
    return {{"sigma", f.params.sigma}, {"a", f.params.a}, {"b", f.params.b},
            {"se", {{"sigma", f.se[0]}, {"a", f.se[1]}, {"b", f.se[2]}}},
            {"loglik", f.loglik}, {"aic", f.aic}, {"bic", f.bic}, {"n", f.n},
            {"singular_hessian", f.singular_hessian}, {"iterations", f.iterations}};
}

json spliced_json(const margins::SplicedFit& f) {
    const auto& m = f.margin;
    return {{"w", m.w}, {"threshold", m.u},
            {"count", {{"lambda", m.count.lambda}, {"phi", m.count.phi},
                       {"variance", m.count.variance == margins::NbVariance::quadratic ? "quadratic" : "linear"},
                       {"se_lambda", f.se_lambda}, {"se_phi", f.se_phi}, {"loglik", f.loglik_count}, {"n", f.n_count}}},
            {"tail", {{"mu", m.tail.mu}, {"shape", m.tail.shape}, {"scale", m.tail.scale},
                      {"se_shape", f.se_shape}, {"se_scale", f.se_scale}, {"loglik", f.loglik_tail}, {"n", f.n_tail}}}};
}

margins::NbVariance parse_variance(const std::string& s) {
    if (s == "quadratic") return margins::NbVariance::quadratic;
    if (s == "linear") return margins::NbVariance::linear;
    throw ValidationError("--nb-variance must be quadratic or linear");
}

// ---- subcommands -----------------------------------------------------------

struct SimulateArgs {
    std::string family, out, seed;
    double delta = 0.0;
    std::size_t n = 0;
    int d = 2;
};

int cmd_simulate(const Context& ctx, const SimulateArgs& a) {
    const Family fam = parse_family(a.family);
    if (!(a.delta > 0.0) || !std::isfinite(a.delta)) throw ValidationError("--delta must be positive");
    if (a.n < 1) throw ValidationError("--n must be at least 1");
    if (a.d < 2) throw ValidationError("--d must be at least 2");
    const std::uint64_t seed = resolve_seed(a.seed);
    PseudoSample ps;
    if (fam == Family::mgl || fam == Family::surv_mgl) {
        ps = copula::sample_mgl_copula(a.delta, a.d, a.n, seed, fam == Family::surv_mgl);
    } else if (fam == Family::surv_mgl_ev) {
        if (a.d != 2) throw ValidationError("surv-mgl-ev sampling is bivariate (--d 2)");
        ps = ev::sample_ev(a.delta, a.n, seed);
    } else {
        throw ValidationError("no sampler for family '" + a.family + "'");
    }
    std::string csv;
    for (int j = 0; j < a.d; ++j) csv += (j ? ",u" : "u") + std::to_string(j + 1);
    csv += '\n';
    for (Eigen::Index i = 0; i < ps.n(); ++i) {
        for (Eigen::Index j = 0; j < ps.d(); ++j) {
            if (j) csv += ',';
            csv += io::format_double(ps.values(i, j));
        }
        csv += '\n';
    }
    write_text(a.out, csv);
    json meta;
    meta["metadata"] = metadata(ctx, seed, io::checksum(""));
    meta["family"] = to_string(fam);
    meta["params"] = {{"delta", a.delta}, {"n", a.n}, {"d", a.d}};
    meta["output"] = {{"path", a.out}, {"checksum", io::checksum(csv)}};
    write_json(a.out + ".json", meta);
    return ok;
}

struct FitArgs {
    std::string input, out, model = "copula", family = "surv-mgl", seed, nb_variance = "quadratic";
    std::string columns;
    std::string knots;
    DataSpec spec;
    int threshold = -1;
    int restarts = 3;
};

int cmd_fit(const Context& ctx, FitArgs a) {
    a.spec.columns = split(a.columns, ',');
    a.spec.knots = split(a.knots, ',');
    const std::uint64_t seed = resolve_seed(a.seed);
    json rep;
    rep["model"] = a.model;
    rep["input"] = a.input;
    rep["data"] = spec_json(a.spec);
    try {
        if (a.model == "copula") {
            if (a.spec.columns.size() < 2) throw ValidationError("copula fits need --columns with at least two names");
            const Loaded d = load(a.input, a.spec);
            rep["metadata"] = metadata(ctx, seed, d.checksum);
            const PseudoSample ps = make_pseudo(d, a.spec);
            const Design des = make_design(d, a.spec);
            regression::RegOptions opt;
            opt.restarts = a.restarts;
            opt.seed = seed;
            const Family fam = parse_family(a.family);
            const auto fit = regression::fit_copula_reg(ps, des.x, fam, opt);
            rep["rows_read"] = d.rows_read;
            rep["fit"] = regression_json(fit, des, des.x.cols() > 1);
        } else if (a.model == "glmga" || a.model == "spliced") {
            if (a.spec.columns.size() != 1) throw ValidationError("margin fits need exactly one column in --columns");
            const Loaded d = load(a.input, a.spec);
            rep["metadata"] = metadata(ctx, seed, d.checksum);
            rep["rows_read"] = d.rows_read;
            if (a.model == "glmga") {
                rep["fit"] = glmga_json(glmga_fit(d.cols[0]));
            } else {
                if (a.threshold < 0) throw ValidationError("spliced fits need --threshold");
                rep["fit"] = spliced_json(margins::spliced_fit(d.cols[0], a.threshold, parse_variance(a.nb_variance)));
            }
        } else if (a.model == "ifm") {
            if (a.spec.columns.size() != 2)
                throw ValidationError("ifm fits need --columns continuous,count");
            if (a.threshold < 0) throw ValidationError("ifm fits need --threshold");
            const Loaded d = load(a.input, a.spec);
            rep["metadata"] = metadata(ctx, seed, d.checksum);
            rep["rows_read"] = d.rows_read;
            const Design des = make_design(d, a.spec);
            regression::RegOptions opt;
            opt.restarts = a.restarts;
            opt.seed = seed;
            const auto r = regression::ifm_fit(d.cols[0], d.cols[1], a.threshold, des.x, parse_family(a.family), opt,
                                               parse_variance(a.nb_variance));
            rep["margin1"] = glmga_json(r.margin1);
            rep["margin2"] = spliced_json(r.margin2);
            rep["fit"] = regression_json(r.copula, des, des.x.cols() > 1);
        } else {
            throw ValidationError("unknown --model '" + a.model + "' (copula, glmga, spliced, ifm)");
        }
    } catch (const ConvergenceError& e) {
        if (!rep.contains("metadata")) rep["metadata"] = metadata(ctx, seed, "");
        rep["error"] = e.what();
        rep["trace"] = trace_json(e.trace());
        write_json(a.out, rep);
        throw;
    }
    write_json(a.out, rep);
    return ok;
}

struct DiagnoseArgs {
    std::string input, fit, out, seed, grid_csv;
    std::vector<std::string> regions;
    std::string ks = "5,6,7";
    double p = 0.5;
    int grid = 50;
    int n_boot = 200;
    double level = 0.95;
};

int cmd_diagnose(const Context& ctx, const DiagnoseArgs& a) {
    const json fit = json::parse(io::read_file(a.fit), nullptr, false);
    if (fit.is_discarded() || !fit.is_object()) throw ValidationError("'" + a.fit + "' is not a fit report");
    if (!fit.contains("model") || !fit.contains("data") || !fit.contains("fit"))
        throw ValidationError("'" + a.fit + "' lacks model/data/fit sections");
    const std::uint64_t seed = resolve_seed(a.seed);
    const std::string model = fit.at("model").get<std::string>();
    const DataSpec spec = spec_from_json(fit.at("data"));
    const Loaded d = load(a.input, spec);
    json rep;
    rep["metadata"] = metadata(ctx, seed, d.checksum);
    rep["fit_checksum"] = io::checksum(io::read_file(a.fit));
    rep["model"] = model;

    if (model == "glmga") {
        const json& f = fit.at("fit");
        const GlmgaParams p{f.at("sigma").get<double>(), f.at("a").get<double>(), f.at("b").get<double>()};
        const auto g = margins::gof_tests(d.cols[0], margins::glmga_model(p), margins::glmga_refit(), a.n_boot, seed);
        rep["gof"] = {{"ks", g.ks}, {"cvm", g.cvm}, {"ad", g.ad}, {"p_ks", g.p_ks}, {"p_cvm", g.p_cvm},
                      {"p_ad", g.p_ad}, {"n_boot", g.n_boot}, {"refit_failures", g.refit_failures}};
        write_json(a.out, rep);
        return ok;
    }
    if (model == "spliced") {
        const json& f = fit.at("fit");
        margins::SplicedMargin m;
        m.w = f.at("w").get<double>();
        m.u = f.at("threshold").get<int>();
        m.count = {f.at("count").at("lambda").get<double>(), f.at("count").at("phi").get<double>(),
                   parse_variance(f.at("count").at("variance").get<std::string>())};
        m.tail = {f.at("tail").at("mu").get<double>(), f.at("tail").at("shape").get<double>(),
                  f.at("tail").at("scale").get<double>()};
        const auto r = margins::quantile_residuals(d.cols[0], m, seed);
        std::vector<double> all = r.count;
        all.insert(all.end(), r.tail.begin(), r.tail.end());
        const double ks = stats::ks_statistic(all, [](double x) { return specfun::normal_cdf(x); });
        rep["residuals"] = {{"n", all.size()}, {"mean", stats::mean(all)}, {"variance", stats::variance(all)},
                            {"skewness", stats::skewness(all)}, {"ks_normal", ks}};
        if (!a.grid_csv.empty()) {
            std::string csv = "part,residual\n";
            for (double v : r.count) csv += "count," + io::format_double(v) + '\n';
            for (double v : r.tail) csv += "tail," + io::format_double(v) + '\n';
            write_text(a.grid_csv, csv);
        }
        write_json(a.out, rep);
        return ok;
    }
    if (model != "copula") throw ValidationError("diagnose supports copula, glmga and spliced fit reports");

    const PseudoSample ps = make_pseudo(d, spec);
    if (ps.d() != 2) throw ValidationError("copula diagnostics are bivariate");
    const json& f = fit.at("fit");
    const Family fam = parse_family(f.at("family").get<std::string>());
    const bool intercept_only = f.at("beta").size() == 1;
    std::vector<int> ks;
    for (const auto& s : split(a.ks, ',')) ks.push_back(static_cast<int>(parse_number(s, "--k")));

    json tw = json::array();
    for (int k : ks) {
        diagnostics::TailWeightConfig cfg;
        cfg.k = k;
        cfg.p = a.p;
        tw.push_back({{"k", k}, {"p", a.p}, {"empirical", diagnostics::tw_dep_empirical(ps, cfg)}});
    }
    if (!intercept_only) {
        rep["note"] = "model-based diagnostics need an intercept-only fit; empirical measures only";
        rep["tail_weighted"] = tw;
        write_json(a.out, rep);
        return ok;
    }
    const double delta = f.at("delta").get<double>();
    rep["family"] = to_string(fam);
    rep["delta"] = delta;
    const diagnostics::CopulaCdf cdf = diagnostics::copula_cdf(fam, delta);

    std::vector<diagnostics::Region> regions;
    for (const auto& r : a.regions) {
        const auto parts = split(r, ',');
        if (parts.size() != 4) throw ValidationError("--region takes a1,b1,a2,b2");
        regions.push_back({parse_number(parts[0], "--region"), parse_number(parts[1], "--region"),
                           parse_number(parts[2], "--region"), parse_number(parts[3], "--region")});
    }
    if (regions.empty()) regions = {{0.0, 0.05, 0.0, 0.05}, {0.95, 1.0, 0.95, 1.0}};
    json ea = json::array();
    for (const auto& r : regions) {
        const double e = diagnostics::fit_error_eA(ps, cdf, r, a.grid);
        ea.push_back({{"region", {r.a1, r.b1, r.a2, r.b2}}, {"grid", {a.grid, a.grid}}, {"rule", "midpoint"},
                      {"e", e}, {"e_x1e8", e * 1e8}});
    }
    rep["fit_error"] = ea;

    std::vector<double> boot_delta;
    if (a.n_boot > 0) {
        const auto b = diagnostics::bootstrap_copula(fam, delta, static_cast<std::size_t>(ps.n()),
                                                     [](double x) { return x; }, a.n_boot, a.level, seed);
        boot_delta = b.values;
        rep["bootstrap"] = {{"n_boot", a.n_boot}, {"level", a.level}, {"failures", b.failures},
                            {"delta_ci", {b.lo, b.hi}}};
    }
    for (std::size_t i = 0; i < ks.size(); ++i) {
        diagnostics::TailWeightConfig cfg;
        cfg.k = ks[i];
        cfg.p = a.p;
        tw[i]["model"] = diagnostics::tw_dep_model(fam, delta, cfg);
        if (!boot_delta.empty()) {
            std::vector<double> v;
            for (double bd : boot_delta) v.push_back(diagnostics::tw_dep_model(fam, bd, cfg));
            const double alpha = 0.5 * (1.0 - a.level);
            tw[i]["model_ci"] = {stats::quantile(v, alpha), stats::quantile(v, 1.0 - alpha)};
        }
    }
    rep["tail_weighted"] = tw;

    if (!a.grid_csv.empty()) {
        std::string csv = "u1,u2,model,empirical\n";
        for (int i = 0; i < a.grid; ++i)
            for (int j = 0; j < a.grid; ++j) {
                const double u = (i + 0.5) / a.grid, v = (j + 0.5) / a.grid;
                csv += io::format_double(u) + ',' + io::format_double(v) + ',' + io::format_double(cdf(u, v)) + ',' +
                       io::format_double(diagnostics::empirical_copula(ps, {u, v})) + '\n';
            }
        write_text(a.grid_csv, csv);
        rep["grid_csv"] = {{"path", a.grid_csv}, {"checksum", io::checksum(csv)}};
    }
    write_json(a.out, rep);
    return ok;
}

diagnostics::Scenario parse_scenario(const json& j) {
    static const std::set<std::string> known{"name", "n", "d", "beta", "covariates", "periods", "replicates", "restarts", "family"};
    if (!j.is_object()) throw ValidationError("scenario must be a JSON object");
    for (const auto& [key, _] : j.items())
        if (!known.count(key)) throw ValidationError("unknown scenario key '" + key + "'");
    diagnostics::Scenario s;
    try {
        if (j.contains("name")) s.name = j.at("name").get<std::string>();
        s.n_grid = j.at("n").get<std::vector<std::size_t>>();
        if (j.contains("d")) s.d = j.at("d").get<int>();
        const auto beta = j.at("beta").get<std::vector<double>>();
        s.beta = Eigen::Map<const Eigen::VectorXd>(beta.data(), static_cast<Eigen::Index>(beta.size()));
        if (j.contains("covariates")) {
            const auto c = j.at("covariates").get<std::string>();
            if (c == "normal") s.covariates = diagnostics::CovariateLaw::normal;
            else if (c == "time_trend") s.covariates = diagnostics::CovariateLaw::time_trend;
            else throw ValidationError("covariates must be normal or time_trend");
        }
        if (j.contains("periods")) s.periods = j.at("periods").get<int>();
        s.replicates = j.at("replicates").get<int>();
        if (j.contains("restarts")) s.restarts = j.at("restarts").get<int>();
        if (j.contains("family")) s.family = parse_family(j.at("family").get<std::string>());
    } catch (const json::exception& e) {
        throw ValidationError(std::string("scenario: ") + e.what());
    }
    return s;
}

struct SimstudyArgs {
    std::string scenario, out, seed;
    int replicates = -1;
};

int cmd_simstudy(const Context& ctx, const SimstudyArgs& a) {
    const std::string bytes = io::read_file(a.scenario);
    const json j = json::parse(bytes, nullptr, false);
    if (j.is_discarded()) throw ValidationError("'" + a.scenario + "' is not valid JSON");
    diagnostics::Scenario sc = parse_scenario(j);
    if (a.replicates >= 0) sc.replicates = a.replicates;
    const std::uint64_t seed = resolve_seed(a.seed);
    const auto study = diagnostics::simstudy(sc, seed);
    std::ostringstream csv;
    diagnostics::write_simstudy_csv(csv, study);
    write_text(a.out, csv.str());
    json meta;
    meta["metadata"] = metadata(ctx, seed, io::checksum(bytes));
    meta["scenario"] = j;
    meta["replicates"] = sc.replicates;
    json fails = json::array();
    for (const auto& r : study.rows)
        if (r.coef == 0) fails.push_back({{"n", r.n}, {"failures", r.failures}, {"successful", r.replicates}});
    meta["failures"] = fails;
    meta["output"] = {{"path", a.out}, {"checksum", io::checksum(csv.str())}};
    write_json(a.out + ".json", meta);
    return ok;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Context ctx{join_args(args)};
    CLI::App app{"MGL copula toolkit", "mglcop"};
    app.set_version_flag("--version", std::string(MGLCOP_VERSION));
    app.require_subcommand(1);

    SimulateArgs sa;
    auto* sim = app.add_subcommand("simulate", "Sample from a copula family");
    sim->add_option("--family", sa.family, "mgl, surv-mgl or surv-mgl-ev")->required();
    sim->add_option("--delta", sa.delta, "Dependence parameter")->required();
    sim->add_option("--n", sa.n, "Sample size")->required();
    sim->add_option("--d", sa.d, "Dimension")->capture_default_str();
    sim->add_option("--seed", sa.seed, "64-bit seed (random if omitted)");
    sim->add_option("--out", sa.out, "Output CSV")->required();

    FitArgs fa;
    auto* fit = app.add_subcommand("fit", "Fit a copula, margin or IFM model");
    fit->add_option("--input", fa.input, "Input CSV")->required();
    fit->add_option("--out", fa.out, "Output JSON report")->required();
    fit->add_option("--model", fa.model, "copula, glmga, spliced or ifm")->capture_default_str();
    fit->add_option("--family", fa.family, "Copula family")->capture_default_str();
    fit->add_option("--columns", fa.columns, "Comma-separated column names")->required();
    fit->add_option("--pseudo", fa.spec.pseudo, "rank, kernel or none")->capture_default_str();
    fit->add_option("--bandwidth", fa.spec.bandwidth, "Kernel bandwidth")->capture_default_str();
    fit->add_flag("--log", fa.spec.log, "Log-transform the columns before ranking or smoothing");
    fit->add_flag("--positive", fa.spec.positive, "Keep rows where every selected column is positive");
    fit->add_option("--covariate", fa.spec.covariate, "Covariate column for the copula regression");
    fit->add_option("--spline-knots", fa.knots, "Interior knots: values or quantiles like q50,q33.3");
    fit->add_option("--threshold", fa.threshold, "Splicing threshold u");
    fit->add_option("--nb-variance", fa.nb_variance, "quadratic or linear")->capture_default_str();
    fit->add_option("--restarts", fa.restarts, "Jittered optimizer restarts")->capture_default_str();
    fit->add_option("--seed", fa.seed, "64-bit seed (random if omitted)");

    DiagnoseArgs da;
    auto* diag = app.add_subcommand("diagnose", "Diagnostics for a fitted model");
    diag->add_option("--input", da.input, "Data CSV used for the fit")->required();
    diag->add_option("--fit", da.fit, "Fit report JSON")->required();
    diag->add_option("--out", da.out, "Output JSON")->required();
    diag->add_option("--region", da.regions, "e_A region a1,b1,a2,b2 (repeatable)");
    diag->add_option("--grid", da.grid, "e_A grid size per axis")->capture_default_str();
    diag->add_option("--k", da.ks, "Tail-weight powers")->capture_default_str();
    diag->add_option("--p", da.p, "Truncation level")->capture_default_str();
    diag->add_option("--n-boot", da.n_boot, "Bootstrap replicates, 0 to skip")->capture_default_str();
    diag->add_option("--level", da.level, "Confidence level")->capture_default_str();
    diag->add_option("--grid-csv", da.grid_csv, "Optional gridded CSV output");
    diag->add_option("--seed", da.seed, "64-bit seed (random if omitted)");

    SimstudyArgs ssa;
    auto* ss = app.add_subcommand("simstudy", "Run a simulation-study scenario");
    ss->add_option("--scenario", ssa.scenario, "Scenario JSON")->required();
    ss->add_option("--out", ssa.out, "Output CSV")->required();
    ss->add_option("--replicates", ssa.replicates, "Override the scenario replicate count");
    ss->add_option("--seed", ssa.seed, "64-bit seed (random if omitted)");

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return ok;
    } catch (const CLI::CallForVersion&) {
        out << MGLCOP_VERSION << '\n';
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return validation;
    }

    try {
        if (sim->parsed()) return cmd_simulate(ctx, sa);
        if (fit->parsed()) return cmd_fit(ctx, fa);
        if (diag->parsed()) return cmd_diagnose(ctx, da);
        if (ss->parsed()) return cmd_simstudy(ctx, ssa);
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return validation;
    } catch (const DimensionError& e) {
        err << "error: " << e.what() << '\n';
        return validation;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return validation;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return numerical;
    } catch (const nlohmann::json::exception& e) {
        err << "error: malformed report: " << e.what() << '\n';
        return validation;
    }
    return validation;
}

}  // namespace mglcop::cli
