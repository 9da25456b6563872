// dflat: numerical certification of dual and projective flatness for
// general (alpha,beta)-metrics. Subcommands scan residuals of the
// characterizing PDEs, the flatness equations, and the deformation lemmas,
// and emit deterministic reports for CI.

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "dflat/deform.hpp"
#include "dflat/fields.hpp"
#include "dflat/finsler.hpp"
#include "dflat/phifunc.hpp"
#include "dflat/report.hpp"

namespace {

using namespace dflat;

struct CommonOpts {
    std::string phi_name;
    std::vector<std::string> params_raw;
    double mu = 0.0;
    double sigma = 1.0;
    double lambda = 1.0;
    std::string avec_raw;
    int dim = 3;
    long samples = 200;
    std::uint64_t seed = 42;
    double tol = -1.0; // per-subcommand default when negative
    std::string grid = "50x50";
    double inset = 1e-3;
    std::string format = "text";
    std::string out_path;
    int threads = 1;

    ParamMap params() const {
        ParamMap m;
        for (const auto& kv : params_raw) {
            auto eq = kv.find('=');
            if (eq == std::string::npos)
                fail(ErrorKind::input, "--param expects KEY=VALUE, got '" + kv + "'");
            try {
                m[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
            } catch (const std::exception&) {
                fail(ErrorKind::input, "--param value not numeric in '" + kv + "'");
            }
        }
        return m;
    }

    std::vector<double> avec() const {
        std::vector<double> v;
        if (avec_raw.empty()) return v;
        std::stringstream ss(avec_raw);
        std::string item;
        while (std::getline(ss, item, ',')) {
            try {
                v.push_back(std::stod(item));
            } catch (const std::exception&) {
                fail(ErrorKind::input, "--avec component not numeric: '" + item + "'");
            }
        }
        return v;
    }

    std::pair<int, int> grid_rc() const {
        auto x = grid.find('x');
        if (x == std::string::npos)
            fail(ErrorKind::input, "--grid expects RxC, got '" + grid + "'");
        try {
            int r = std::stoi(grid.substr(0, x));
            int c = std::stoi(grid.substr(x + 1));
            if (r < 1 || c < 1) throw std::invalid_argument("non-positive");
            return {r, c};
        } catch (const std::exception&) {
            fail(ErrorKind::input, "--grid expects RxC, got '" + grid + "'");
        }
    }

    double tol_or(double dflt) const { return tol > 0 ? tol : dflt; }
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--phi", o.phi_name, "catalog phi name");
    cmd->add_option("--param", o.params_raw, "phi/model parameter KEY=VALUE (repeatable)");
    cmd->add_option("--mu", o.mu, "model constant mu");
    cmd->add_option("--sigma", o.sigma, "model constant sigma");
    cmd->add_option("--lambda", o.lambda, "model constant lambda");
    cmd->add_option("--avec", o.avec_raw, "constant vector a, comma separated");
    cmd->add_option("--dim", o.dim, "dimension n")->default_val(3);
    cmd->add_option("--samples", o.samples, "sample count")->default_val(200);
    cmd->add_option("--seed", o.seed, "PRNG seed")->default_val(42);
    cmd->add_option("--tol", o.tol, "pass tolerance");
    cmd->add_option("--grid", o.grid, "grid RxC")->default_val("50x50");
    cmd->add_option("--inset", o.inset, "cone boundary inset")->default_val(1e-3);
    cmd->add_option("--format", o.format, "text|json")->default_val("text");
    cmd->add_option("--out", o.out_path, "write report to file");
    cmd->add_option("--threads", o.threads, "sampling threads")->default_val(1);
}

ConfigEcho base_config(const CommonOpts& o, std::initializer_list<const char*> keys) {
    ConfigEcho cfg;
    auto want = [&](const char* k) {
        for (const char* key : keys)
            if (std::string(key) == k) return true;
        return false;
    };
    if (want("phi")) cfg.emplace_back("phi", json_quote(o.phi_name));
    if (want("params")) {
        std::string ps = "{";
        bool first = true;
        for (const auto& [k, v] : o.params()) {
            ps += (first ? "" : ",") + json_quote(k) + ":" + format_double(v);
            first = false;
        }
        ps += "}";
        cfg.emplace_back("params", ps);
    }
    if (want("mu")) cfg.emplace_back("mu", format_double(o.mu));
    if (want("sigma")) cfg.emplace_back("sigma", format_double(o.sigma));
    if (want("lambda")) cfg.emplace_back("lambda", format_double(o.lambda));
    if (want("avec")) {
        std::string as = "[";
        auto a = o.avec();
        for (size_t i = 0; i < a.size(); ++i) as += (i ? "," : "") + format_double(a[i]);
        as += "]";
        cfg.emplace_back("avec", as);
    }
    if (want("dim")) cfg.emplace_back("dim", std::to_string(o.dim));
    if (want("samples")) cfg.emplace_back("samples", std::to_string(o.samples));
    if (want("seed")) cfg.emplace_back("seed", std::to_string(o.seed));
    if (want("grid")) cfg.emplace_back("grid", json_quote(o.grid));
    if (want("inset")) cfg.emplace_back("inset", format_double(o.inset));
    return cfg;
}

int emit(const CommonOpts& o, const std::string& task, const ConfigEcho& cfg,
         std::vector<VerificationReport> reports) {
    bool all_pass = true;
    for (auto& r : reports) {
        r.finalize();
        all_pass = all_pass && r.pass;
    }
    std::string text = o.format == "json" ? report_to_json(task, cfg, reports)
                                          : report_to_text(task, cfg, reports);
    if (!o.out_path.empty()) {
        std::ofstream f(o.out_path, std::ios::binary);
        if (!f) fail(ErrorKind::input, "cannot open output file " + o.out_path);
        f << text;
    } else {
        std::cout << text;
    }
    return all_pass ? 0 : 1;
}

// index-parallel sampling with deterministic, order-independent reduction
template <class Fn>
void run_samples(long count, int threads, VerificationReport& rep, Fn&& fn) {
    std::vector<double> residuals(count);
    std::vector<std::vector<double>> wheres(count);
    std::exception_ptr first_error;

    auto body = [&](long lo, long hi) {
        try {
            for (long i = lo; i < hi; ++i) {
                auto [r, w] = fn(static_cast<std::uint64_t>(i));
                residuals[i] = r;
                wheres[i] = std::move(w);
            }
        } catch (...) {
            if (!first_error) first_error = std::current_exception();
        }
    };

    int nt = std::max(1, threads);
    if (nt == 1) {
        body(0, count);
    } else {
        std::vector<std::thread> pool;
        long chunk = (count + nt - 1) / nt;
        for (int t = 0; t < nt; ++t) {
            long lo = t * chunk, hi = std::min<long>(count, lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back(body, lo, hi);
        }
        for (auto& th : pool) th.join();
    }
    if (first_error) std::rethrow_exception(first_error);
    for (long i = 0; i < count; ++i) rep.add(residuals[i], std::move(wheres[i]));
}

double sampling_radius(const CommonOpts& o) {
    ParamMap p = o.params();
    if (auto it = p.find("xradius"); it != p.end()) return it->second;
    if (o.mu < 0) {
        double anorm = 0.0;
        for (double c : o.avec()) anorm += c * c;
        anorm = std::sqrt(anorm);
        double r = (0.8 / std::sqrt(-o.mu) - anorm) / std::max(o.lambda, 1e-12);
        if (r <= 0)
            fail(ErrorKind::input, "no admissible sampling ball: |a| too large for mu");
        return r;
    }
    return 0.8;
}

double max_component(const std::vector<double>& v) {
    double m = 0.0;
    for (double c : v) m = std::max(m, std::abs(c));
    return m;
}

std::vector<double> cat_xy(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> w = x;
    w.insert(w.end(), y.begin(), y.end());
    return w;
}

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                         t0)
            .count();
    }
};

// ---- subcommands ------------------------------------------------------------------

int cmd_phi_residual(const CommonOpts& o) {
    auto [rows, cols] = o.grid_rc();
    GridSpec spec;
    spec.rows = rows;
    spec.cols = cols;
    spec.inset = o.inset;
    double tol = o.tol_or(1e-9);
    ConfigEcho cfg = base_config(o, {"phi", "params", "grid", "inset"});
    std::vector<VerificationReport> reports;

    auto from_scan = [&](const std::string& which, auto&& run) {
        Timer t;
        GridScan scan = run();
        VerificationReport r;
        r.task = which;
        r.tolerance = tol;
        r.samples = scan.evaluated;
        r.max_residual = scan.max_abs;
        r.sum_residual = scan.sum_abs;
        if (scan.worst && scan.max_abs > tol)
            r.first_violation =
                FirstViolation{{(*scan.worst)[0], (*scan.worst)[1]}, (*scan.worst)[2]};
        r.wall_time_ms = t.ms();
        return r;
    };

    bool is_check = o.phi_name.rfind("check_", 0) == 0;
    if (is_check) {
        CheckPhiFunction v = catalog_check(o.phi_name, o.params());
        reports.push_back(from_scan("varphi", [&] { return scan_varphi(v, spec); }));
        reports.push_back(from_scan("checkp", [&] { return scan_checkp(v, spec); }));
    } else {
        PhiFunction phi = catalog_phi(o.phi_name, o.params());
        reports.push_back(from_scan("pde1", [&] { return scan_pde1(phi, spec); }));
        reports.push_back(from_scan("psi22", [&] { return scan_psi22(phi, spec); }));
    }
    return emit(o, "phi-residual", cfg, std::move(reports));
}

int cmd_dual_flat(const CommonOpts& o) {
    PhiFunction phi = catalog_phi(o.phi_name, o.params());
    Prop42 model = build_prop42(o.dim, o.mu, o.sigma, o.lambda, o.avec());
    double tol = o.tol_or(1e-9);
    ConfigEcho cfg = base_config(
        o, {"phi", "params", "mu", "sigma", "lambda", "avec", "dim", "samples", "seed"});

    auto sampler = make_sampler(model.metric, model.form, phi, o.seed, sampling_radius(o));
    Timer t;
    VerificationReport rep;
    rep.task = "dual-flat residual (" + phi.name + ")";
    rep.tolerance = tol;
    run_samples(o.samples, o.threads, rep, [&](std::uint64_t i) {
        auto d = sampler.draw(i);
        AssembledEval e = assemble(model.metric, model.form, phi, d.x, d.y);
        return std::make_pair(max_component(dual_flat_residual(e)), cat_xy(d.x, d.y));
    });
    rep.wall_time_ms = t.ms();
    return emit(o, "dual-flat", cfg, {rep});
}

int cmd_projective_flat(const CommonOpts& o) {
    double tol = o.tol_or(1e-9);
    ConfigEcho cfg = base_config(
        o, {"phi", "params", "mu", "lambda", "avec", "dim", "samples", "seed"});

    CheckPhiFunction vphi = o.phi_name.rfind("check_", 0) == 0
                                ? catalog_check(o.phi_name, o.params())
                                : theorem2_forward(catalog_phi(o.phi_name, o.params()));

    RiemannianMetric alpha = csc_metric(o.dim, o.mu);
    std::vector<double> a = o.avec();
    if (a.empty()) a.assign(o.dim, 0.0);
    OneForm beta = cc_oneform(o.dim, o.mu, o.lambda, a);

    double radius = o.mu < 0 ? 0.8 / std::sqrt(-o.mu) : 0.8;
    if (auto p = o.params(); p.count("xradius")) radius = p.at("xradius");
    auto sampler = make_sampler(alpha, beta, vphi, o.seed, radius);

    Timer t;
    VerificationReport rep;
    rep.task = "projective-flat (Hamel) residual (" + vphi.name + ")";
    rep.tolerance = tol;
    run_samples(o.samples, o.threads, rep, [&](std::uint64_t i) {
        auto d = sampler.draw(i);
        AssembledEval e = assemble(alpha, beta, vphi, d.x, d.y);
        return std::make_pair(max_component(projective_flat_residual(e)), cat_xy(d.x, d.y));
    });
    rep.wall_time_ms = t.ms();
    return emit(o, "projective-flat", cfg, {rep});
}

int cmd_deform_verify(const CommonOpts& o) {
    double tol_lemma = o.tol_or(1e-8);
    ConfigEcho cfg = base_config(o, {"mu", "sigma", "lambda", "avec", "dim", "samples", "seed"});
    const int n = o.dim;
    CounterRng rng(o.seed);

    RiemannianMetric alpha = random_poly_metric(n, o.seed + 1);
    OneForm beta = random_affine_oneform(n, o.seed + 2);
    SmoothFn kappa = make_smooth("kappa", [](const auto& t) { return 0.3 + 0.1 * t; });
    SmoothFn rho = make_smooth("rho", [](const auto& t) { return 0.05 * t; });
    SmoothFn nu = make_smooth("nu", [](const auto& t) { return 1.0 + 0.2 * t; });

    long count = std::min<long>(o.samples, 50);
    std::vector<VerificationReport> reports;
    Timer t_all;
    for (int which = 1; which <= 3; ++which) {
        VerificationReport rep;
        rep.task = "lemma" + std::to_string(which) + " direct-vs-formula (random data)";
        rep.tolerance = tol_lemma;
        Timer t;
        run_samples(count, o.threads, rep, [&](std::uint64_t i) {
            std::vector<double> x = rng.ball(i, n, 0.4, 20);
            std::vector<double> y = rng.unit_sphere(i, n, 30);
            LemmaResiduals lr = which == 1 ? verify_lemma1(alpha, beta, kappa, x, y)
                              : which == 2 ? verify_lemma2(alpha, beta, kappa, rho, x, y)
                                           : verify_lemma3(alpha, beta, kappa, rho, nu, x, y);
            return std::make_pair(lr.max(), cat_xy(x, y));
        });
        rep.wall_time_ms = t.ms();
        reports.push_back(std::move(rep));
    }

    // section-4 closed-form factors on the flat model data
    {
        RiemannianMetric e = euclidean_metric(n);
        std::vector<double> a = o.avec();
        OneForm b = cccc_oneform(n, o.lambda, a.empty() ? std::vector<double>(n, 0.0) : a);
        DeformationFactors fac = section4_factors(o.mu, o.sigma);
        VerificationReport rep;
        rep.task = "lemma1-3 on section-4 factors (model data)";
        rep.tolerance = tol_lemma;
        Timer t;
        double radius = o.mu < 0 ? 0.75 / std::sqrt(-o.mu) : 0.75;
        run_samples(count, o.threads, rep, [&](std::uint64_t i) {
            std::vector<double> x = rng.ball(i, n, radius, 40);
            std::vector<double> y = rng.unit_sphere(i, n, 50);
            double r = verify_lemma1(e, b, fac.kappa, x, y).max();
            r = std::max(r, verify_lemma2(e, b, fac.kappa, fac.rho, x, y).max());
            r = std::max(r, verify_lemma3(e, b, fac.kappa, fac.rho, fac.nu, x, y).max());
            return std::make_pair(r, cat_xy(x, y));
        });
        rep.wall_time_ms = t.ms();
        reports.push_back(std::move(rep));
    }

    {
        VerificationReport rep;
        rep.task = "deformation factor ODEs";
        rep.tolerance = o.tol > 0 ? o.tol : 1e-12;
        Timer t;
        FactorOdeReport ode = factor_odes(o.mu);
        rep.add(ode.res_kappa, {0});
        rep.add(ode.res_rho, {1});
        rep.add(ode.res_nu, {2});
        rep.add(ode.res_family, {3});
        rep.wall_time_ms = t.ms();
        reports.push_back(std::move(rep));
    }
    (void)t_all;

    // a residual that is systematically nonzero on random data but vanishes
    // on the model data points at a transcription slip in the lemma right
    // sides, not at a numerical problem
    bool random_ok = true;
    for (int i = 0; i < 3; ++i)
        random_ok = random_ok && reports[i].max_residual <= reports[i].tolerance;
    bool model_ok = reports[3].max_residual <= reports[3].tolerance;
    if (!random_ok && model_ok)
        std::cerr << "note: lemma residuals vanish on model data but not on randomized "
                     "data; transcription/typo suspect in the lemma formulas\n";

    return emit(o, "deform-verify", cfg, std::move(reports));
}

int cmd_roundtrip(const CommonOpts& o) {
    PhiFunction phi = catalog_phi(o.phi_name, o.params());
    auto [rows, cols] = o.grid_rc();
    ConfigEcho cfg = base_config(o, {"phi", "params", "grid", "inset"});

    CheckPhiFunction vphi = theorem2_forward(phi);
    GridSpec spec;
    spec.rows = std::min(rows, 20);
    spec.cols = std::min(cols, 20);
    spec.inset = o.inset;

    std::vector<VerificationReport> reports;
    {
        VerificationReport rep;
        rep.task = "forward map checkp residual";
        rep.tolerance = o.tol_or(1e-9);
        Timer t;
        GridScan scan = scan_checkp(vphi, spec);
        rep.samples = scan.evaluated;
        rep.max_residual = scan.max_abs;
        rep.sum_residual = scan.sum_abs;
        if (scan.worst && scan.max_abs > rep.tolerance)
            rep.first_violation =
                FirstViolation{{(*scan.worst)[0], (*scan.worst)[1]}, (*scan.worst)[2]};
        rep.wall_time_ms = t.ms();
        reports.push_back(std::move(rep));
    }
    {
        VerificationReport rep;
        rep.task = "inverse round trip, C* = phi(0,0)^2";
        rep.tolerance = o.tol > 0 ? o.tol : 1e-8;
        Timer t;
        PhiFunction back = theorem2_inverse(vphi, roundtrip_constant(phi));
        double lo = phi.grid_b2_lo, hi = phi.grid_b2_hi;
        for (int i = 0; i < spec.rows; ++i) {
            double b2 = lo + (hi - lo) * (i + 0.5) / spec.rows;
            double smax = (1.0 - o.inset) * std::sqrt(b2);
            for (int j = 0; j < spec.cols; ++j) {
                double s = spec.cols == 1 ? 0.0 : -smax + 2.0 * smax * j / (spec.cols - 1);
                if (!phi.in_domain(b2, s)) continue;
                double expected = phi.value(b2, s);
                double got = back.value(b2, s);
                rep.add(std::abs(expected - got), {b2, s});
            }
        }
        rep.wall_time_ms = t.ms();
        reports.push_back(std::move(rep));
    }
    return emit(o, "roundtrip", cfg, std::move(reports));
}

int cmd_positivity(const CommonOpts& o) {
    PhiFunction phi = catalog_phi(o.phi_name, o.params());
    ParamMap p = o.params();
    double b2max = p.count("b2max") ? p.at("b2max") : phi.grid_b2_hi;
    auto [rows, cols] = o.grid_rc();
    ConfigEcho cfg = base_config(o, {"phi", "params", "grid", "inset"});

    Timer t;
    PositivityReport pr = finsler_positivity(phi, b2max, rows, cols, o.inset);
    VerificationReport rep;
    rep.task = "positivity: min(phi - s phi_2) = " + format_double(pr.min_strong) +
               ", min(.. + (b^2-s^2) phi_22) = " + format_double(pr.min_weak);
    rep.tolerance = 0.0;
    rep.samples = pr.evaluated;
    rep.max_residual = std::max({0.0, -pr.min_strong, -pr.min_weak});
    if (pr.first_violation)
        rep.first_violation =
            FirstViolation{{(*pr.first_violation)[0], (*pr.first_violation)[1]},
                           std::min(pr.min_strong, pr.min_weak)};
    rep.wall_time_ms = t.ms();
    // pass means strictly positive minima
    rep.pass = pr.ok_n3();
    std::vector<VerificationReport> reports{rep};

    bool all_pass = rep.pass;
    std::string text = o.format == "json" ? report_to_json("positivity", cfg, reports)
                                          : report_to_text("positivity", cfg, reports);
    if (!o.out_path.empty()) {
        std::ofstream f(o.out_path, std::ios::binary);
        if (!f) fail(ErrorKind::input, "cannot open output file " + o.out_path);
        f << text;
    } else {
        std::cout << text;
    }
    return all_pass ? 0 : 1;
}

int cmd_catalog(const CommonOpts& o) {
    std::ostringstream os;
    if (o.format == "json") {
        os << "{\"task\":\"catalog\",\"phi\":[";
        auto names = catalog_phi_names();
        for (size_t i = 0; i < names.size(); ++i) os << (i ? "," : "") << json_quote(names[i]);
        os << "],\"check\":[";
        auto checks = catalog_check_names();
        for (size_t i = 0; i < checks.size(); ++i)
            os << (i ? "," : "") << json_quote(checks[i]);
        os << "]}\n";
    } else {
        os << "phi catalog:\n";
        for (const auto& n : catalog_phi_names()) os << "  " << n << "\n";
        os << "check-phi catalog:\n";
        for (const auto& n : catalog_check_names()) os << "  " << n << "\n";
        os << "suffix -perturbed adds 0.01 s^3 to any phi entry\n";
    }
    if (!o.out_path.empty()) {
        std::ofstream f(o.out_path, std::ios::binary);
        f << os.str();
    } else {
        std::cout << os.str();
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"dual/projective flatness verification for general (alpha,beta)-metrics"};
    app.require_subcommand(1);

    CommonOpts o;
    auto* c_phi = app.add_subcommand("phi-residual", "PDE residuals of a phi over a grid");
    auto* c_dual = app.add_subcommand("dual-flat", "dual-flatness residual of an assembled metric");
    auto* c_proj = app.add_subcommand("projective-flat", "Hamel residual of the projected metric");
    auto* c_def = app.add_subcommand("deform-verify", "beta-deformation lemmas and factor ODEs");
    auto* c_rt = app.add_subcommand("roundtrip", "forward/inverse map round trip");
    auto* c_pos = app.add_subcommand("positivity", "Finsler positivity conditions of a phi");
    auto* c_cat = app.add_subcommand("catalog", "list built-in phi functions");
    for (auto* c : {c_phi, c_dual, c_proj, c_def, c_rt, c_pos, c_cat}) add_common(c, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        if (c_phi->parsed()) return cmd_phi_residual(o);
        if (c_dual->parsed()) return cmd_dual_flat(o);
        if (c_proj->parsed()) return cmd_projective_flat(o);
        if (c_def->parsed()) return cmd_deform_verify(o);
        if (c_rt->parsed()) return cmd_roundtrip(o);
        if (c_pos->parsed()) return cmd_positivity(o);
        if (c_cat->parsed()) return cmd_catalog(o);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
