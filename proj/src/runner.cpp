#include "regcalc/runner.hpp"

#include "regcalc/chi_window.hpp"
#include "regcalc/estimators.hpp"
#include "regcalc/grid_paths.hpp"
#include "regcalc/ito_verify.hpp"
#include "regcalc/operator_algebra.hpp"
#include "regcalc/replicate.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace regcalc {

namespace fs = std::filesystem;

namespace {

struct Context {
    const ResolvedConfig& cfg;
    fs::path out;
    std::ostream& log;

    std::ofstream open(const std::string& name) const {
        std::ofstream f(out / name, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + (out / name).string());
        return f;
    }
};

// ------------------------------------------------------------ builders

ProcessSpec build_process(const ResolvedConfig& c) {
    const std::string kind = c.str("process.kind");
    const double sigma = c.real("process.sigma");
    const double hurst = c.real("process.hurst");
    ProcessSpec spec;
    if (kind == "bm") spec = ProcessSpec::brownian(sigma);
    else if (kind == "fbm") spec = ProcessSpec::fbm(hurst);
    else if (kind == "bifbm") spec = ProcessSpec::bifractional(hurst, c.real("process.k"));
    else if (kind == "bifbm-unit") spec = ProcessSpec::bifractional_unit_qv(hurst, c.real("process.k"), sigma);
    else if (kind == "dirichlet") spec = ProcessSpec::dirichlet_default(sigma, c.real("process.scale"));
    else if (kind == "identity") spec = ProcessSpec::identity();
    else if (kind == "monotone") spec = ProcessSpec::random_monotone();
    else if (kind.rfind("det:", 0) == 0) spec = ProcessSpec::deterministic(kind.substr(4));
    else throw ConfigError("process.kind: unknown process '" + kind + "'");
    spec.validate();
    return spec;
}

Grid build_grid(const ResolvedConfig& c) {
    const auto n = c.integer("grid.n");
    if (n < 2) throw ConfigError("grid.n must be >= 2");
    return Grid(c.real("grid.T"), static_cast<std::size_t>(n));
}

EpsSchedule build_schedule(const ResolvedConfig& c, const Grid& g) { return EpsSchedule(g, c.counts("est.eps_ladder")); }

double eval_time(const ResolvedConfig& c, const Grid& g) {
    const double t = c.real("est.t");
    if (!(t >= 0.0 && t <= g.horizon())) throw ConfigError("est.t must lie in [0, grid.T]");
    return t;
}

std::vector<double> parse_table(const std::string& spec, const std::string& key) {
    std::vector<double> out;
    std::istringstream in(spec);
    std::string part;
    while (std::getline(in, part, ';')) out.push_back(parse_real(part, key));
    return out;
}

std::vector<double> density_from(const std::string& spec, const WindowGrid& wg, const std::string& key) {
    if (spec.rfind("const:", 0) != 0) throw ConfigError(key + ": expected const:c");
    return std::vector<double>(wg.node_count(), parse_real(spec.substr(6), key));
}

// ------------------------------------------------------------ output

void write_series_csv(std::ostream& f, const EnsembleSeries& s, double t) {
    f << "eps,t,estimate,stderr\n";
    for (std::size_t i = 0; i < s.eps.size(); ++i)
        f << format_real(s.eps[i]) << ',' << format_real(t) << ',' << format_real(s.mean[i]) << ','
          << format_real(s.stderr_[i]) << '\n';
    f << "0," << format_real(t) << ',' << format_real(s.extrapolated.mean) << ','
      << format_real(s.extrapolated.stderr_) << '\n';
}

void write_plot(const Context& ctx, const std::string& command, const std::string& csv, const std::string& x,
                const std::string& y, const std::string& group = {}) {
    auto f = ctx.open("plot_" + command + ".py");
    f << "import csv\nimport sys\nimport matplotlib.pyplot as plt\n\n"
      << "rows = list(csv.DictReader(open(sys.argv[1] if len(sys.argv) > 1 else '" << csv << "')))\n"
      << "groups = {}\n"
      << "for r in rows:\n"
      << "    groups.setdefault(r.get('" << group << "', ''), []).append(r)\n"
      << "for name, rs in groups.items():\n"
      << "    plt.plot([float(r['" << x << "']) for r in rs], [float(r['" << y << "']) for r in rs], "
      << "marker='.', label=name or None)\n"
      << "plt.xlabel('" << x << "')\nplt.ylabel('" << y << "')\n"
      << "if len(groups) > 1:\n    plt.legend()\n"
      << "plt.title('" << command << "')\nplt.savefig('plot_" << command << ".png', dpi=120)\n";
}

std::vector<SamplePath> materialize(const ResolvedConfig& c, const ProcessSpec& spec, const Grid& g,
                                    std::size_t paths) {
    return PathEnsemble(spec, g, paths, c.seed()).materialize();
}

EnsembleSeries ensemble_series(std::size_t count, const std::function<EstimateSeries(std::size_t)>& one) {
    std::vector<EstimateSeries> per(count);
    parallel_for(count, [&](std::size_t i) { per[i] = one(i); });
    return reduce_series(std::move(per));
}

// ------------------------------------------------------------ commands

int cmd_simulate(const Context& ctx) {
    const auto spec = build_process(ctx.cfg);
    const auto g = build_grid(ctx.cfg);
    const auto paths = materialize(ctx.cfg, spec, g, ctx.cfg.count("sim.paths"));
    auto f = ctx.open("paths.csv");
    write_ensemble_csv(f, paths);
    write_plot(ctx, "simulate", "paths.csv", "t", "x", "path_id");
    ctx.log << "simulated " << paths.size() << " path(s) of " << spec.label() << '\n';
    return kExitOk;
}

int cmd_qv(const Context& ctx) {
    const auto spec = build_process(ctx.cfg);
    const auto g = build_grid(ctx.cfg);
    const auto sched = build_schedule(ctx.cfg, g);
    const double t = eval_time(ctx.cfg, g);
    const auto paths = materialize(ctx.cfg, spec, g, ctx.cfg.count("est.paths"));
    const auto s = ensemble_series(paths.size(), [&](std::size_t i) { return quadratic_variation(paths[i], sched, t); });
    auto f = ctx.open("qv.csv");
    write_series_csv(f, s, t);
    write_plot(ctx, "qv", "qv.csv", "eps", "estimate");
    ctx.log << "[X]_" << t << " of " << spec.label() << ": " << format_real(s.extrapolated.mean) << " +- "
            << format_real(s.extrapolated.stderr_);
    if (const auto r = declared_qv_rate(spec)) ctx.log << " (declared " << format_real(*r * t) << ")";
    ctx.log << '\n';
    return kExitOk;
}

int cmd_forward(const Context& ctx) {
    const auto spec = build_process(ctx.cfg);
    const auto g = build_grid(ctx.cfg);
    const auto sched = build_schedule(ctx.cfg, g);
    const double t = eval_time(ctx.cfg, g);
    const std::string which = ctx.cfg.str("forward.integrand");
    if (which != "one" && which != "time" && which != "path")
        throw ConfigError("forward.integrand must be one, time or path");
    const auto paths = materialize(ctx.cfg, spec, g, ctx.cfg.count("est.paths"));
    const auto s = ensemble_series(paths.size(), [&](std::size_t i) {
        const auto& x = paths[i];
        std::vector<double> y(x.size());
        for (std::size_t j = 0; j < y.size(); ++j)
            y[j] = which == "one" ? 1.0 : (which == "time" ? g.time(j) : x[j]);
        return forward_integral(y, x, sched, t);
    });
    auto f = ctx.open("forward.csv");
    write_series_csv(f, s, t);
    write_plot(ctx, "forward", "forward.csv", "eps", "estimate");
    ctx.log << "forward integral (" << which << ") at t=" << t << ": " << format_real(s.extrapolated.mean) << " +- "
            << format_real(s.extrapolated.stderr_) << '\n';
    return kExitOk;
}

int cmd_window_qv(const Context& ctx) {
    const auto& c = ctx.cfg;
    const auto spec = build_process(c);
    const auto g = build_grid(c);
    const auto sched = build_schedule(c, g);
    const double t = eval_time(c, g);
    const WindowGrid wg(g, c.str("window.tau").empty() ? g.horizon() : c.real("window.tau"));

    SquareMeasure mu;
    if (!c.str("measure.atom").empty()) mu.atom = c.real("measure.atom");
    if (!c.str("measure.diag").empty()) mu.diag = density_from(c.str("measure.diag"), wg, "measure.diag");
    if (!c.str("measure.l2").empty())
        mu = mu.plus(SquareMeasure::constant_density(wg, density_from(c.str("measure.l2"), wg, "measure.l2")[0]));
    mu.validate(wg);

    const auto paths = materialize(c, spec, g, c.count("est.paths"));
    const auto s = ensemble_series(paths.size(), [&](std::size_t i) { return chi_qv(mu, paths[i], wg, sched, t); });
    auto f = ctx.open("window-qv.csv");
    write_series_csv(f, s, t);

    // Closed form with the declared [X] when there is one, else the ensemble
    // mean of the estimated scalar bracket at the smallest eps.
    std::function<double(double)> qv;
    std::string source = "declared";
    if (const auto r = declared_qv_rate(spec)) {
        const double rate = *r;
        qv = [rate](double s) { return rate * s; };
    } else {
        source = "estimated";
        std::vector<double> mean(g.node_count(), 0.0);
        for (const auto& p : paths) {
            const auto cu = covariation_curve(p, p, sched.smallest_multiple());
            for (std::size_t j = 0; j < mean.size(); ++j) mean[j] += cu[j] / static_cast<double>(paths.size());
        }
        qv = [mean, g](double s) { return read_curve(mean, g, std::min(s, g.horizon())); };
    }
    auto ff = ctx.open("window-qv-formula.csv");
    ff << "component,t,formula\n";
    auto row = [&](const std::string& name, const SquareMeasure& m) {
        ff << name << ',' << format_real(t) << ',' << format_real(chi_qv_formula(m, qv, wg, t)) << '\n';
    };
    if (mu.atom) row("atom", SquareMeasure::dirac(*mu.atom));
    if (mu.diag) row("diag", SquareMeasure::diagonal(*mu.diag));
    if (!mu.l2.empty()) row("l2", SquareMeasure{std::nullopt, std::nullopt, std::nullopt, mu.l2, std::nullopt});
    row("total", mu);
    write_plot(ctx, "window-qv", "window-qv.csv", "eps", "estimate");
    ctx.log << "chi-QV estimate " << format_real(s.extrapolated.mean) << " +- " << format_real(s.extrapolated.stderr_)
            << ", closed form (" << source << " [X]) " << format_real(chi_qv_formula(mu, qv, wg, t)) << '\n';
    return kExitOk;
}

int cmd_ito(const Context& ctx) {
    const auto& c = ctx.cfg;
    const auto spec = build_process(c);
    const auto g = build_grid(c);
    const auto sched = build_schedule(c, g);
    const double t = eval_time(c, g);
    const std::string fn = c.str("ito.functional");
    const auto paths = materialize(c, spec, g, c.count("est.paths"));

    std::vector<ItoReport> reps(paths.size());
    if (fn == "point" || fn == "sqmean" || fn == "sqnorm") {
        const auto F = fn == "point" ? ElementaryFunctional::point_square()
                                     : (fn == "sqmean" ? ElementaryFunctional::squared_mean()
                                                       : ElementaryFunctional::squared_norm());
        const auto wg = WindowGrid::full(g);
        parallel_for(paths.size(), [&](std::size_t i) { reps[i] = banach_ito_residual(F, paths[i], wg, sched, t, 0.0); });
    } else if (fn == "x2" || fn == "tx" || fn == "sin") {
        const auto F = fn == "x2" ? C12Function::square() : (fn == "tx" ? C12Function::time_times_x() : C12Function::sine());
        parallel_for(paths.size(), [&](std::size_t i) { reps[i] = ito_report(F, paths[i], sched, t, 0.0); });
    } else {
        throw ConfigError("ito.functional must be point, sqmean, sqnorm, x2, tx or sin");
    }

    auto f = ctx.open("ito-check.csv");
    f << "eps,t,increment,lhs,time_term,forward_term,perp_term,second_order,residual,gap,median_sup_residual\n";
    for (std::size_t e = 0; e < sched.size(); ++e) {
        ItoTerms m;
        std::vector<double> sups;
        for (const auto& r : reps) {
            const auto& l = r.levels[e];
            m.increment += l.increment;
            m.lhs += l.lhs;
            m.time_term += l.time_term;
            m.forward_term += l.forward_term;
            m.perp_term += l.perp_term;
            m.second_order += l.second_order;
            m.residual += l.residual;
            m.gap += l.gap;
            sups.push_back(l.sup_residual);
        }
        const double k = static_cast<double>(reps.size());
        f << format_real(sched.eps(e)) << ',' << format_real(t);
        for (double v : {m.increment, m.lhs, m.time_term, m.forward_term, m.perp_term, m.second_order, m.residual, m.gap})
            f << ',' << format_real(v / k);
        f << ',' << format_real(median(sups)) << '\n';
    }
    write_plot(ctx, "ito-check", "ito-check.csv", "eps", "median_sup_residual");
    ctx.log << "Ito check for " << fn << " on " << spec.label() << " written\n";
    return kExitOk;
}

int cmd_replicate(const Context& ctx) {
    const auto& c = ctx.cfg;
    const auto g = build_grid(c);
    const auto sched = build_schedule(c, g);
    const double sigma = c.real("replicate.sigma");
    const auto payoff = VanillaPayoff::parse(c.str("replicate.payoff"), sigma);
    const VanillaSolution v(payoff, g.horizon(), c.count("replicate.order"));
    if (!v.converged()) ctx.log << "warning: Gauss-Hermite quadrature did not converge for this payoff\n";

    std::vector<std::string> models;
    {
        std::istringstream in(c.str("replicate.models"));
        std::string m;
        while (std::getline(in, m, ',')) models.push_back(m);
    }
    if (models.empty()) throw ConfigError("replicate.models is empty");

    auto f = ctx.open("replicate.csv");
    auto fs_ = ctx.open("replicate-summary.csv");
    f << "model,path_id,h,G0,hedge_integral,residual\n";
    fs_ << "model,mean_abs_residual,stderr,mean_abs_h,relative_error,improper,qv_warning\n";
    bool diverging = false;
    for (std::size_t mi = 0; mi < models.size(); ++mi) {
        const std::string& name = models[mi];
        ProcessSpec spec;
        if (name == "bm") spec = ProcessSpec::brownian(sigma);
        else if (name == "dirichlet") spec = ProcessSpec::dirichlet_default(sigma, c.real("replicate.dirichlet_scale"));
        else if (name == "bifbm") {
            const double h = c.real("replicate.hurst");
            spec = ProcessSpec::bifractional_unit_qv(h, 0.5 / h, sigma);
        } else {
            throw ConfigError("replicate.models: unknown model '" + name + "'");
        }
        ReplicateOptions o;
        o.paths = c.count("replicate.paths");
        o.seed = derive_seed(c.seed(), mi);
        const auto rep = replicate_payoff(v, spec, g, sched, o);
        for (const auto& p : rep.paths)
            f << name << ',' << p.path_id << ',' << format_real(p.h) << ',' << format_real(p.g0) << ','
              << format_real(p.hedge_integral) << ',' << format_real(p.residual) << '\n';
        fs_ << name << ',' << format_real(rep.abs_residual.mean) << ',' << format_real(rep.abs_residual.stderr_) << ','
            << format_real(rep.abs_payoff.mean) << ',' << format_real(rep.relative_error) << ',' << rep.improper << ','
            << rep.qv_warning << '\n';
        if (rep.qv_warning)
            ctx.log << "warning: " << rep.model << " fails the [X]_t = sigma^2 t pre-flight (sup deviation "
                    << format_real(rep.qv_deviation) << ")\n";
        ctx.log << name << ": mean |residual| " << format_real(rep.abs_residual.mean) << " (" << rep.relative_error * 100.0
                << "% of E|h|)\n";
        diverging = diverging || rep.diverging;
    }
    write_plot(ctx, "replicate", "replicate.csv", "h", "residual", "model");
    if (diverging) {
        ctx.log << "error: the improper hedge integral diverged on some paths\n";
        return kExitNumerical;
    }
    return kExitOk;
}

int cmd_kolmo(const Context& ctx) {
    const auto& c = ctx.cfg;
    const auto setup = kolmo_setup(c);
    KolmoProblem p{setup.space, CoeffFns::constant_coeffs(setup.b, setup.sigma), setup.g, setup.s, setup.eta,
                   c.count("kolmo.steps")};
    const double oracle = gaussian_oracle(setup.space, setup.b, setup.sigma, setup.g, setup.eta, setup.s);

    auto f = ctx.open("kolmo.csv");
    f << "m,V_hat,stderr,oracle,rel_err\n";
    const auto ms = c.counts("kolmo.paths");
    for (std::size_t i = 0; i < ms.size(); ++i) {
        const auto est = kolmogorov_mc(p, ms[i], derive_seed(c.seed(), i));
        const double rel = std::abs(est.v_hat - oracle) / std::max(std::abs(oracle), 1e-300);
        f << ms[i] << ',' << format_real(est.v_hat) << ',' << format_real(est.stderr_) << ',' << format_real(oracle)
          << ',' << format_real(rel) << '\n';
        if (est.nan_paths > 0) ctx.log << "warning: " << est.nan_paths << " non-finite path(s) excluded\n";
        ctx.log << "m=" << ms[i] << ": V_hat " << format_real(est.v_hat) << " vs oracle " << format_real(oracle) << '\n';
    }

    auto fd = ctx.open("kolmo-decomposition.csv");
    fd << "steps,dt,mean_R,stderr_R,rms_R,mean_SI,stderr_SI,var_SI,isometry_var\n";
    const auto ladder = c.counts("kolmo.dt_ladder");
    for (std::size_t i = 0; i < ladder.size(); ++i) {
        const auto lvl = decomposition_check(setup.space, setup.b, setup.sigma, setup.g, setup.eta, setup.s, ladder[i],
                                             c.count("kolmo.decomp_paths"), derive_seed(c.seed(), 1000 + i));
        const double var = lvl.stochastic_integral.stddev * lvl.stochastic_integral.stddev;
        fd << lvl.steps << ',' << format_real(lvl.dt) << ',' << format_real(lvl.residual.mean) << ','
           << format_real(lvl.residual.stderr_) << ',' << format_real(lvl.rms_residual) << ','
           << format_real(lvl.stochastic_integral.mean) << ',' << format_real(lvl.stochastic_integral.stderr_) << ','
           << format_real(var) << ',' << format_real(lvl.isometry_variance) << '\n';
    }
    write_plot(ctx, "kolmo", "kolmo.csv", "m", "rel_err");
    return kExitOk;
}

int cmd_selftest(const Context& ctx) {
    int failures = 0;
    auto check = [&](const std::string& name, bool ok) {
        ctx.log << (ok ? "PASS " : "FAIL ") << name << '\n';
        failures += ok ? 0 : 1;
    };
    {
        const Grid g(1.0, 1024);
        const auto paths = PathEnsemble(ProcessSpec::brownian(), g, 50, ctx.cfg.seed()).materialize();
        const auto sched = EpsSchedule::standard(g);
        std::vector<EstimateSeries> per;
        for (const auto& p : paths) per.push_back(quadratic_variation(p, sched, 1.0));
        const auto s = reduce_series(per);
        check("brownian quadratic variation near 1", std::abs(s.extrapolated.mean - 1.0) < 0.1);
        const SamplePath line(g, [&] {
            std::vector<double> v(g.node_count());
            for (std::size_t j = 0; j < v.size(); ++j) v[j] = g.time(j);
            return v;
        }());
        check("bounded variation path has zero bracket", std::abs(quadratic_variation(line, sched, 1.0).extrapolated) < 1e-3);
    }
    {
        const VanillaSolution v(VanillaPayoff::square(1.0), 1.0);
        check("vanilla x^2 solution", std::abs(v.value(0.25, 0.7) - (0.49 + 0.75)) < 1e-10);
    }
    {
        Mat m(2, 2);
        m << 1.0, 0.0, 0.0, -2.0;
        const auto tb = trace_and_bounds(m);
        check("trace bounds", std::abs(tb.trace + 1.0) < 1e-14 && std::abs(tb.l1_norm - 3.0) < 1e-12 && tb.bound_ok);
    }
    {
        const auto setup = default_ou_quadratic(4, 0.5);
        const KolmoProblem p{setup.space, CoeffFns::constant_coeffs(setup.b, setup.sigma), setup.g, setup.s, setup.eta, 4};
        const auto est = kolmogorov_mc(p, 4000, ctx.cfg.seed());
        const double oracle = gaussian_oracle(setup.space, setup.b, setup.sigma, setup.g, setup.eta, setup.s);
        check("kolmogorov Monte Carlo within 4 standard errors", std::abs(est.v_hat - oracle) < 4.0 * est.stderr_);
    }
    return failures == 0 ? kExitOk : kExitNumerical;
}

}  // namespace

KolmoSetup default_ou_quadratic(std::size_t dim, double s) {
    KolmoSetup k;
    k.space = GalerkinSpace::heat(dim);
    const auto d = static_cast<Eigen::Index>(dim);
    k.b = Vec::Zero(d);
    k.sigma = Mat::Identity(d, d);
    k.g.G = k.space.a.cwiseAbs().asDiagonal();
    k.g.c = Vec::Zero(d);
    k.eta.resize(d);
    for (Eigen::Index i = 0; i < d; ++i) k.eta(i) = 1.0 / static_cast<double>(i + 1);
    k.s = s;
    return k;
}

KolmoSetup kolmo_setup(const ResolvedConfig& c) {
    const auto dim = c.count("kolmo.dim");
    const double s = c.real("kolmo.s");
    if (!(s > 0.0)) throw ConfigError("kolmo.s must be positive");
    KolmoSetup k = default_ou_quadratic(dim, s);
    const auto d = static_cast<Eigen::Index>(dim);

    const std::string a = c.str("kolmo.a");
    if (a.rfind("table:", 0) == 0) {
        const auto v = parse_table(a.substr(6), "kolmo.a");
        if (v.size() != dim) throw ConfigError("kolmo.a: table length must equal kolmo.dim");
        k.space.a = Eigen::Map<const Vec>(v.data(), d);
    } else if (a != "heat") {
        throw ConfigError("kolmo.a must be heat or table:...");
    }
    const std::string q = c.str("kolmo.q");
    if (q.rfind("power:", 0) == 0) {
        k.space.q = GalerkinSpace::heat(dim, parse_real(q.substr(6), "kolmo.q")).q;
    } else if (q.rfind("table:", 0) == 0) {
        const auto v = parse_table(q.substr(6), "kolmo.q");
        if (v.size() != dim) throw ConfigError("kolmo.q: table length must equal kolmo.dim");
        k.space.q = Eigen::Map<const Vec>(v.data(), d);
    } else {
        throw ConfigError("kolmo.q must be power:p or table:...");
    }
    k.space.validate();

    const std::string coeffs = c.str("kolmo.coeffs");
    if (coeffs == "drift") {
        for (Eigen::Index i = 0; i < d; ++i) k.b(i) = 1.0 / static_cast<double>(i + 1);
    } else if (coeffs != "ou") {
        throw ConfigError("kolmo.coeffs must be ou or drift");
    }
    const std::string g = c.str("kolmo.g");
    if (g == "quad") {
        k.g.G = k.space.a.cwiseAbs().asDiagonal();
    } else if (g == "linear") {
        k.g.G = Mat::Zero(d, d);
        for (Eigen::Index i = 0; i < d; ++i) k.g.c(i) = 1.0 / static_cast<double>(i + 1);
    } else {
        throw ConfigError("kolmo.g must be quad or linear");
    }
    return k;
}

int run(const Config& config, std::ostream& log) {
    try {
        const ResolvedConfig cfg = resolve(config);
        set_thread_count(static_cast<unsigned>(cfg.integer("run.threads")));
        const fs::path out = cfg.str("run.out");
        fs::create_directories(out);
        {
            std::ofstream m(out / "manifest.ini", std::ios::binary);
            if (!m) throw std::runtime_error("cannot write manifest in " + out.string());
            m << cfg.manifest();
        }
        const Context ctx{cfg, out, log};
        const std::string& cmd = cfg.command();
        if (cmd == "simulate") return cmd_simulate(ctx);
        if (cmd == "qv") return cmd_qv(ctx);
        if (cmd == "forward") return cmd_forward(ctx);
        if (cmd == "window-qv") return cmd_window_qv(ctx);
        if (cmd == "ito-check") return cmd_ito(ctx);
        if (cmd == "replicate") return cmd_replicate(ctx);
        if (cmd == "kolmo") return cmd_kolmo(ctx);
        return cmd_selftest(ctx);
    } catch (const NumericalError& e) {
        log << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::invalid_argument& e) {
        log << "invalid configuration: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        log << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
}

}  // namespace regcalc
