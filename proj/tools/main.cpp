// canard-kit: classify contact points of planar slow-fast systems given as
// a triplet (F, Z, Q), certify the invariance properties of the computed
// quantities, and cross-check Hopf criticality by direct simulation.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "canard/model_file.hpp"
#include "canard/toml.hpp"
#include "canard/report.hpp"
#include "canard/sim.hpp"

namespace {

using namespace canard;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;    // also I/O and parse errors
constexpr int kExitAnalysis = 2; // degenerate point / assumption failure / no convergence

struct CommonOpts {
    std::string file;
    std::vector<std::string> params;
    std::string format = "text";
    double tol_degenerate = -1.0;
    double tol_residual = -1.0;
    std::uint64_t seed = 0;
    bool seed_set = false;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("model", o.file, "model file (TOML)")->required();
    cmd->add_option("--param", o.params, "parameter override name=value (repeatable)");
    cmd->add_option("--format", o.format, "output format: text or json")
        ->check(CLI::IsMember({"text", "json"}));
    cmd->add_option("--tol-degenerate", o.tol_degenerate, "degeneracy / sign dead-zone threshold");
    cmd->add_option("--tol-residual", o.tol_residual, "residual acceptance for |F|, |ZF|");
    cmd->add_option("--seed", o.seed, "RNG seed for randomized checks")
        ->each([&](const std::string&) { o.seed_set = true; });
}

ModelFile load(const CommonOpts& o) {
    ModelFile mf = load_model_file(o.file);
    if (o.tol_degenerate > 0) mf.tol.degenerate = o.tol_degenerate;
    if (o.tol_residual > 0) mf.tol.residual = o.tol_residual;
    if (o.seed_set) mf.seed = o.seed;
    return mf;
}

Point parse_pair(const std::string& text, const char* what) {
    std::size_t comma = text.find(',');
    if (comma == std::string::npos)
        throw ModelFileError(std::string(what) + " must look like x,y");
    try {
        return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
    } catch (const std::exception&) {
        throw ModelFileError(std::string(what) + " must look like x,y");
    }
}

int cmd_analyze(const CommonOpts& o, const std::string& guess_opt, bool with_verify) {
    ModelFile mf = load(o);
    Bindings params = resolve_parameters(mf, o.params);

    std::optional<Point> guess = mf.guess;
    if (!guess_opt.empty()) guess = parse_pair(guess_opt, "--guess");
    if (!guess) throw ModelFileError("no guess point: provide [point].guess or --guess");

    ContactPoint p = find_contact_point(mf.model, *guess, params, mf.tol);
    InvariantSet inv = compute_derived(mf.model, p, mf.tol);
    Classification cls = classify_point(mf.model, {p.x, p.y}, params, mf.tol);

    AnalysisReport r;
    r.model_name = mf.name;
    r.F = mf.model.F.str();
    r.Z = {mf.model.Z.x.str(), mf.model.Z.y.str()};
    r.Q = {mf.model.Q.x.str(), mf.model.Q.y.str()};
    r.parameters = mf.model.parameters;
    r.param_values = params;
    r.identity_metric = mf.model.metric.is_identity();
    r.assumptions = check_assumptions(mf.model, {p.x, p.y}, params, mf.tol);
    r.contact = p;
    r.A = inv.A;
    r.G_at_p = inv.G_at_p;
    r.VG_at_p = inv.VG_at_p;
    r.V2G_at_p = inv.V2G_at_p;
    r.sigma = inv.sigma;
    r.G_symbolic = inv.G_expr.str();
    r.classification = cls;
    if (cls.kind == PointKind::SlowFastHopf)
        r.transversality = transversality(mf.model, p, TransversalityMode::Hopf, mf.tol);
    else if (cls.kind == PointKind::BogdanovTakens)
        r.transversality = transversality(mf.model, p, TransversalityMode::BogdanovTakens, mf.tol);
    if (with_verify) {
        VerifyContext ctx{mf.model, params, *guess, mf.tol, 1e-8, mf.seed};
        r.verification = run_verify_suite(ctx);
    }

    if (o.format == "json")
        std::cout << to_json(r).dump(2) << "\n";
    else
        std::cout << render_text(r);
    if (r.verification && !r.verification->all_pass()) return kExitAnalysis;
    return kExitOk;
}

int cmd_verify(const CommonOpts& o, int perturbations) {
    ModelFile mf = load(o);
    Bindings params = resolve_parameters(mf, o.params);
    if (!mf.guess) throw ModelFileError("no guess point: provide [point].guess");

    VerifyContext ctx{mf.model, params, *mf.guess, mf.tol, 1e-8, mf.seed};
    VerificationReport report = run_verify_suite(ctx, perturbations);

    if (o.format == "json") {
        nlohmann::json checks = nlohmann::json::array();
        for (const VerificationCheck& c : report.checks)
            checks.push_back({{"name", c.name},
                              {"samples", c.samples},
                              {"max_deviation", c.max_deviation},
                              {"pass", c.pass},
                              {"detail", c.detail}});
        std::cout << nlohmann::json{{"checks", checks}, {"all_pass", report.all_pass()}}.dump(2)
                  << "\n";
    } else {
        std::cout << render_text(report);
    }
    return report.all_pass() ? kExitOk : kExitAnalysis;
}

int cmd_simulate(const CommonOpts& o, double eps, bool eps_set, double t_end, double dt,
                 bool dt_set, const std::string& start_opt, const std::string& output,
                 bool probe) {
    if (!eps_set) {
        std::cerr << "error: simulate requires --eps\n";
        return kExitUsage;
    }
    ModelFile mf = load(o);
    Bindings params = resolve_parameters(mf, o.params);

    SimConfig cfg;
    cfg.eps = eps;
    cfg.t_end = t_end;
    cfg.dt = dt_set ? dt : mf.sim_dt;
    cfg.params = params;
    if (!start_opt.empty())
        cfg.start = parse_pair(start_opt, "--start");
    else if (mf.sim_start)
        cfg.start = *mf.sim_start;
    else if (mf.guess)
        cfg.start = *mf.guess;
    else
        throw ModelFileError("no start point: provide [sim].start, [point].guess or --start");

    IntegrationResult result = integrate(mf.model, cfg);

    bool csv_to_stdout = output.empty();
    if (csv_to_stdout) {
        write_trajectory_csv(std::cout, result.trajectory);
    } else {
        std::ofstream out(output);
        if (!out) throw ModelFileError("cannot open output file: " + output);
        write_trajectory_csv(out, result.trajectory);
    }
    if (result.status == IntegrationStatus::Escaped)
        std::cerr << "integration stopped at the escape radius: t = " << result.last.t << ", ("
                  << result.last.x << ", " << result.last.y << ")\n";
    if (result.status == IntegrationStatus::NonFinite) {
        std::cerr << "integration lost finiteness; last valid state: t = " << result.last.t
                  << ", (" << result.last.x << ", " << result.last.y << ")\n";
        return kExitAnalysis;
    }

    if (probe) {
        if (mf.breaking.empty())
            throw ModelFileError("--probe needs a 'breaking' parameter in [model]");
        if (!mf.guess) throw ModelFileError("--probe needs [point].guess");
        ContactPoint p = find_contact_point(mf.model, *mf.guess, params, mf.tol);
        ProbeOptions popts;
        popts.dt = cfg.dt;
        ProbeResult pr = criticality_probe(mf.model, p, eps, mf.breaking, popts);
        // sigma is meaningful at the Hopf parameter value the probe located
        Bindings hopf_params = params;
        hopf_params[mf.breaking] = pr.hopf_param;
        ContactPoint ph = track_contact_point(mf.model, p, hopf_params, mf.tol);
        InvariantSet inv = compute_derived(mf.model, ph, mf.tol);
        std::ostream& os = csv_to_stdout ? std::cerr : std::cout;
        os << "probe: " << probe_verdict_name(pr.verdict) << " (sigma = " << inv.sigma
           << " at " << mf.breaking << " = " << pr.hopf_param << ")";
        if (!pr.detail.empty()) os << " -- " << pr.detail;
        os << "\n";
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"contact-point classification for planar slow-fast systems"};
    app.require_subcommand(1);

    CommonOpts analyze_opts, verify_opts, simulate_opts;
    std::string guess_opt;
    bool with_verify = false;
    int perturbations = 3;
    double eps = 0.0, t_end = 100.0, dt = 0.01;
    bool eps_set = false, dt_set = false;
    std::string start_opt, output;
    bool probe = false;

    CLI::App* analyze = app.add_subcommand("analyze", "classify the contact point of a model");
    add_common(analyze, analyze_opts);
    analyze->add_option("--guess", guess_opt, "Newton seed x,y (overrides [point].guess)");
    analyze->add_flag("--verify", with_verify, "also run the invariance suite");

    CLI::App* verify = app.add_subcommand("verify", "run the invariance suite on a model");
    add_common(verify, verify_opts);
    verify->add_option("--perturbations", perturbations, "random perturbations per check (>= 3)");

    CLI::App* simulate = app.add_subcommand("simulate", "integrate the full field, CSV output");
    add_common(simulate, simulate_opts);
    simulate->add_option("--eps", eps, "singular perturbation parameter")
        ->each([&](const std::string&) { eps_set = true; });
    simulate->add_option("--t-end", t_end, "integration horizon");
    simulate->add_option("--dt", dt, "RK4 step")->each([&](const std::string&) { dt_set = true; });
    simulate->add_option("--start", start_opt, "initial point x,y");
    simulate->add_option("--output", output, "CSV file (default: stdout)");
    simulate->add_flag("--probe", probe, "also run the criticality probe");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (analyze->parsed()) return cmd_analyze(analyze_opts, guess_opt, with_verify);
        if (verify->parsed()) return cmd_verify(verify_opts, perturbations);
        if (simulate->parsed())
            return cmd_simulate(simulate_opts, eps, eps_set, t_end, dt, dt_set, start_opt, output,
                                probe);
    } catch (const ModelFileError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const canard::toml::TomlError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const AnalysisError& e) {
        std::cerr << "analysis failed: " << e.what() << "\n";
        return kExitAnalysis;
    } catch (const EvalError& e) {
        std::cerr << "analysis failed: " << e.what() << "\n";
        return kExitAnalysis;
    }
    return kExitUsage;
}
