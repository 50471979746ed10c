// Command-line front end: seeded verification sweeps, counterexample
// reproduction, certificate construction, and the conjecture explorer.
//
// Exit codes: 0 success, 1 verification failure, 2 usage/input error,
// 3 conjecture violation found.

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "moduli/counterex.hpp"
#include "moduli/harness.hpp"
#include "moduli/ineq.hpp"
#include "moduli/orbit.hpp"
#include "moduli/rng.hpp"
#include "moduli/serialize.hpp"

namespace {

using namespace moduli;
using serialize::json;

constexpr std::uint64_t kDefaultSeed = 1729;

std::uint64_t default_seed_from_env() {
    if (const char* env = std::getenv("ORBIT_MODULI_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw std::invalid_argument("parameter error: ORBIT_MODULI_SEED is not an integer");
        }
    }
    return kDefaultSeed;
}

struct OutputSink {
    std::string path;  // empty = stdout

    void write(const std::string& text) const {
        if (path.empty()) {
            std::cout << text;
            if (!text.empty() && text.back() != '\n') std::cout << '\n';
            return;
        }
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot open output file: " + path);
        out << text;
        if (!text.empty() && text.back() != '\n') out << '\n';
    }
};

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

struct VerifyConfig {
    std::string suite = "all";
    std::vector<int> sizes;
    std::vector<double> p_values;
    int trials = 100;
    std::uint64_t seed = kDefaultSeed;
    int jobs = 1;
    std::string format = "text";
    OutputSink sink;
    Tolerances tol;
};

const std::map<std::string, std::vector<std::string>>& suite_orbit_ops() {
    static const std::map<std::string, std::vector<std::string>> m = {
        {"euler",
         {"polar-support", "psd-blocks", "pythagoras", "euler-hadamard", "euler-fourier3",
          "euler-fourier4"}},
        {"thompson", {"thompson-square", "thompson-rect", "qsym-thompson", "sqrt2", "euler-modulus"}},
        {"weyl", {}},
        {"ineq", {}},
        {"orbit", harness::orbit_op_names()},
    };
    return m;
}

const std::map<std::string, std::vector<std::string>>& suite_families() {
    static const std::map<std::string, std::vector<std::string>> m = {
        {"euler", {"euler-pp", "euler-qp", "weak-euler"}},
        {"thompson", {}},
        {"weyl", {"weyl-qsym", "weyl-euler"}},
        {"ineq", {"akc", "mixed-qp", "mixed-akc", "kyfan", "cor82"}},
        {"orbit", {}},
    };
    return m;
}

int run_verify(const VerifyConfig& cfg) {
    std::vector<std::string> ops;
    std::vector<std::string> families;
    bool with_identity = false;
    if (cfg.suite == "all") {
        ops = harness::orbit_op_names();
        families = harness::family_names();
        with_identity = true;
    } else {
        auto oit = suite_orbit_ops().find(cfg.suite);
        auto fit = suite_families().find(cfg.suite);
        if (oit == suite_orbit_ops().end() || fit == suite_families().end())
            throw std::invalid_argument("parameter error: unknown suite '" + cfg.suite + "'");
        ops = oit->second;
        families = fit->second;
        with_identity = cfg.suite == "euler";
    }

    harness::OrbitSweepOptions opt;
    if (!cfg.sizes.empty()) opt.sizes = cfg.sizes;
    opt.instances = cfg.trials;
    opt.seed = cfg.seed;
    opt.jobs = cfg.jobs;
    opt.tol = cfg.tol;

    std::vector<harness::OrbitSweepRow> orbit_rows;
    if (!ops.empty()) orbit_rows = harness::run_orbit_sweep(ops, opt);

    std::vector<ineq::IneqReport> reports;
    int violated = 0, expected = 0;
    for (const std::string& fam : families) {
        harness::FamilyResult res =
            harness::run_family(fam, cfg.trials, cfg.seed, cfg.jobs, cfg.sizes, cfg.p_values);
        violated += res.violated;
        expected += res.expected_violations;
        for (auto& r : res.reports) reports.push_back(std::move(r));
    }

    int identity_failures = 0;
    std::vector<harness::EulerIdentityRow> identity_rows;
    if (with_identity) {
        identity_rows = harness::run_euler_identity_sweep(
            cfg.sizes.empty() ? std::vector<int>{1, 2, 3, 5} : cfg.sizes, cfg.trials, cfg.seed,
            cfg.jobs);
        for (const auto& r : identity_rows)
            if (r.residual > 1e-12 * r.scale) ++identity_failures;
    }

    int orbit_failures = 0;
    for (const auto& r : orbit_rows)
        if (!r.pass) ++orbit_failures;

    const bool ok = orbit_failures == 0 && violated == 0 && identity_failures == 0;

    if (cfg.format == "json") {
        std::string text = harness::orbit_rows_to_json_lines(orbit_rows);
        text += harness::reports_to_json_lines(reports);
        json summary{{"suite", cfg.suite},
                     {"trials", cfg.trials},
                     {"seed", cfg.seed},
                     {"orbit_instances", orbit_rows.size()},
                     {"orbit_failures", orbit_failures},
                     {"ineq_reports", reports.size()},
                     {"violated", violated},
                     {"expected_violations", expected},
                     {"identity_failures", identity_failures},
                     {"pass", ok}};
        text += summary.dump() + "\n";
        cfg.sink.write(text);
    } else if (cfg.format == "csv") {
        cfg.sink.write(harness::csv_to_string(harness::aggregate_reports(reports)));
    } else {
        std::ostringstream os;
        os << "suite " << cfg.suite << ": " << orbit_rows.size() << " orbit instances ("
           << orbit_failures << " failures), " << reports.size() << " inequality reports ("
           << violated << " violations, " << expected << " expected violations)";
        if (with_identity)
            os << ", " << identity_rows.size() << " identity residuals (" << identity_failures
               << " failures)";
        os << '\n';
        for (const auto& r : reports)
            if (r.verdict == ineq::Verdict::Violated)
                os << "  EXPECTED violation: " << r.name << " p=" << r.p
                   << " margin=" << r.margin << " [" << r.instance << "]\n";
        os << (ok ? "PASS" : "FAIL") << '\n';
        cfg.sink.write(os.str());
    }
    return ok ? 0 : 1;
}

// ---------------------------------------------------------------------------
// counterexample
// ---------------------------------------------------------------------------

int run_counterexample(const std::string& which, double x, double p, int n,
                       const std::string& format, const OutputSink& sink) {
    std::vector<counterex::CounterReport> reps;
    if (which == "parallelogram" || which == "all")
        reps.push_back(counterex::parallelogram_counterexample(x));
    if (which == "qsym" || which == "all")
        reps.push_back(counterex::qsym_exponent_counterexample(p));
    if (which == "shift" || which == "all") reps.push_back(counterex::shift_counterexample(p));
    if (which == "sym-thompson" || which == "all")
        reps.push_back(counterex::sym_thompson_counterexample());
    if (which == "four-isometry" || which == "all")
        reps.push_back(counterex::four_isometry_obstruction(n));
    if (reps.empty())
        throw std::invalid_argument("parameter error: unknown construction '" + which + "'");

    bool all_confirmed = true;
    std::ostringstream os;
    for (const auto& rep : reps) {
        all_confirmed = all_confirmed && rep.confirmed;
        if (format == "json") {
            os << serialize::to_json(rep).dump() << '\n';
        } else {
            os << rep.name << ": " << (rep.confirmed ? "confirmed" : "FAILED") << '\n';
            os << "  claim: " << rep.claim << '\n';
            for (const auto& [k, v] : rep.quantities)
                os << "  " << k << " = " << std::setprecision(15) << v << '\n';
            os << "  " << rep.details << '\n';
        }
    }
    sink.write(os.str());
    return all_confirmed ? 0 : 1;
}

// ---------------------------------------------------------------------------
// decompose
// ---------------------------------------------------------------------------

orbit::OrbitCertificate build_certificate(const std::string& op, const std::vector<CMat>& m,
                                          int block, const Tolerances& tol) {
    auto need = [&](size_t count) {
        if (m.size() != count)
            throw std::invalid_argument("malformed input: op '" + op + "' needs " +
                                        std::to_string(count) + " matrices, got " +
                                        std::to_string(m.size()));
    };
    if (op == "euler-hadamard") {
        need(3);
        return orbit::euler_hadamard_orbit(m[0], m[1], m[2], tol);
    }
    if (op == "euler-fourier3") {
        need(3);
        return orbit::euler_fourier3_orbit(m[0], m[1], m[2], tol);
    }
    if (op == "euler-fourier4") {
        need(3);
        return orbit::euler_fourier4_orbit(m[0], m[1], m[2], tol);
    }
    if (op == "euler-modulus") {
        need(3);
        return orbit::euler_modulus_orbit(m[0], m[1], m[2], tol);
    }
    if (op == "thompson-square") {
        need(2);
        return orbit::thompson_square(m[0], m[1], tol);
    }
    if (op == "thompson-rect") {
        need(2);
        return orbit::thompson_rect(m[0], m[1], tol);
    }
    if (op == "qsym-thompson") {
        need(2);
        return orbit::qsym_thompson(m[0], m[1], tol);
    }
    if (op == "sqrt2") {
        need(2);
        return orbit::sqrt_two_orbit(m[0], m[1], tol);
    }
    if (op == "psd-blocks") {
        need(1);
        return orbit::isometry_decompose_psd(m[0], block, tol);
    }
    if (op == "pythagoras") {
        need(1);
        return orbit::partitioned_pythagoras(m[0], block, tol);
    }
    throw std::invalid_argument("malformed input: unknown op '" + op + "'");
}

int run_decompose(const std::string& op, const std::string& in_path, const std::string& out_path,
                  int block, const Tolerances& tol) {
    json doc;
    std::vector<CMat> matrices;
    try {
        doc = serialize::read_file(in_path);
        if (!doc.contains("matrices") || !doc["matrices"].is_array())
            throw std::invalid_argument("malformed input: top-level 'matrices' array required");
        for (const json& mj : doc["matrices"]) matrices.push_back(serialize::cmat_from_json(mj));
        if (block <= 0 && doc.contains("block")) block = doc["block"].get<int>();
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("malformed input: ") + e.what());
    }
    if (block <= 0) block = matrices.empty() ? 1 : matrices[0].cols();

    orbit::OrbitCertificate cert = build_certificate(op, matrices, block, tol);
    orbit::CertificateCheck chk = orbit::verify_certificate(cert, tol);
    if (!chk.pass) {
        std::cerr << "certificate verification failed before writing:\n";
        for (const std::string& f : chk.failures) std::cerr << "  " << f << '\n';
        return 1;
    }
    serialize::write_file(out_path, serialize::to_json(cert));
    std::cout << "wrote " << out_path << " (" << cert.terms.size() << " terms, residual "
              << cert.residual << ")\n";
    return 0;
}

// ---------------------------------------------------------------------------
// explore
// ---------------------------------------------------------------------------

int run_explore(double p, int trials, std::uint64_t seed, int n, const std::string& ensemble,
                bool hill_climb, const std::string& format, const OutputSink& sink) {
    ineq::ExploreSummary s = ineq::conjecture_explore(p, trials, rng::parse_ensemble(ensemble),
                                                      seed, n, hill_climb);
    if (format == "json") {
        sink.write(serialize::to_json(s).dump() + "\n");
    } else {
        std::ostringstream os;
        os << std::setprecision(15);
        os << "exponent " << s.p << ", " << s.trials << " trials, ensemble "
           << rng::ensemble_name(s.ensemble) << ", n=" << s.n << ", seed=" << s.seed << '\n';
        os << "conjectured constant: " << s.conjectured_constant << '\n';
        os << "extremal random ratio: " << s.best_random_ratio << " (trial " << s.best_trial
           << ")\n";
        os << "after hill climb: " << s.best_ratio << '\n';
        if (s.violation_found)
            os << "VIOLATION: beyond the constant by " << s.violation_excess << '\n';
        else
            os << "within the constant (slack " << -s.violation_excess << ")\n";
        os << s.note << '\n';
        sink.write(os.str());
    }
    return s.violation_found ? 3 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"orbit-moduli: isometry-orbit certificates, counterexamples, and "
                 "Schatten-norm inequality sweeps for matrix moduli"};
    app.require_subcommand(1);

    std::uint64_t seed = 0;
    bool seed_given = false;
    Tolerances tol;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--seed", seed, "RNG seed (default fixed; env ORBIT_MODULI_SEED overrides)")
            ->each([&](const std::string&) { seed_given = true; });
        sub->add_option("--psd-slack", tol.psd_slack, "psd slack tolerance");
        sub->add_option("--iso-defect", tol.isometry_defect, "isometry defect tolerance");
        sub->add_option("--recon", tol.recon, "reconstruction tolerance");
    };

    // verify
    VerifyConfig vc;
    CLI::App* verify = app.add_subcommand("verify", "run certificate and inequality sweeps");
    verify->add_option("--suite", vc.suite, "euler|thompson|weyl|ineq|orbit|all")
        ->default_val("all");
    verify->add_option("--n", vc.sizes, "matrix sizes (repeatable)");
    verify->add_option("--p", vc.p_values, "exponents (repeatable)");
    verify->add_option("--trials", vc.trials, "trials per operation/family")->default_val(100);
    verify->add_option("--jobs", vc.jobs, "worker threads")->default_val(1);
    verify->add_option("--format", vc.format, "text|json|csv")->default_val("text");
    verify->add_option("--out", vc.sink.path, "output path (default stdout)");
    add_common(verify);

    // counterexample
    std::string cx_which;
    double cx_x = 2.0, cx_p = 3.0;
    int cx_n = 1;
    std::string cx_format = "text";
    OutputSink cx_sink;
    CLI::App* cxc = app.add_subcommand("counterexample", "reproduce an impossibility argument");
    cxc->add_option("which", cx_which, "parallelogram|qsym|shift|sym-thompson|four-isometry|all")
        ->required();
    cxc->add_option("--x", cx_x, "weight for the parallelogram construction")->default_val(2.0);
    cxc->add_option("--p", cx_p, "exponent for the qsym/shift constructions")->default_val(3.0);
    cxc->add_option("--n", cx_n, "dimension for the four-isometry obstruction")->default_val(1);
    cxc->add_option("--format", cx_format, "text|json")->default_val("text");
    cxc->add_option("--out", cx_sink.path, "output path (default stdout)");

    // decompose
    std::string dc_op, dc_in, dc_out = "certificate.json";
    int dc_block = 0;
    CLI::App* dec = app.add_subcommand("decompose", "build and write an orbit certificate");
    dec->add_option("--op", dc_op,
                    "euler-hadamard|euler-fourier3|euler-fourier4|euler-modulus|thompson-square|"
                    "thompson-rect|qsym-thompson|sqrt2|psd-blocks|pythagoras")
        ->required();
    dec->add_option("--in", dc_in, "input JSON file with a 'matrices' array")->required();
    dec->add_option("--out", dc_out, "certificate output path")->default_val("certificate.json");
    dec->add_option("--block", dc_block, "block size for the block decompositions");
    add_common(dec);

    // explore
    double ex_p = 3.0;
    int ex_trials = 10000, ex_n = 2;
    std::string ex_ensemble = "ginibre", ex_format = "text";
    bool ex_no_climb = false;
    OutputSink ex_sink;
    CLI::App* exp = app.add_subcommand("explore", "probe the sharp-constant conjecture");
    exp->add_option("--p", ex_p, "exponent")->default_val(3.0);
    exp->add_option("--trials", ex_trials, "random triples to sample")->default_val(10000);
    exp->add_option("--n", ex_n, "matrix size")->default_val(2);
    exp->add_option("--ensemble", ex_ensemble, "ginibre|hermitian|psd|diagonal")
        ->default_val("ginibre");
    exp->add_flag("--no-hill-climb", ex_no_climb, "skip the local refinement step");
    exp->add_option("--format", ex_format, "text|json")->default_val("text");
    exp->add_option("--out", ex_sink.path, "output path (default stdout)");
    add_common(exp);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        tol.validate();
        const std::uint64_t effective_seed = seed_given ? seed : default_seed_from_env();
        if (verify->parsed()) {
            vc.seed = effective_seed;
            vc.tol = tol;
            if (vc.format != "text" && vc.format != "json" && vc.format != "csv")
                throw std::invalid_argument("parameter error: unknown format '" + vc.format + "'");
            return run_verify(vc);
        }
        if (cxc->parsed())
            return run_counterexample(cx_which, cx_x, cx_p, cx_n, cx_format, cx_sink);
        if (dec->parsed()) return run_decompose(dc_op, dc_in, dc_out, dc_block, tol);
        if (exp->parsed())
            return run_explore(ex_p, ex_trials, effective_seed, ex_n, ex_ensemble, !ex_no_climb,
                               ex_format, ex_sink);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
