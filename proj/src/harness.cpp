#include "moduli/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "moduli/counterex.hpp"
#include "moduli/serialize.hpp"

namespace moduli::harness {

void parallel_for(int trials, int jobs, const std::function<void(int)>& fn) {
    jobs = std::max(1, jobs);
    if (jobs == 1 || trials <= 1) {
        for (int t = 0; t < trials; ++t) fn(t);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(jobs));
    std::atomic<bool> failed{false};
    for (int w = 0; w < jobs; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const int t = next.fetch_add(1);
                if (t >= trials || failed.load()) break;
                try {
                    fn(t);
                } catch (...) {
                    failed.store(true);
                    break;
                }
            }
        });
    }
    for (std::thread& th : pool) th.join();
    if (failed.load()) throw std::runtime_error("a parallel trial threw; rerun with --jobs 1 for the message");
}

std::string instance_digest(std::uint64_t seed, std::uint64_t trial, int n, rng::Ensemble e) {
    std::ostringstream os;
    os << "seed=" << seed << ";trial=" << trial << ";n=" << n << ";ensemble=" << rng::ensemble_name(e);
    return os.str();
}

// ---------------------------------------------------------------------------
// Orbit sweeps
// ---------------------------------------------------------------------------

const std::vector<std::string>& orbit_op_names() {
    static const std::vector<std::string> names = {
        "polar-support",     "psd-blocks",     "pythagoras",    "euler-hadamard",
        "euler-fourier3",    "euler-fourier4", "thompson-square", "thompson-rect",
        "qsym-thompson",     "sqrt2",          "euler-modulus",
    };
    return names;
}

namespace {

int orbit_op_index(const std::string& op) {
    const auto& names = orbit_op_names();
    for (size_t i = 0; i < names.size(); ++i)
        if (names[i] == op) return static_cast<int>(i);
    throw std::invalid_argument("parameter error: unknown orbit op '" + op + "'");
}

std::uint64_t sweep_stream_id(int op_index, int n, int trial) {
    return (static_cast<std::uint64_t>(op_index) << 40) ^ (static_cast<std::uint64_t>(n) << 32) ^
           static_cast<std::uint64_t>(trial);
}

CMat ginibre(rng::Stream& s, int rows, int cols) {
    return rng::sample_matrix(s, rows, cols, rng::Ensemble::Ginibre);
}

// Direct postcondition check for the support polar decomposition (the one
// sweep entry that is not a certificate).
OrbitSweepRow check_polar_support(const CMat& x, const Tolerances& tol) {
    orbit::PolarSupport ps = orbit::polar_support(x, tol);
    OrbitSweepRow row;
    row.scale = std::max(1.0, max_abs(x));
    const CMat p = ps.w.adjoint() * ps.w;
    const double recon = max_abs(x - ps.w * ps.abs);
    const double proj_defect = max_abs(p * p - p);
    const double support = max_abs(p * ps.abs - ps.abs);
    SpectralData pe = herm_eig(hermitize(p), tol);
    SpectralData qe = herm_eig(hermitize(ps.w * ps.w.adjoint()), tol);
    const double contract =
        std::max(pe.values.empty() ? 0.0 : pe.values.front() - 1.0,
                 qe.values.empty() ? 0.0 : qe.values.front() - 1.0);
    row.residual = std::max({recon, support});
    row.max_defect = std::max(proj_defect, std::max(0.0, contract));
    row.pass = recon <= tol.recon * row.scale && support <= tol.recon * row.scale &&
               proj_defect <= tol.isometry_defect && contract <= tol.isometry_defect;
    return row;
}

OrbitSweepRow run_orbit_instance(const std::string& op, int n, int trial, std::uint64_t seed,
                                 const Tolerances& tol) {
    rng::Stream s = rng::make_stream(seed, sweep_stream_id(orbit_op_index(op), n, trial));
    OrbitSweepRow row;
    row.op = op;
    row.n = n;
    row.trial = trial;

    if (op == "polar-support") {
        CMat x = ginibre(s, n + 2, n);
        if (trial % 3 == 2 && n > 1) {
            // rank-deficient variant: exercise the support cut
            CMat left = ginibre(s, n + 2, n - 1);
            CMat right = ginibre(s, n - 1, n);
            x = left * right;
        }
        OrbitSweepRow r = check_polar_support(x, tol);
        r.op = op;
        r.n = n;
        r.trial = trial;
        return r;
    }

    orbit::OrbitCertificate cert;
    if (op == "psd-blocks") {
        CMat g = ginibre(s, 3 * n, 3 * n);
        cert = orbit::isometry_decompose_psd(hermitize(g.adjoint() * g), n, tol);
    } else if (op == "pythagoras") {
        cert = orbit::partitioned_pythagoras(ginibre(s, 3 * n, 3 * n), n, tol);
    } else if (op == "euler-hadamard") {
        cert = orbit::euler_hadamard_orbit(ginibre(s, n, n), ginibre(s, n, n), ginibre(s, n, n), tol);
    } else if (op == "euler-fourier3") {
        cert = orbit::euler_fourier3_orbit(ginibre(s, n, n), ginibre(s, n, n), ginibre(s, n, n), tol);
    } else if (op == "euler-fourier4") {
        cert = orbit::euler_fourier4_orbit(ginibre(s, n, n), ginibre(s, n, n), ginibre(s, n, n), tol);
    } else if (op == "thompson-square") {
        cert = orbit::thompson_square(ginibre(s, n, n), ginibre(s, n, n), tol);
    } else if (op == "thompson-rect") {
        cert = orbit::thompson_rect(ginibre(s, n + 2, n), ginibre(s, n + 2, n), tol);
    } else if (op == "qsym-thompson") {
        cert = orbit::qsym_thompson(ginibre(s, n, n), ginibre(s, n, n), tol);
    } else if (op == "sqrt2") {
        CMat g1 = ginibre(s, n, n);
        CMat g2 = ginibre(s, n, n);
        cert = orbit::sqrt_two_orbit(hermitize(g1.adjoint() * g1), hermitize(g2.adjoint() * g2), tol);
    } else if (op == "euler-modulus") {
        cert = orbit::euler_modulus_orbit(ginibre(s, n, n), ginibre(s, n, n), ginibre(s, n, n), tol);
    } else {
        throw std::invalid_argument("parameter error: unknown orbit op '" + op + "'");
    }

    orbit::CertificateCheck chk = orbit::verify_certificate(cert, tol);
    row.domination = cert.relation == orbit::Relation::Domination;
    row.residual = chk.residual;
    row.margin = row.domination ? orbit::domination_margin(cert, tol) : 0.0;
    row.max_defect = chk.max_isometry_defect;
    row.scale = chk.scale;
    row.pass = chk.pass;
    return row;
}

}  // namespace

std::vector<OrbitSweepRow> run_orbit_sweep(const std::vector<std::string>& ops,
                                           const OrbitSweepOptions& opt) {
    struct Task {
        std::string op;
        int n;
        int trial;
    };
    std::vector<Task> tasks;
    for (const std::string& op : ops)
        for (int n : opt.sizes)
            for (int t = 0; t < opt.instances; ++t) tasks.push_back({op, n, t});

    std::vector<OrbitSweepRow> rows(tasks.size());
    parallel_for(static_cast<int>(tasks.size()), opt.jobs, [&](int i) {
        const Task& task = tasks[static_cast<size_t>(i)];
        rows[static_cast<size_t>(i)] =
            run_orbit_instance(task.op, task.n, task.trial, opt.seed, opt.tol);
    });
    return rows;
}

std::string orbit_rows_to_json_lines(const std::vector<OrbitSweepRow>& rows) {
    std::ostringstream os;
    for (const OrbitSweepRow& r : rows) {
        serialize::json j{{"op", r.op},
                          {"n", r.n},
                          {"trial", r.trial},
                          {"relation", r.domination ? "domination" : "equality"},
                          {"residual", r.residual},
                          {"margin", r.margin},
                          {"max_defect", r.max_defect},
                          {"scale", r.scale},
                          {"pass", r.pass}};
        os << j.dump() << '\n';
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Inequality family sweeps
// ---------------------------------------------------------------------------

const std::vector<std::string>& family_names() {
    static const std::vector<std::string> names = {
        "euler-pp", "euler-qp", "mixed-qp", "mixed-akc", "akc",
        "weak-euler", "cor82", "weyl-euler", "kyfan", "weyl-qsym",
    };
    return names;
}

namespace {

const std::vector<int> kSizes = {1, 2, 3, 5};
const std::vector<double> kFullGrid = {0.5, 1.2, 1.5, 2.0, 3.0, 4.0};
const std::vector<double> kDualGrid = {1.2, 1.5, 2.0, 3.0, 4.0};

std::uint64_t family_stream_id(const std::string& family, int trial) {
    std::uint64_t h = 1469598103934665603ull;  // FNV-1a over the family name
    for (char c : family) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    return h ^ static_cast<std::uint64_t>(trial);
}

struct FamilyGrids {
    std::vector<int> sizes;
    std::vector<double> p_grid;
};

struct TrialContext {
    rng::Stream stream;
    int n;
    double p;
    std::string digest;
};

TrialContext make_context(const std::string& family, int trial, std::uint64_t seed,
                          const FamilyGrids& grids) {
    const int n = grids.sizes[static_cast<size_t>(trial) % grids.sizes.size()];
    const double p =
        grids.p_grid[(static_cast<size_t>(trial) / grids.sizes.size()) % grids.p_grid.size()];
    std::ostringstream digest;
    digest << "seed=" << seed << ";family=" << family << ";trial=" << trial << ";n=" << n;
    return TrialContext{rng::make_stream(seed, family_stream_id(family, trial)), n, p,
                        digest.str()};
}

// dual families need p > 1; the rest accept any p > 0
bool family_needs_dual_range(const std::string& family) {
    return family == "euler-qp" || family == "mixed-qp" || family == "mixed-akc" ||
           family == "akc";
}

FamilyGrids effective_grids(const std::string& family, const std::vector<int>& sizes,
                            const std::vector<double>& p_values) {
    FamilyGrids g;
    g.sizes = sizes.empty() ? kSizes : sizes;
    for (int n : g.sizes)
        if (n < 1) throw std::invalid_argument("parameter error: sizes must be positive");
    const bool dual = family_needs_dual_range(family);
    const std::vector<double>& base = dual ? kDualGrid : kFullGrid;
    if (p_values.empty()) {
        g.p_grid = base;
    } else {
        for (double p : p_values)
            if (dual ? p > 1.0 : p > 0.0) g.p_grid.push_back(p);
        if (g.p_grid.empty())
            throw std::invalid_argument("parameter error: no requested exponent lies in the '" +
                                        family + "' valid range");
    }
    return g;
}

std::vector<CMat> draw_tuple(rng::Stream& s, int n, int count) {
    std::vector<CMat> out;
    out.reserve(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i)
        out.push_back(rng::sample_matrix(s, n, n, rng::Ensemble::Ginibre));
    return out;
}

std::vector<ineq::IneqReport> run_family_trial(const std::string& family, int trial,
                                               std::uint64_t seed, const FamilyGrids& grids) {
    std::vector<ineq::IneqReport> out;
    if (family == "euler-pp" || family == "weak-euler") {
        TrialContext ctx = make_context(family, trial, seed, grids);
        auto t = draw_tuple(ctx.stream, ctx.n, 3);
        if (family == "euler-pp")
            out.push_back(ineq::cm_euler_pp(t[0], t[1], t[2], ctx.p, ctx.digest));
        else
            out.push_back(ineq::weak_euler_bound(t[0], t[1], t[2], ctx.p, ctx.digest));
    } else if (family == "euler-qp") {
        TrialContext ctx = make_context(family, trial, seed, grids);
        auto t = draw_tuple(ctx.stream, ctx.n, 3);
        auto pair = ineq::cm_euler_qp(t[0], t[1], t[2], ctx.p, ctx.digest);
        out.push_back(std::move(pair.first));
        out.push_back(std::move(pair.second));
    } else if (family == "mixed-qp") {
        TrialContext ctx = make_context(family, trial, seed, grids);
        auto t = draw_tuple(ctx.stream, ctx.n, 3);
        const CMat& a = t[0];
        const CMat& b = t[1];
        const CMat& c = t[2];
        const std::vector<CMat> ytuple = {a + b + c, a, b, c};
        const std::vector<CMat> xtuple = {a + b, b + c, c + a};
        const CMat u = ineq::euler_qp_coefficient_matrix();
        const CMat uadj = u.adjoint();
        if (ctx.p <= 2.0)
            out.push_back(ineq::mixed_norm_check(u, ytuple, ctx.p, ineq::MixedDirection::Forward,
                                                 ctx.digest));
        out.push_back(ineq::mixed_norm_check(uadj, xtuple, ctx.p, ineq::MixedDirection::Forward,
                                             ctx.digest));
        out.push_back(ineq::mixed_norm_check(uadj, xtuple, ctx.p, ineq::MixedDirection::Backward,
                                             ctx.digest));
    } else if (family == "mixed-akc") {
        TrialContext ctx = make_context(family, trial, seed, grids);
        const int count = 2 + trial % 3;
        auto t = draw_tuple(ctx.stream, ctx.n, count);
        const CMat u = ineq::akc_coefficient_matrix(count);
        out.push_back(ineq::mixed_norm_check(u, t, ctx.p, ineq::MixedDirection::Forward, ctx.digest));
        out.push_back(ineq::mixed_norm_check(u, t, ctx.p, ineq::MixedDirection::Backward, ctx.digest));
    } else if (family == "akc") {
        TrialContext ctx = make_context(family, trial, seed, grids);
        const int count = 2 + trial % 3;
        auto t = draw_tuple(ctx.stream, ctx.n, count);
        auto pair = ineq::akc_check(t, ctx.p, ctx.digest);
        out.push_back(std::move(pair.first));
        out.push_back(std::move(pair.second));
    } else if (family == "cor82") {
        TrialContext ctx = make_context(family, trial, seed, grids);
        auto t = draw_tuple(ctx.stream, ctx.n, 3);
        out = ineq::euler_modulus_norm_checks(t[0], t[1], t[2], ctx.digest);
    } else if (family == "weyl-euler") {
        TrialContext ctx = make_context(family, trial, seed, grids);
        auto t = draw_tuple(ctx.stream, ctx.n, 3);
        out = ineq::euler_weyl_sweep(t[0], t[1], t[2], ctx.digest);
    } else if (family == "kyfan") {
        TrialContext ctx = make_context(family, trial, seed, grids);
        auto t = draw_tuple(ctx.stream, ctx.n, 3);
        out = ineq::kyfan_checks(t[0], t[1], t[2], ctx.p, ctx.digest);
    } else if (family == "weyl-qsym") {
        // random square matrices at p <= 2, plus the truncated-shift core
        // across the full grid (expected violations above p = 2)
        TrialContext ctx = make_context(family, trial, seed, grids);
        if (trial % 2 == 0) {
            const CMat z = counterex::truncated_shift3();
            for (int j = 0; 1 + j <= 3; ++j)
                for (int k = 0; 1 + j + k <= 3; ++k)
                    out.push_back(ineq::weyl_singular_check(z, ctx.p, j, k,
                                                            ctx.digest + ";input=shift-core"));
        } else {
            const double p = ctx.p <= 2.0 ? ctx.p : 2.0;  // proven range only
            CMat z = rng::sample_matrix(ctx.stream, ctx.n, ctx.n, rng::Ensemble::Ginibre);
            for (int j = 0; 1 + j <= ctx.n; ++j)
                for (int k = 0; 1 + j + k <= ctx.n; ++k)
                    out.push_back(ineq::weyl_singular_check(z, p, j, k, ctx.digest));
        }
    } else {
        throw std::invalid_argument("parameter error: unknown family '" + family + "'");
    }
    return out;
}

bool expected_violation(const std::string& family, const ineq::IneqReport& rep) {
    // the truncated-shift core defeats the qsym singular-value bound above p=2
    return family == "weyl-qsym" && rep.p > 2.0 &&
           rep.instance.find("shift-core") != std::string::npos;
}

}  // namespace

FamilyResult run_family(const std::string& family, int trials, std::uint64_t seed, int jobs,
                        const std::vector<int>& sizes, const std::vector<double>& p_values) {
    FamilyResult res;
    res.family = family;
    res.trials = trials;
    res.seed = seed;
    const FamilyGrids grids = effective_grids(family, sizes, p_values);

    std::vector<std::vector<ineq::IneqReport>> per_trial(static_cast<size_t>(trials));
    parallel_for(trials, jobs, [&](int t) {
        per_trial[static_cast<size_t>(t)] = run_family_trial(family, t, seed, grids);
    });

    res.min_margin = std::numeric_limits<double>::infinity();
    res.max_ratio = -std::numeric_limits<double>::infinity();
    for (auto& batch : per_trial) {
        for (ineq::IneqReport& rep : batch) {
            res.min_margin = std::min(res.min_margin, rep.margin);
            res.max_ratio = std::max(res.max_ratio, rep.ratio);
            if (rep.verdict == ineq::Verdict::Violated) {
                if (expected_violation(family, rep))
                    ++res.expected_violations;
                else
                    ++res.violated;
            }
            res.reports.push_back(std::move(rep));
        }
    }
    if (res.reports.empty()) {
        res.min_margin = 0.0;
        res.max_ratio = 0.0;
    }
    return res;
}

std::string reports_to_json_lines(const std::vector<ineq::IneqReport>& reports) {
    std::ostringstream os;
    for (const ineq::IneqReport& r : reports) os << serialize::to_json(r).dump() << '\n';
    return os.str();
}

namespace {

int digest_n(const std::string& digest) {
    const size_t pos = digest.find(";n=");
    if (pos == std::string::npos) return 0;
    return std::atoi(digest.c_str() + pos + 3);
}

}  // namespace

std::vector<CsvRow> aggregate_reports(const std::vector<ineq::IneqReport>& reports) {
    std::map<std::tuple<std::string, double, int>, CsvRow> agg;
    for (const ineq::IneqReport& r : reports) {
        const int n = digest_n(r.instance);
        auto key = std::make_tuple(r.name, r.p, n);
        auto it = agg.find(key);
        if (it == agg.end()) {
            CsvRow row;
            row.name = r.name;
            row.p = r.p;
            row.n = n;
            row.min_margin = std::numeric_limits<double>::infinity();
            row.max_ratio = -std::numeric_limits<double>::infinity();
            it = agg.emplace(key, row).first;
        }
        CsvRow& row = it->second;
        ++row.trials;
        row.min_margin = std::min(row.min_margin, r.margin);
        row.max_ratio = std::max(row.max_ratio, r.ratio);
        switch (r.verdict) {
            case ineq::Verdict::Holds: ++row.holds; break;
            case ineq::Verdict::Violated: ++row.violated; break;
            case ineq::Verdict::Equality: ++row.equality; break;
        }
    }
    std::vector<CsvRow> out;
    out.reserve(agg.size());
    for (auto& [key, row] : agg) out.push_back(row);
    return out;
}

std::string csv_to_string(const std::vector<CsvRow>& rows) {
    std::ostringstream os;
    os << "name,p,n,trials,min_margin,max_ratio,verdict_counts\n";
    os.precision(17);
    for (const CsvRow& r : rows)
        os << r.name << ',' << r.p << ',' << r.n << ',' << r.trials << ',' << r.min_margin << ','
           << r.max_ratio << ',' << r.holds << ':' << r.violated << ':' << r.equality << '\n';
    return os.str();
}

std::vector<EulerIdentityRow> run_euler_identity_sweep(const std::vector<int>& sizes,
                                                       int trials_per_size, std::uint64_t seed,
                                                       int jobs) {
    struct Task {
        int n;
        int trial;
    };
    std::vector<Task> tasks;
    for (int n : sizes)
        for (int t = 0; t < trials_per_size; ++t) tasks.push_back({n, t});

    std::vector<EulerIdentityRow> rows(tasks.size());
    parallel_for(static_cast<int>(tasks.size()), jobs, [&](int i) {
        const Task& task = tasks[static_cast<size_t>(i)];
        rng::TupleSample s = rng::make_tuple_sample(
            seed, (static_cast<std::uint64_t>(task.n) << 32) ^ static_cast<std::uint64_t>(task.trial),
            task.n, 3, rng::Ensemble::Ginibre);
        EulerIdentityRow& row = rows[static_cast<size_t>(i)];
        row.n = task.n;
        row.trial = task.trial;
        row.residual = ineq::euler_identity_residual(s.matrices[0], s.matrices[1], s.matrices[2]);
        row.scale = ineq::euler_identity_scale(s.matrices[0], s.matrices[1], s.matrices[2]);
    });
    return rows;
}

}  // namespace moduli::harness
