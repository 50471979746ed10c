#include "moduli/ineq.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace moduli::ineq {

namespace {

constexpr double kVerdictTol = 1e-9;

double conjugate_exponent(double p) { return p / (p - 1.0); }

std::vector<double> psd_eigenvalues(const CMat& h, const Tolerances& tol = {}) {
    SpectralData eg = herm_eig(hermitize(h), tol);
    for (double& v : eg.values) v = std::max(0.0, v);
    return eg.values;
}

double kyfan_top(const std::vector<double>& desc, int m) {
    double s = 0.0;
    for (int i = 0; i < m && i < static_cast<int>(desc.size()); ++i) s += desc[static_cast<size_t>(i)];
    return s;
}

double kyfan_bottom(const std::vector<double>& desc, int m) {
    double s = 0.0;
    const int n = static_cast<int>(desc.size());
    for (int i = 0; i < m && i < n; ++i) s += desc[static_cast<size_t>(n - 1 - i)];
    return s;
}

void require_triple(const CMat& a, const CMat& b, const CMat& c, const char* where) {
    if (!a.square() || !b.square() || !c.square() || a.rows() != b.rows() || a.rows() != c.rows())
        throw std::invalid_argument(std::string("dimension error: ") + where +
                                    " needs three equal square matrices");
}

}  // namespace

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Holds: return "holds";
        case Verdict::Violated: return "violated";
        case Verdict::Equality: return "equality";
    }
    return "holds";
}

IneqReport make_report(std::string name, double p, double lhs, double rhs, double constant,
                       std::string instance) {
    IneqReport r;
    r.name = std::move(name);
    r.p = p;
    r.lhs = lhs;
    r.rhs = rhs;
    r.constant = constant;
    r.margin = rhs - lhs;
    r.ratio = (rhs == 0.0) ? 0.0 : lhs / rhs;
    r.instance = std::move(instance);
    const double scale = kVerdictTol * std::max(1.0, std::abs(rhs));
    if (std::abs(r.margin) <= scale)
        r.verdict = Verdict::Equality;
    else if (r.margin < -scale)
        r.verdict = Verdict::Violated;
    else
        r.verdict = Verdict::Holds;
    if (rhs == 0.0 && lhs > scale) r.verdict = Verdict::Violated;
    return r;
}

CMat euler_sum_four(const CMat& a, const CMat& b, const CMat& c) {
    return hermitize(abs_square(a + b + c) + abs_square(a) + abs_square(b) + abs_square(c));
}

CMat euler_sum_pairwise(const CMat& a, const CMat& b, const CMat& c) {
    return hermitize(abs_square(a + b) + abs_square(b + c) + abs_square(c + a));
}

double euler_identity_residual(const CMat& a, const CMat& b, const CMat& c) {
    require_triple(a, b, c, "euler_identity_residual");
    return max_abs(euler_sum_four(a, b, c) - euler_sum_pairwise(a, b, c));
}

double euler_identity_scale(const CMat& a, const CMat& b, const CMat& c) {
    return std::max({1.0, max_abs(euler_sum_four(a, b, c)), max_abs(euler_sum_pairwise(a, b, c))});
}

IneqReport cm_euler_pp(const CMat& a, const CMat& b, const CMat& c, double p,
                       std::string instance) {
    require_triple(a, b, c, "cm_euler_pp");
    if (!(p > 0.0)) throw std::invalid_argument("parameter error: cm_euler_pp needs p > 0");
    const double s3 = schatten_pow(a + b, p) + schatten_pow(b + c, p) + schatten_pow(c + a, p);
    const double s4 = schatten_pow(a + b + c, p) + schatten_pow(a, p) + schatten_pow(b, p) +
                      schatten_pow(c, p);
    const double k = std::pow(2.0, p - 2.0);
    if (p >= 2.0)
        return make_report("euler-pp", p, s3, k * s4, k, std::move(instance));
    return make_report("euler-pp-rev", p, k * s4, s3, k, std::move(instance));
}

std::pair<IneqReport, IneqReport> cm_euler_qp(const CMat& a, const CMat& b, const CMat& c,
                                              double p, std::string instance) {
    require_triple(a, b, c, "cm_euler_qp");
    if (!(p > 1.0)) throw std::invalid_argument("parameter error: cm_euler_qp needs p > 1");
    const double q = conjugate_exponent(p);
    const double k = std::pow(2.0, 1.0 - q / p);

    const CMat sums[3] = {a + b, b + c, c + a};
    const CMat singles[4] = {a + b + c, a, b, c};

    double x_q = 0.0, x_p = 0.0;
    for (const CMat& m : sums) {
        const double np = schatten_norm(m, p);
        x_q += std::pow(np, q);
        x_p += std::pow(np, p);
    }
    double y_q = 0.0, y_p = 0.0;
    for (const CMat& m : singles) {
        const double np = schatten_norm(m, p);
        y_q += std::pow(np, q);
        y_p += std::pow(np, p);
    }

    const double first_lhs = y_q, first_rhs = k * std::pow(x_p, q / p);
    const double second_lhs = x_q, second_rhs = k * std::pow(y_p, q / p);
    if (p <= 2.0)
        return {make_report("euler-qp-four", p, first_lhs, first_rhs, k, instance),
                make_report("euler-qp-pairwise", p, second_lhs, second_rhs, k, instance)};
    return {make_report("euler-qp-four-rev", p, first_rhs, first_lhs, k, instance),
            make_report("euler-qp-pairwise-rev", p, second_rhs, second_lhs, k, instance)};
}

IneqReport mixed_norm_check(const CMat& u, const std::vector<CMat>& z, double p,
                            MixedDirection dir, std::string instance, const Tolerances& tol) {
    if (!(p > 1.0) || std::isinf(p))
        throw std::invalid_argument("parameter error: mixed_norm_check needs 1 < p < infinity");
    if (static_cast<int>(z.size()) != u.cols())
        throw std::invalid_argument("dimension error: tuple length must match coefficient columns");
    if (z.empty()) throw std::invalid_argument("dimension error: empty tuple");

    const int s = u.rows();
    const int t = u.cols();
    const double q = conjugate_exponent(p);
    double mu_coef = 0.0;
    for (int i = 0; i < s; ++i)
        for (int j = 0; j < t; ++j) mu_coef = std::max(mu_coef, std::abs(u(i, j)));

    const bool reversed = p > 2.0;
    const bool needs_isometry = (dir == MixedDirection::Backward) || reversed;
    if (needs_isometry) {
        if (max_abs(hermitize(u.adjoint() * u) - CMat::identity(t)) > 1e-10)
            throw std::invalid_argument(
                "precondition error: this direction needs U*U = I (isometric columns)");
    } else if (operator_norm(u, tol) > 1.0 + 1e-12) {
        throw std::invalid_argument("precondition error: forward direction needs a contraction");
    }

    // image tuple (T_U Z)_i = sum_j u_ij Z_j
    std::vector<CMat> img;
    img.reserve(static_cast<size_t>(s));
    for (int i = 0; i < s; ++i) {
        CMat acc(z[0].rows(), z[0].cols());
        for (int j = 0; j < t; ++j) acc += u(i, j) * z[static_cast<size_t>(j)];
        img.push_back(std::move(acc));
    }

    double img_q = 0.0, img_p = 0.0, src_q = 0.0, src_p = 0.0;
    for (const CMat& m : img) {
        const double np = schatten_norm(m, p);
        img_q += std::pow(np, q);
        img_p += std::pow(np, p);
    }
    for (const CMat& m : z) {
        const double np = schatten_norm(m, p);
        src_q += std::pow(np, q);
        src_p += std::pow(np, p);
    }

    const double factor = std::pow(mu_coef, 2.0 / p - 1.0);
    double lhs, rhs;
    std::string name;
    if (dir == MixedDirection::Forward) {
        lhs = std::pow(img_q, 1.0 / q);
        rhs = factor * std::pow(src_p, 1.0 / p);
        name = "mixed-forward";
    } else {
        lhs = std::pow(src_q, 1.0 / q);
        rhs = factor * std::pow(img_p, 1.0 / p);
        name = "mixed-backward";
    }
    if (reversed) {
        std::swap(lhs, rhs);
        name += "-rev";
    }
    return make_report(std::move(name), p, lhs, rhs, factor, std::move(instance));
}

std::pair<IneqReport, IneqReport> akc_check(const std::vector<CMat>& tuple, double p,
                                            std::string instance) {
    if (!(p > 1.0)) throw std::invalid_argument("parameter error: akc_check needs p > 1");
    const int n = static_cast<int>(tuple.size());
    if (n < 2) throw std::invalid_argument("dimension error: akc_check needs at least two matrices");
    const double q = conjugate_exponent(p);

    CMat total(tuple[0].rows(), tuple[0].cols());
    for (const CMat& m : tuple) total += m;
    double diff_q = 0.0, diff_p = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double d = schatten_norm(tuple[static_cast<size_t>(i)] - tuple[static_cast<size_t>(j)], p);
            diff_q += std::pow(d, q);
            diff_p += std::pow(d, p);
        }
    const double tot = schatten_norm(total, p);
    double self_q = 0.0, self_p = 0.0;
    for (const CMat& m : tuple) {
        const double v = schatten_norm(m, p);
        self_q += std::pow(v, q);
        self_p += std::pow(v, p);
    }

    // sum/difference comparison with constant n, and its sharp complement
    const double sum_lhs = std::pow(tot, q) + diff_q;
    const double sum_rhs = n * std::pow(self_p, q / p);
    const double comp_lhs = self_q;
    const double comp_rhs = std::pow(static_cast<double>(n), -q / p) *
                            std::pow(std::pow(tot, p) + diff_p, q / p);

    if (p <= 2.0)
        return {make_report("akc-sum", p, sum_lhs, sum_rhs, static_cast<double>(n), instance),
                make_report("akc-complement", p, comp_lhs, comp_rhs,
                            std::pow(static_cast<double>(n), -q / p), instance)};
    return {make_report("akc-sum-rev", p, sum_rhs, sum_lhs, static_cast<double>(n), instance),
            make_report("akc-complement-rev", p, comp_rhs, comp_lhs,
                        std::pow(static_cast<double>(n), -q / p), instance)};
}

IneqReport weak_euler_bound(const CMat& a, const CMat& b, const CMat& c, double p,
                            std::string instance) {
    require_triple(a, b, c, "weak_euler_bound");
    if (!(p > 0.0)) throw std::invalid_argument("parameter error: weak_euler_bound needs p > 0");
    const double s3 = schatten_pow(a + b, p) + schatten_pow(b + c, p) + schatten_pow(c + a, p);
    const double s4 = schatten_pow(a + b + c, p) + schatten_pow(a, p) + schatten_pow(b, p) +
                      schatten_pow(c, p);
    const double k = std::pow(3.0, p / 2.0 - 1.0);
    if (p >= 2.0)
        return make_report("weak-euler", p, s4, k * s3, k, std::move(instance));
    return make_report("weak-euler-rev", p, k * s3, s4, k, std::move(instance));
}

IneqReport weyl_singular_check(const CMat& z, double p, int j, int k, std::string instance) {
    if (!z.square()) throw std::invalid_argument("dimension error: weyl_singular_check needs a square matrix");
    if (!(p > 0.0)) throw std::invalid_argument("parameter error: weyl_singular_check needs p > 0");
    const int n = z.rows();
    if (j < 0 || k < 0 || 1 + j + k > n)
        throw std::invalid_argument("parameter error: index out of range in weyl_singular_check");

    Tolerances tol;
    const CMat zp = 0.5 * (psd_power(abs_square(z), p / 2.0, tol) +
                           psd_power(abs_square(z.adjoint()), p / 2.0, tol));
    const CMat qp = psd_power(zp, 1.0 / p, tol);
    SpectralData sq = svd(qp, tol);
    SpectralData sre = svd(re_part(z), tol);
    SpectralData sim = svd(im_part(z), tol);

    std::ostringstream name;
    name << "weyl-qsym-j" << j << "k" << k;
    return make_report(name.str(), p, mu(sq, 1 + j + k), mu(sre, 1 + j) + mu(sim, 1 + k), 1.0,
                       std::move(instance));
}

IneqReport euler_weyl_check(const CMat& a, const CMat& b, const CMat& c, int j, int k, int l,
                            std::string instance) {
    require_triple(a, b, c, "euler_weyl_check");
    const int n = a.rows();
    if (j < 0 || k < 0 || l < 0 || 1 + j + k + l > n)
        throw std::invalid_argument("parameter error: index out of range in euler_weyl_check");

    Tolerances tol;
    const CMat root = psd_power(euler_sum_four(a, b, c), 0.5, tol);
    SpectralData sroot = svd(root, tol);
    SpectralData sab = svd(a + b, tol);
    SpectralData sbc = svd(b + c, tol);
    SpectralData sca = svd(c + a, tol);

    std::ostringstream name;
    name << "weyl-euler-j" << j << "k" << k << "l" << l;
    return make_report(name.str(), 0.0, mu(sroot, 1 + j + k + l),
                       mu(sab, 1 + j) + mu(sbc, 1 + k) + mu(sca, 1 + l), 1.0,
                       std::move(instance));
}

std::vector<IneqReport> euler_weyl_sweep(const CMat& a, const CMat& b, const CMat& c,
                                         std::string instance) {
    require_triple(a, b, c, "euler_weyl_sweep");
    const int n = a.rows();
    Tolerances tol;
    const CMat root = psd_power(euler_sum_four(a, b, c), 0.5, tol);
    const std::vector<double> sroot = svd(root, tol).values;
    const std::vector<double> sab = svd(a + b, tol).values;
    const std::vector<double> sbc = svd(b + c, tol).values;
    const std::vector<double> sca = svd(c + a, tol).values;

    std::vector<IneqReport> out;
    for (int j = 0; j + 1 <= n; ++j)
        for (int k = 0; j + k + 1 <= n; ++k)
            for (int l = 0; j + k + l + 1 <= n; ++l) {
                std::ostringstream name;
                name << "weyl-euler-j" << j << "k" << k << "l" << l;
                out.push_back(make_report(name.str(), 0.0, mu(sroot, 1 + j + k + l),
                                          mu(sab, 1 + j) + mu(sbc, 1 + k) + mu(sca, 1 + l), 1.0,
                                          instance));
            }
    return out;
}

std::vector<IneqReport> kyfan_checks(const CMat& a, const CMat& b, const CMat& c, double p,
                                     std::string instance) {
    require_triple(a, b, c, "kyfan_checks");
    if (!(p > 0.0)) throw std::invalid_argument("parameter error: kyfan_checks needs p > 0");
    const int n = a.rows();
    Tolerances tol;

    const std::vector<double> four = psd_eigenvalues(euler_sum_four(a, b, c), tol);
    const std::vector<double> ab2 = psd_eigenvalues(abs_square(a + b), tol);
    const std::vector<double> bc2 = psd_eigenvalues(abs_square(b + c), tol);
    const std::vector<double> ca2 = psd_eigenvalues(abs_square(c + a), tol);

    // Ky Fan family form of the 2^{p-2} comparison
    const double r = p / 2.0;
    const CMat sum_pows = hermitize(psd_power(abs_square(a + b), r, tol) +
                                    psd_power(abs_square(b + c), r, tol) +
                                    psd_power(abs_square(c + a), r, tol));
    const CMat four_pows = hermitize(psd_power(abs_square(a + b + c), r, tol) +
                                     psd_power(abs_square(a), r, tol) +
                                     psd_power(abs_square(b), r, tol) +
                                     psd_power(abs_square(c), r, tol));
    const std::vector<double> sp = psd_eigenvalues(sum_pows, tol);
    const std::vector<double> fp = psd_eigenvalues(four_pows, tol);
    const double kconst = std::pow(2.0, p - 2.0);

    std::vector<IneqReport> out;
    out.reserve(static_cast<size_t>(3 * n));
    for (int m = 1; m <= n; ++m) {
        std::ostringstream top_name, bot_name, cl_name;
        top_name << "kyfan-top-m" << m;
        bot_name << "kyfan-bottom-m" << m;
        cl_name << "kyfan-clarkson-m" << m;

        out.push_back(make_report(top_name.str(), 0.0, kyfan_top(four, m),
                                  kyfan_top(ab2, m) + kyfan_top(bc2, m) + kyfan_top(ca2, m), 1.0,
                                  instance));
        // anti-norm direction: bottom sums reverse
        out.push_back(make_report(bot_name.str(), 0.0,
                                  kyfan_bottom(ab2, m) + kyfan_bottom(bc2, m) + kyfan_bottom(ca2, m),
                                  kyfan_bottom(four, m), 1.0, instance));
        if (p >= 2.0)
            out.push_back(make_report(cl_name.str(), p, kyfan_top(sp, m),
                                      kconst * kyfan_top(fp, m), kconst, instance));
        else
            out.push_back(make_report(cl_name.str(), p, kconst * kyfan_top(fp, m),
                                      kyfan_top(sp, m), kconst, instance));
    }
    return out;
}

std::vector<IneqReport> euler_modulus_norm_checks(const CMat& a, const CMat& b, const CMat& c,
                                                  std::string instance) {
    require_triple(a, b, c, "euler_modulus_norm_checks");
    const int n = a.rows();
    Tolerances tol;
    const CMat root = psd_power(euler_sum_four(a, b, c), 0.5, tol);
    const std::vector<double> sroot = svd(root, tol).values;
    const std::vector<double> sab = svd(a + b, tol).values;
    const std::vector<double> sbc = svd(b + c, tol).values;
    const std::vector<double> sca = svd(c + a, tol).values;

    std::vector<IneqReport> out;
    out.reserve(static_cast<size_t>(n));
    for (int m = 1; m <= n; ++m) {
        std::ostringstream name;
        name << "euler-modulus-kyfan-m" << m;
        out.push_back(make_report(name.str(), 0.0, kyfan_top(sroot, m),
                                  kyfan_top(sab, m) + kyfan_top(sbc, m) + kyfan_top(sca, m), 1.0,
                                  instance));
    }
    return out;
}

CMat akc_coefficient_matrix(int n) {
    if (n < 2) throw std::invalid_argument("parameter error: coefficient matrix needs n >= 2");
    const int s = 1 + n * (n - 1) / 2;
    CMat u(s, n);
    const double norm = 1.0 / std::sqrt(static_cast<double>(n));
    for (int j = 0; j < n; ++j) u(0, j) = norm;
    int row = 1;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            u(row, i) = norm;
            u(row, j) = -norm;
            ++row;
        }
    return u;
}

CMat euler_qp_coefficient_matrix() {
    return CMat{{cx(0.5, 0), cx(0.5, 0), cx(0.5, 0), cx(-0.5, 0)},
                {cx(0.5, 0), cx(-0.5, 0), cx(0.5, 0), cx(0.5, 0)},
                {cx(0.5, 0), cx(0.5, 0), cx(-0.5, 0), cx(0.5, 0)}};
}

namespace {

double euler_ratio(const CMat& a, const CMat& b, const CMat& c, double p) {
    const double s4 = schatten_pow(a + b + c, p) + schatten_pow(a, p) + schatten_pow(b, p) +
                      schatten_pow(c, p);
    const double s3 = schatten_pow(a + b, p) + schatten_pow(b + c, p) + schatten_pow(c + a, p);
    if (s3 == 0.0) return s4 == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return s4 / s3;
}

bool better(double candidate, double incumbent, bool maximize) {
    return maximize ? candidate > incumbent : candidate < incumbent;
}

}  // namespace

ExploreSummary conjecture_explore(double p, int trials, rng::Ensemble ensemble,
                                  std::uint64_t seed, int n, bool hill_climb) {
    if (!(p > 0.0)) throw std::invalid_argument("parameter error: conjecture_explore needs p > 0");
    if (trials < 1) throw std::invalid_argument("parameter error: conjecture_explore needs trials >= 1");
    if (n < 1) throw std::invalid_argument("parameter error: conjecture_explore needs n >= 1");

    ExploreSummary s;
    s.p = p;
    s.trials = trials;
    s.ensemble = ensemble;
    s.seed = seed;
    s.n = n;
    s.conjectured_constant = (std::pow(3.0, p - 1.0) + 1.0) / std::pow(2.0, p);
    const bool maximize = p >= 2.0;

    double best = maximize ? -std::numeric_limits<double>::infinity()
                           : std::numeric_limits<double>::infinity();
    std::uint64_t best_trial = 0;
    std::vector<CMat> best_triple;
    for (int t = 0; t < trials; ++t) {
        rng::TupleSample sample = rng::make_tuple_sample(seed, static_cast<std::uint64_t>(t), n, 3, ensemble);
        const double r = euler_ratio(sample.matrices[0], sample.matrices[1], sample.matrices[2], p);
        if (!std::isfinite(r)) continue;
        if (better(r, best, maximize)) {
            best = r;
            best_trial = static_cast<std::uint64_t>(t);
            best_triple = sample.matrices;
        }
    }
    s.best_random_ratio = best;
    s.best_trial = best_trial;
    s.best_ratio = best;

    if (hill_climb && !best_triple.empty()) {
        // deterministic coordinate descent from the best random triple
        double step = 0.1;
        double current = best;
        std::vector<CMat> triple = best_triple;
        for (int iter = 0; iter < 50; ++iter) {
            for (int m = 0; m < 3; ++m)
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j)
                        for (int comp = 0; comp < 2; ++comp)
                            for (double sign : {1.0, -1.0}) {
                                const cx delta = comp == 0 ? cx(sign * step, 0.0) : cx(0.0, sign * step);
                                triple[static_cast<size_t>(m)](i, j) += delta;
                                const double r = euler_ratio(triple[0], triple[1], triple[2], p);
                                if (std::isfinite(r) && better(r, current, maximize))
                                    current = r;
                                else
                                    triple[static_cast<size_t>(m)](i, j) -= delta;
                            }
            step *= 0.9;
        }
        s.best_ratio = current;
    }

    const double extreme = s.best_ratio;
    if (maximize) {
        s.violation_excess = extreme - s.conjectured_constant;
    } else {
        s.violation_excess = s.conjectured_constant - extreme;
    }
    s.violation_found = s.violation_excess > 1e-9;
    s.note =
        "numerical evidence only: extremal ratio over sampled and hill-climbed triples, "
        "compared against the conjectured constant; no proof is claimed either way";
    return s;
}

}  // namespace moduli::ineq
