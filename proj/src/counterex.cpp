#include "moduli/counterex.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace moduli::counterex {

namespace {

// Strict inequalities must clear this multiple of the psd slack to count.
double strict_margin(const Tolerances& tol) { return 10.0 * tol.psd_slack; }

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

}  // namespace

CMat rotation_column(double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    return CMat{{cx(c, 0.0), cx(0.0, 0.0)}, {cx(-s, 0.0), cx(0.0, 0.0)}};
}

CMat truncated_shift3() {
    CMat z(3, 3);
    z(1, 0) = 1.0;
    z(2, 1) = 1.0;
    return z;
}

double qsym_gap(double p, double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    return std::pow((1.0 + c) / 2.0, 1.0 / p) + std::pow((1.0 - c) / 2.0, 1.0 / p) - (1.0 + s);
}

CounterReport parallelogram_counterexample(double x, const Tolerances& tol) {
    if (x >= 0.0 && x <= 1.0)
        throw std::invalid_argument(
            "parameter error: the weight must lie outside [0, 1]; inside it the orbit identity holds");
    if (!std::isfinite(x)) throw std::invalid_argument("parameter error: weight must be finite");

    CounterReport rep;
    rep.name = "parallelogram-weight";
    rep.claim = "the weighted parallelogram orbit identity fails for weights outside [0, 1]";

    const double a = 1.0;
    const double b = (x - 1.0) / x;
    const double nab = (1.0 - x) * a + x * b;  // A weighted toward B: vanishes
    const double nba = (1.0 - x) * b + x * a;  // = (2x - 1)/x, nonzero
    const double diff = a - b;                 // = 1/x, nonzero
    const double cross = x * (1.0 - x);        // negative outside [0, 1]

    // trace identity |A (+) B|_2^2 = |nab|^2 + |nba|^2 + 2x(1-x)|A-B|^2,
    // valid for every real x
    const double lhs_trace = a * a + b * b;
    const double rhs_trace = nab * nab + nba * nba + 2.0 * cross * diff * diff;
    const double trace_residual = std::abs(lhs_trace - rhs_trace);

    // After moving the negative cross term left, the left side dominates
    // diag(|A|^2, |B|^2), positive definite of rank 2; the right side is a
    // rank-one conjugation. The rank decision follows the rank_rel rule.
    const double lmin = std::min(a * a, b * b);
    const double lmax = std::max(a * a, b * b);
    const int rank_lhs = numeric_rank({lmax, lmin}, 2, 2, tol);

    rep.quantities = {
        {"x", x},
        {"A", a},
        {"B", b},
        {"A_nabla_x_B", nab},
        {"B_nabla_x_A", nba},
        {"A_minus_B", diff},
        {"x_times_1_minus_x", cross},
        {"trace_identity_residual", trace_residual},
        {"rank2_side_min_eig", lmin},
        {"rank_lhs", static_cast<double>(rank_lhs)},
        {"rank_rhs_max", 1.0},
    };

    const double m = strict_margin(tol);
    rep.confirmed = std::abs(nba) > m && std::abs(diff) > m && (-cross) > m && rank_lhs == 2 &&
                    trace_residual <= 1e-12 * std::max(1.0, lhs_trace);

    std::ostringstream os;
    os << "A=1, B=(x-1)/x=" << fmt(b) << "; the x-weighted mean of (A,B) vanishes while "
       << "the reverse mean " << fmt(nba) << " and A-B=" << fmt(diff)
       << " do not. With x(1-x)=" << fmt(cross)
       << " < 0, moving the difference terms left makes the left side positive definite "
          "(rank 2, min eigenvalue "
       << fmt(lmin)
       << ") while the right side is a rank-one conjugation; no isometries exist. The trace "
          "identity still holds (residual "
       << fmt(trace_residual) << "), so the obstruction is about psd structure, not traces.";
    rep.details = os.str();
    return rep;
}

CounterReport qsym_exponent_counterexample(double p, const Tolerances& tol) {
    if (!(p > 2.0))
        throw std::invalid_argument(
            "parameter error: exponent must exceed 2; at p <= 2 the orbit bound holds");

    // geometric halving; the gap turns positive for small angles whenever
    // p > 2. Success means clearing the strictness margin, not merely
    // crossing zero: right at the sign change the gap is still climbing, so
    // one or two more halvings certify exponents barely above 2.
    const double needed = strict_margin(tol);
    double theta = 0.1;
    double gap = qsym_gap(p, theta);
    while (gap <= needed && theta > 1e-8) {
        theta *= 0.5;
        gap = qsym_gap(p, theta);
    }

    CounterReport rep;
    rep.name = "qsym-exponent";
    rep.claim = "the quadratic-symmetric-modulus orbit bound forces exponent <= 2";
    if (gap <= 0.0) {
        rep.confirmed = false;
        rep.details = "scan exhausted without finding a positive gap";
        rep.quantities = {{"p", p}, {"theta_floor", theta}, {"gap", gap}};
        return rep;
    }

    // cross-check closed forms against the spectral path
    const CMat z = rotation_column(theta);
    const CMat zp = 0.5 * (psd_power(abs_square(z), p / 2.0, tol) +
                           psd_power(abs_square(z.adjoint()), p / 2.0, tol));
    const double lhs_numeric = trace_real(psd_power(zp, 1.0 / p, tol));
    const double rhs_numeric =
        schatten_norm(re_part(z), 1.0, tol) + schatten_norm(im_part(z), 1.0, tol);

    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const double lhs_closed = std::pow((1.0 + c) / 2.0, 1.0 / p) + std::pow((1.0 - c) / 2.0, 1.0 / p);
    const double rhs_closed = 1.0 + s;

    const double lhs_agree = std::abs(lhs_numeric - lhs_closed);
    const double rhs_agree = std::abs(rhs_numeric - rhs_closed);
    const double gap_numeric = lhs_numeric - rhs_numeric;

    // For exponents barely above 2 the scan ends at tiny angles where
    // (1 - cos)/2 is dominated by cancellation; the reachable agreement there
    // is lam^{1/p-1} * eps, which reduces to the usual 1e-10 away from zero.
    const double lam_small = (1.0 - c) / 2.0;
    const double agree_tol =
        std::max(1e-10, std::pow(lam_small, 1.0 / p - 1.0) * 1e-16);

    rep.quantities = {
        {"p", p},
        {"theta_star", theta},
        {"gap", gap},
        {"gap_numeric", gap_numeric},
        {"lhs_trace_closed", lhs_closed},
        {"lhs_trace_numeric", lhs_numeric},
        {"rhs_trace_closed", rhs_closed},
        {"rhs_trace_numeric", rhs_numeric},
        {"closed_vs_numeric_lhs", lhs_agree},
        {"closed_vs_numeric_rhs", rhs_agree},
    };
    rep.confirmed = gap > needed && gap_numeric > needed && lhs_agree <= agree_tol &&
                    rhs_agree <= agree_tol;

    std::ostringstream os;
    os << "rotation column at theta=" << fmt(theta) << ": trace of the averaged-power operator "
       << fmt(lhs_numeric) << " exceeds trace|Re Z| + trace|Im Z| = " << fmt(rhs_numeric)
       << " by " << fmt(gap)
       << "; a trace comparison defeats every choice of unitaries, so the orbit bound fails for p="
       << fmt(p) << ".";
    rep.details = os.str();
    return rep;
}

CounterReport shift_counterexample(double p, const Tolerances& tol) {
    if (!(p > 2.0))
        throw std::invalid_argument(
            "parameter error: exponent must exceed 2; at p <= 2 the singular-value bound holds");

    const CMat z = truncated_shift3();
    const CMat zp = 0.5 * (psd_power(abs_square(z), p / 2.0, tol) +
                           psd_power(abs_square(z.adjoint()), p / 2.0, tol));
    const CMat qp = psd_power(zp, 1.0 / p, tol);

    SpectralData sq = svd(qp, tol);
    SpectralData sre = svd(re_part(z), tol);
    SpectralData sim = svd(im_part(z), tol);

    const double lhs = mu(sq, 3);                    // indices (j,k) = (2,0)
    const double rhs = mu(sre, 3) + mu(sim, 1);
    const double expected_lhs = std::pow(2.0, -1.0 / p);
    const double expected_rhs = std::pow(2.0, -0.5);

    // Im Z = D (Re Z) D* with D = diag(1, -i, -1)
    CMat d(3, 3);
    d(0, 0) = cx(1.0, 0.0);
    d(1, 1) = cx(0.0, -1.0);
    d(2, 2) = cx(-1.0, 0.0);
    const double similarity_residual = max_abs(im_part(z) - d * re_part(z) * d.adjoint());

    CounterReport rep;
    rep.name = "truncated-shift";
    rep.claim = "the singular-value form of the qsym orbit bound fails at indices (2, 0) for p > 2";
    rep.quantities = {
        {"p", p},
        {"mu3_lhs", lhs},
        {"mu3_lhs_expected", expected_lhs},
        {"mu3_re", mu(sre, 3)},
        {"mu1_im", mu(sim, 1)},
        {"rhs", rhs},
        {"rhs_expected", expected_rhs},
        {"violation", lhs - rhs},
        {"similarity_residual", similarity_residual},
    };
    rep.confirmed = (lhs - rhs) > strict_margin(tol) && std::abs(lhs - expected_lhs) <= 1e-12 &&
                    std::abs(rhs - expected_rhs) <= 1e-12 && similarity_residual <= 1e-12;

    std::ostringstream os;
    os << "third singular value of the averaged-power operator is 2^(-1/p)=" << fmt(lhs)
       << " while mu_3(Re Z) + mu_1(Im Z) = " << fmt(rhs)
       << "; Im Z is unitarily similar to Re Z via diag(1,-i,-1) (residual "
       << fmt(similarity_residual) << ").";
    rep.details = os.str();
    return rep;
}

CounterReport sym_thompson_counterexample(const Tolerances& tol) {
    const CMat x{{cx(-1, 0), cx(-1, 0)}, {cx(0, 0), cx(-1, 0)}};
    const CMat y{{cx(0, 0), cx(-1, 0)}, {cx(0, 0), cx(0, 0)}};

    const double nsum = operator_norm(sym_modulus(x + y, tol), tol);
    const double nx = operator_norm(sym_modulus(x, tol), tol);
    const double ny = operator_norm(sym_modulus(y, tol), tol);

    const double expected_sum = 3.0 / std::sqrt(2.0);
    const double expected_x = 7.0 / (2.0 * std::sqrt(5.0));
    const double expected_y = 0.5;
    const double gap = nsum - nx - ny;

    CounterReport rep;
    rep.name = "sym-thompson";
    rep.claim = "no unitary pair satisfies the Thompson inequality for the arithmetic symmetric modulus";
    rep.quantities = {
        {"norm_sym_modulus_sum", nsum},
        {"norm_sym_modulus_sum_expected", expected_sum},
        {"norm_sym_modulus_x", nx},
        {"norm_sym_modulus_x_expected", expected_x},
        {"norm_sym_modulus_y", ny},
        {"norm_sym_modulus_y_expected", expected_y},
        {"gap", gap},
    };
    rep.confirmed = gap > strict_margin(tol) && std::abs(nsum - expected_sum) <= 1e-10 &&
                    std::abs(nx - expected_x) <= 1e-10 && std::abs(ny - expected_y) <= 1e-10;

    std::ostringstream os;
    os << "operator norm of |X+Y|_sym is " << fmt(nsum) << " = 3/sqrt(2), exceeding "
       << fmt(nx) << " + " << fmt(ny)
       << " = 7/(2 sqrt(5)) + 1/2; any unitary-orbit bound would force the reverse comparison "
          "of operator norms, so none exists (gap "
       << fmt(gap) << ").";
    rep.details = os.str();
    return rep;
}

CounterReport four_isometry_obstruction(int n, const Tolerances& tol) {
    if (n < 1) throw std::invalid_argument("parameter error: dimension must be positive");

    // at A = B = C = I the would-be four-isometry identity forces 9 U1 U1* <= 4I
    CMat proj(3 * n, 3 * n);
    for (int i = 0; i < n; ++i) proj(i, i) = 1.0;
    const CMat lhs = 9.0 * proj;
    const CMat rhs = 4.0 * CMat::identity(3 * n);
    PsdVerdict v = psd_leq(lhs, rhs, tol);

    CounterReport rep;
    rep.name = "four-isometry";
    rep.claim = "no four isometries into M_{3n,n} realize the Euler direct sum identity";
    rep.quantities = {
        {"n", static_cast<double>(n)},
        {"margin", v.margin},
        {"holds", v.holds ? 1.0 : 0.0},
    };
    rep.confirmed = !v.holds && std::abs(v.margin + 5.0) <= 1e-12;

    std::ostringstream os;
    os << "a rank-" << n << " projection scaled by 9 cannot sit below 4I in M_{" << 3 * n
       << "}: lambda_min(4I - 9P) = " << fmt(v.margin)
       << "; the identity at A=B=C=I would require exactly that, independent of n.";
    rep.details = os.str();
    return rep;
}

}  // namespace moduli::counterex
