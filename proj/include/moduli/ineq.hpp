#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "moduli/cmat.hpp"
#include "moduli/rng.hpp"
#include "moduli/spectral.hpp"

namespace moduli::ineq {

enum class Verdict { Holds, Violated, Equality };

const char* verdict_name(Verdict v);

/// One evaluated inequality instance, oriented so the claim is lhs <= rhs.
/// Equality: |margin| <= 1e-9 * max(1, rhs); Violated: margin below -that.
struct IneqReport {
    std::string name;
    double p = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    double constant = 1.0;
    double ratio = 0.0;   // lhs / rhs; 0 when rhs == 0
    double margin = 0.0;  // rhs - lhs
    Verdict verdict = Verdict::Holds;
    std::string instance;
};

IneqReport make_report(std::string name, double p, double lhs, double rhs, double constant,
                       std::string instance);

/// Four-term side of the Euler operator identity, |A+B+C|^2 + |A|^2 + |B|^2 + |C|^2.
CMat euler_sum_four(const CMat& a, const CMat& b, const CMat& c);
/// Pairwise side, |A+B|^2 + |B+C|^2 + |C+A|^2.
CMat euler_sum_pairwise(const CMat& a, const CMat& b, const CMat& c);

/// max |LHS - RHS| of the Euler operator identity; an algebraic identity, so
/// this must vanish to roughly machine precision times the operand scale.
double euler_identity_residual(const CMat& a, const CMat& b, const CMat& c);
/// max(1, |LHS|, |RHS|): the scale the identity residual is measured against.
double euler_identity_scale(const CMat& a, const CMat& b, const CMat& c);

/// Schatten p-power comparison of the two Euler sides with constant 2^{p-2}
/// (pairwise side dominated for p >= 2, reversed below).
IneqReport cm_euler_pp(const CMat& a, const CMat& b, const CMat& c, double p,
                       std::string instance = "");

/// Mixed l_q/l_p pair with constant 2^{1-q/p}, q conjugate to p > 1; both
/// displayed inequalities, reversed for p >= 2.
std::pair<IneqReport, IneqReport> cm_euler_qp(const CMat& a, const CMat& b, const CMat& c,
                                              double p, std::string instance = "");

enum class MixedDirection { Forward, Backward };

/// Coefficient-matrix transfer estimate between l_p(S_p) and l_q(S_p):
/// Forward bounds the image tuple, Backward bounds the source tuple; each
/// direction reverses at p = 2 (reversals require U*U = I).
IneqReport mixed_norm_check(const CMat& u, const std::vector<CMat>& z, double p,
                            MixedDirection dir, std::string instance = "",
                            const Tolerances& tol = {});

/// Sum/difference comparison for an n-tuple with constant n, plus the sharp
/// complement with constant n^{-q/p}; both reverse at p = 2.
std::pair<IneqReport, IneqReport> akc_check(const std::vector<CMat>& tuple, double p,
                                            std::string instance = "");

/// Euler comparison with the non-sharp constant 3^{p/2-1}.
IneqReport weak_euler_bound(const CMat& a, const CMat& b, const CMat& c, double p,
                            std::string instance = "");

/// Singular-value form mu_{1+j+k} of the averaged-power operator vs
/// mu_{1+j}(Re Z) + mu_{1+k}(Im Z). Proven only for p <= 2; the harness
/// evaluates any p > 0 and reports what it sees.
IneqReport weyl_singular_check(const CMat& z, double p, int j, int k,
                               std::string instance = "");

/// mu_{1+j+k+l} of the Euler modulus vs the three shifted singular values.
IneqReport euler_weyl_check(const CMat& a, const CMat& b, const CMat& c, int j, int k, int l,
                            std::string instance = "");
/// All index triples with 1+j+k+l <= n.
std::vector<IneqReport> euler_weyl_sweep(const CMat& a, const CMat& b, const CMat& c,
                                         std::string instance = "");

/// Ky Fan consequences of the Euler identity: top-m sums of the four-term side
/// vs the pairwise side (<=), bottom-m sums (>=), and the Ky Fan family form
/// of the 2^{p-2} comparison at the given p.
std::vector<IneqReport> kyfan_checks(const CMat& a, const CMat& b, const CMat& c, double p,
                                     std::string instance = "");

/// Ky Fan family form of the first-power Euler modulus bound:
/// kf_m(sqrt of Euler sum) <= kf_m(A+B) + kf_m(B+C) + kf_m(C+A).
std::vector<IneqReport> euler_modulus_norm_checks(const CMat& a, const CMat& b, const CMat& c,
                                                  std::string instance = "");

/// Coefficient matrix whose rows carry the n-tuple sum and all pairwise
/// differences, scaled by 1/sqrt(n); an isometry.
CMat akc_coefficient_matrix(int n);
/// The 3x4 half-integer matrix sending (sum, A, B, C) to the pairwise sums;
/// its adjoint is an isometry.
CMat euler_qp_coefficient_matrix();

struct ExploreSummary {
    double p = 0.0;
    int trials = 0;
    rng::Ensemble ensemble = rng::Ensemble::Ginibre;
    std::uint64_t seed = 0;
    int n = 0;
    double conjectured_constant = 0.0;
    double best_random_ratio = 0.0;   // max for p >= 2, min for p <= 2
    std::uint64_t best_trial = 0;
    double best_ratio = 0.0;          // after hill climb
    bool violation_found = false;
    double violation_excess = 0.0;
    std::string note;
};

/// Sample triples, track the extremal ratio of the four-term side to the
/// pairwise side, then coordinate-descent from the best triple. Reports
/// evidence only; a ratio beyond the conjectured constant by more than 1e-9
/// is flagged, never asserted away.
ExploreSummary conjecture_explore(double p, int trials, rng::Ensemble ensemble,
                                  std::uint64_t seed, int n, bool hill_climb = true);

}  // namespace moduli::ineq
