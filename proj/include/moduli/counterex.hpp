#pragma once

#include <string>
#include <utility>
#include <vector>

#include "moduli/cmat.hpp"
#include "moduli/spectral.hpp"

namespace moduli::counterex {

/// Outcome of one counterexample construction: the named quantities it rests
/// on, whether every strict inequality cleared its margin, and a derivation
/// trace for human readers.
struct CounterReport {
    std::string name;
    std::string claim;
    std::vector<std::pair<std::string, double>> quantities;
    bool confirmed = false;
    std::string details;
};

/// The 2x2 rotation-column matrix [[cos t, 0], [-sin t, 0]] whose modulus and
/// adjoint modulus are both projections.
CMat rotation_column(double theta);

/// The unilateral shift truncated to three coordinates.
CMat truncated_shift3();

/// Gap function of the trace obstruction: ((1+cos t)/2)^{1/p} +
/// ((1-cos t)/2)^{1/p} - (1 + sin t). Positive values defeat the
/// quadratic-symmetric-modulus orbit bound for that exponent.
double qsym_gap(double p, double theta);

/// Weighted-parallelogram orbit identity fails for weights outside [0, 1]:
/// scalar witnesses A = 1, B = (x-1)/x force a rank-2 vs rank-1 contradiction
/// while the trace identity still holds for every real x.
CounterReport parallelogram_counterexample(double x, const Tolerances& tol = {});

/// For p > 2 the theta-scan finds a rotation column whose averaged-projection
/// trace exceeds |Re Z| + |Im Z| traces; closed forms are cross-checked
/// against the spectral path.
CounterReport qsym_exponent_counterexample(double p, const Tolerances& tol = {});

/// The truncated shift violates the singular-value form at indices (2, 0)
/// for every p > 2: mu_3 of the averaged-power operator is 2^{-1/p} > 2^{-1/2}.
CounterReport shift_counterexample(double p, const Tolerances& tol = {});

/// The arithmetic symmetric modulus admits no Thompson-type triangle
/// inequality: an explicit 2x2 pair has operator norms 3/sqrt(2) vs
/// 7/(2*sqrt(5)) + 1/2 on the two sides.
CounterReport sym_thompson_counterexample(const Tolerances& tol = {});

/// No four isometries into M_{3n,n} can realize the Euler direct sum: at
/// A = B = C = I the would-be identity forces 9P <= 4I, margin -5.
CounterReport four_isometry_obstruction(int n, const Tolerances& tol = {});

}  // namespace moduli::counterex
