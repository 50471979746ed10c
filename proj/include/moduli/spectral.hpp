#pragma once

#include <vector>

#include "moduli/cmat.hpp"

namespace moduli {

/// Global numeric policy shared by every tolerance decision.
struct Tolerances {
    double psd_slack = 1e-9;        // allowed negative eigenvalue slack, relative
    double isometry_defect = 1e-10; // max |W*W - I| for accepted witnesses
    double recon = 1e-9;            // reconstruction / equality residual, relative
    double rank_rel = 1e-12;        // relative singular-value cutoff for rank decisions

    void validate() const;
};

/// Ordered spectral factorization. For Hermitian input `right` is empty and
/// H = left diag(values) left*; for a general m x n matrix this is a thin SVD
/// X = left diag(values) right* of width min(m, n), values nonincreasing.
struct SpectralData {
    std::vector<double> values;
    CMat left;
    CMat right;
};

/// values[m-1] with the zero-padding convention for indices beyond the list
/// (1-based, matching mu_m in the usual singular-value notation).
double mu(const SpectralData& s, int m);
double mu(const std::vector<double>& values, int m);

/// Hermitian eigendecomposition by cyclic Jacobi rotations. Deterministic:
/// fixed sweep order, stable nonincreasing eigenvalue sort, every eigenvector
/// column phase-normalized so its first entry of largest modulus is real
/// positive. Converges when the off-diagonal Frobenius mass drops below
/// 1e-14 * ||H||_F.
SpectralData herm_eig(const CMat& h, const Tolerances& tol = {});

/// Thin SVD derived from herm_eig(X*X); the left factor is recovered as
/// X R Sigma^+ with zero-singular-value columns filled by deterministic
/// orthonormal extension, then re-orthonormalized.
SpectralData svd(const CMat& x, const Tolerances& tol = {});

/// Numerical rank: count of values > rank_rel * values[0] * max(rows, cols).
int numeric_rank(const std::vector<double>& values, int rows, int cols,
                 const Tolerances& tol = {});

/// Functional calculus t -> t^r on a Hermitian psd matrix. Eigenvalues within
/// psd_slack below zero are clamped to zero; anything lower is an error.
CMat psd_power(const CMat& h, double r, const Tolerances& tol = {});

/// |X| = (X*X)^{1/2}, a cols x cols Hermitian psd matrix.
CMat abs_modulus(const CMat& x, const Tolerances& tol = {});

/// |X|^2 = X*X, hermitized.
CMat abs_square(const CMat& x);

/// Schatten p-(quasi)norm; p = infinity gives the operator norm.
double schatten_norm(const CMat& x, double p, const Tolerances& tol = {});
/// sum of singular values^p (the p-th power of the p-norm, computed directly).
double schatten_pow(const CMat& x, double p, const Tolerances& tol = {});
double operator_norm(const CMat& x, const Tolerances& tol = {});

struct PsdVerdict {
    bool holds = false;
    double margin = 0.0;  // lambda_min(B - A), reported either way
};

/// A <= B in the positive semidefinite order, within psd_slack.
PsdVerdict psd_leq(const CMat& a, const CMat& b, const Tolerances& tol = {});

/// (|Z| + |Z*|)/2.
CMat sym_modulus(const CMat& z, const Tolerances& tol = {});
/// ((|Z|^2 + |Z*|^2)/2)^{1/2} = ((Z*Z + ZZ*)/2)^{1/2}.
CMat qsym_modulus(const CMat& z, const Tolerances& tol = {});
/// (Z + Z*)/2.
CMat re_part(const CMat& z);
/// (Z - Z*)/(2i).
CMat im_part(const CMat& z);

}  // namespace moduli
