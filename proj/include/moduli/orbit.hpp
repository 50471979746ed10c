#pragma once

#include <string>
#include <vector>

#include "moduli/cmat.hpp"
#include "moduli/spectral.hpp"

namespace moduli::orbit {

enum class Relation { Equality, Domination };

/// One summand w * W X W* of an orbit combination: an isometry (or unitary)
/// witness, a Hermitian psd operand, and a positive scalar weight.
struct OrbitTerm {
    CMat witness;
    CMat operand;
    double weight = 1.0;
};

/// A checkable witness object for "target = sum of conjugated operands"
/// (Equality) or "target <= sum" in the psd order (Domination). The residual
/// is measured at construction; verify_certificate recomputes it from scratch.
struct OrbitCertificate {
    CMat target;
    std::vector<OrbitTerm> terms;
    Relation relation = Relation::Equality;
    double residual = 0.0;
};

/// Weighted sum of conjugations, sum_i w_i W_i X_i W_i*.
CMat certificate_rhs(const OrbitCertificate& cert);
/// Equality: max |target - rhs|; Domination: max(0, -lambda_min(rhs - target)).
double certificate_residual(const OrbitCertificate& cert, const Tolerances& tol = {});
/// lambda_min(rhs - target); only meaningful for Domination certificates.
double domination_margin(const OrbitCertificate& cert, const Tolerances& tol = {});
/// max(1, |target|_max): the scale every residual tolerance is relative to.
double certificate_scale(const OrbitCertificate& cert);

struct PolarSupport {
    CMat w;    // partial isometry, same shape as the input
    CMat abs;  // |X|, cols x cols Hermitian psd
};

/// Support-normalized polar decomposition X = W |X| with W*W equal to the
/// support projection of |X| (rank decided by the rank_rel rule).
PolarSupport polar_support(const CMat& x, const Tolerances& tol = {});

/// Extend a partial isometry (U*U an orthogonal projection) to a genuine
/// isometry V with V*V = I and V x = U x on range(U*U). The completion maps an
/// orthonormal basis of ker(U*U) into the orthocomplement of range(U U*) via
/// pivoted Gram-Schmidt.
CMat extend_partial_isometry(const CMat& u, const Tolerances& tol = {});

/// Decompose a psd block matrix into isometric conjugations of its diagonal
/// blocks: H = sum_k V_k H_kk V_k*. Witnesses come from the polar parts of the
/// block columns of H^{1/2}, extended to isometries.
OrbitCertificate isometry_decompose_psd(const CMat& h, int block, const Tolerances& tol = {});

/// Unitary U with Re(X) <= U |X| U*, built by aligning the eigenbasis of
/// Re(X) with the singular basis of X (eigenvalue-interlacing alignment).
CMat fan_hoffman_orbit(const CMat& x, const Tolerances& tol = {});

/// Thompson triangle domination |A+B| <= U|A|U* + V|B|V* for square inputs.
OrbitCertificate thompson_square(const CMat& a, const CMat& b, const Tolerances& tol = {});
/// Same statement for equal-shape rectangular inputs (n x n unitaries).
OrbitCertificate thompson_rect(const CMat& a, const CMat& b, const Tolerances& tol = {});

/// Quadratic-symmetric-modulus triangle inequality,
/// |X+Y|_qsym <= U |X|_qsym U* + V |Y|_qsym V*, via the column stack (Z; Z*).
OrbitCertificate qsym_thompson(const CMat& x, const CMat& y, const Tolerances& tol = {});

/// sqrt(H+K) <= U sqrt(H) U* + V sqrt(K) V* for psd H, K, realized through the
/// rectangular Thompson inequality on the stacks (H^{1/2}; 0) and (0; K^{1/2}).
OrbitCertificate sqrt_two_orbit(const CMat& h, const CMat& k, const Tolerances& tol = {});

/// Block Pythagoras: |T|^2 = sum_{ij} W_ij |T_ij|^2 W_ij* for an m x m block
/// partition into n x n blocks.
OrbitCertificate partitioned_pythagoras(const CMat& t, int block, const Tolerances& tol = {});

/// Euler-identity orbit refinement via the 4x4 Hadamard conjugation:
/// |A+B|^2 (+) |B+C|^2 (+) |C+A|^2 (+) 0 as sixteen weight-1/4 terms over the
/// operand classes |A+B+C|^2, |A|^2, |B|^2, |C|^2.
OrbitCertificate euler_hadamard_orbit(const CMat& a, const CMat& b, const CMat& c,
                                      const Tolerances& tol = {});

/// Three-isometry form: the pairwise squares direct sum equals
/// (1/3) sum_k U_k (|A+B+C|^2 + |A|^2 + |B|^2 + |C|^2) U_k*.
OrbitCertificate euler_fourier3_orbit(const CMat& a, const CMat& b, const CMat& c,
                                      const Tolerances& tol = {});

/// Four-isometry form: |A+B+C|^2 (+) |A|^2 (+) |B|^2 (+) |C|^2 equals
/// (1/4) sum_k U_k (|A+B|^2 + |B+C|^2 + |A+C|^2) U_k*.
OrbitCertificate euler_fourier4_orbit(const CMat& a, const CMat& b, const CMat& c,
                                      const Tolerances& tol = {});

/// Modulus-level domination sqrt(|A+B+C|^2 + |A|^2 + |B|^2 + |C|^2) <=
/// U|A+B|U* + V|B+C|V* + W|C+A|W*, chaining the two-term sqrt orbit twice.
OrbitCertificate euler_modulus_orbit(const CMat& a, const CMat& b, const CMat& c,
                                     const Tolerances& tol = {});

struct CertificateCheck {
    bool pass = false;
    double residual = 0.0;
    double max_isometry_defect = 0.0;
    double min_operand_eig = 0.0;
    double scale = 1.0;
    std::vector<std::string> failures;
};

/// Re-verify a certificate from scratch: witness defects, operand positivity,
/// weights, and the recomputed residual. Stored residuals are not trusted.
CertificateCheck verify_certificate(const OrbitCertificate& cert, const Tolerances& tol = {});

}  // namespace moduli::orbit
