#include "moduli/orbit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace moduli::orbit {

namespace {

OrbitCertificate finish(CMat target, std::vector<OrbitTerm> terms, Relation rel,
                        const Tolerances& tol) {
    OrbitCertificate cert;
    cert.target = std::move(target);
    cert.terms = std::move(terms);
    cert.relation = rel;
    cert.residual = certificate_residual(cert, tol);
    return cert;
}

void require_same_square(const CMat& a, const CMat& b, const char* where) {
    if (!a.square() || !b.square() || a.rows() != b.rows())
        throw std::invalid_argument(std::string("dimension error: ") + where +
                                    " needs equal square matrices");
}

}  // namespace

CMat certificate_rhs(const OrbitCertificate& cert) {
    CMat rhs(cert.target.rows(), cert.target.cols());
    for (const OrbitTerm& t : cert.terms)
        rhs += t.weight * (t.witness * t.operand * t.witness.adjoint());
    return rhs;
}

double certificate_scale(const OrbitCertificate& cert) {
    return std::max(1.0, max_abs(cert.target));
}

double certificate_residual(const OrbitCertificate& cert, const Tolerances& tol) {
    const CMat rhs = certificate_rhs(cert);
    if (cert.relation == Relation::Equality) return max_abs(cert.target - rhs);
    SpectralData eg = herm_eig(hermitize(rhs - cert.target), tol);
    const double lmin = eg.values.empty() ? 0.0 : eg.values.back();
    return std::max(0.0, -lmin);
}

double domination_margin(const OrbitCertificate& cert, const Tolerances& tol) {
    SpectralData eg = herm_eig(hermitize(certificate_rhs(cert) - cert.target), tol);
    return eg.values.empty() ? 0.0 : eg.values.back();
}

PolarSupport polar_support(const CMat& x, const Tolerances& tol) {
    require_finite(x, "polar_support");
    SpectralData sv = svd(x, tol);
    const int m = x.rows();
    const int n = x.cols();
    const int r = numeric_rank(sv.values, m, n, tol);

    PolarSupport out;
    out.w = CMat(m, n);
    for (int c = 0; c < r; ++c)
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < n; ++j)
                out.w(i, j) += sv.left(i, c) * std::conj(sv.right(j, c));

    out.abs = CMat(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            cx acc(0.0, 0.0);
            for (int c = 0; c < static_cast<int>(sv.values.size()); ++c)
                acc += sv.right(i, c) * sv.values[static_cast<size_t>(c)] * std::conj(sv.right(j, c));
            out.abs(i, j) = acc;
        }
    out.abs = hermitize(out.abs);
    return out;
}

CMat extend_partial_isometry(const CMat& u, const Tolerances& tol) {
    require_finite(u, "extend_partial_isometry");
    const int m = u.rows();
    const int n = u.cols();
    if (m < n)
        throw std::invalid_argument("dimension error: extension needs rows >= cols");

    const CMat p = hermitize(u.adjoint() * u);
    SpectralData eg = herm_eig(p, tol);
    // projection check: spectrum clusters at 0 and 1
    constexpr double kProjTol = 1e-8;
    int kernel_dim = 0;
    for (double lam : eg.values) {
        if (std::abs(lam) <= kProjTol) {
            ++kernel_dim;
        } else if (std::abs(lam - 1.0) > kProjTol) {
            throw std::invalid_argument("precondition error: U*U is not a projection");
        }
    }
    if (kernel_dim == 0) return u;

    // kernel basis: trailing eigenvector columns (eigenvalues sorted nonincreasing)
    CMat kbasis(n, kernel_dim);
    for (int c = 0; c < kernel_dim; ++c)
        for (int i = 0; i < n; ++i) kbasis(i, c) = eg.left(i, n - kernel_dim + c);

    // orthonormal vectors orthogonal to range(U), via pivoted Gram-Schmidt on
    // standard basis candidates
    CMat ybasis(m, kernel_dim);
    {
        // reuse the deterministic extension: seed an empty basis, project out range(U)
        // range(U) is spanned by the columns of U restricted to its support; the
        // projector is U U* (partial isometry), applied inside the candidate loop.
        std::vector<bool> used(static_cast<size_t>(m), false);
        int filled = 0;
        while (filled < kernel_dim) {
            int best_k = -1;
            double best_norm = -1.0;
            std::vector<cx> best_v;
            for (int k = 0; k < m; ++k) {
                if (used[static_cast<size_t>(k)]) continue;
                std::vector<cx> v(static_cast<size_t>(m), cx(0.0, 0.0));
                v[static_cast<size_t>(k)] = 1.0;
                // two projection passes against range(U) and chosen columns
                for (int pass = 0; pass < 2; ++pass) {
                    // v -= U (U* v)
                    std::vector<cx> w(static_cast<size_t>(n), cx(0.0, 0.0));
                    for (int c = 0; c < n; ++c)
                        for (int i = 0; i < m; ++i)
                            w[static_cast<size_t>(c)] += std::conj(u(i, c)) * v[static_cast<size_t>(i)];
                    for (int i = 0; i < m; ++i)
                        for (int c = 0; c < n; ++c)
                            v[static_cast<size_t>(i)] -= u(i, c) * w[static_cast<size_t>(c)];
                    // v -= Y (Y* v)
                    for (int c = 0; c < filled; ++c) {
                        cx dot(0.0, 0.0);
                        for (int i = 0; i < m; ++i) dot += std::conj(ybasis(i, c)) * v[static_cast<size_t>(i)];
                        for (int i = 0; i < m; ++i) v[static_cast<size_t>(i)] -= dot * ybasis(i, c);
                    }
                }
                double n2 = 0.0;
                for (const cx& t : v) n2 += std::norm(t);
                const double norm = std::sqrt(n2);
                if (norm > best_norm + 1e-15) {
                    best_norm = norm;
                    best_k = k;
                    best_v = v;
                }
            }
            if (best_k < 0 || best_norm <= 1e-8)
                throw std::runtime_error("extend_partial_isometry: no orthogonal direction left");
            used[static_cast<size_t>(best_k)] = true;
            for (int i = 0; i < m; ++i) ybasis(i, filled) = best_v[static_cast<size_t>(i)] / best_norm;
            ++filled;
        }
    }

    // V = U + sum_j y_j k_j*
    CMat v = u;
    for (int j = 0; j < kernel_dim; ++j)
        for (int i = 0; i < m; ++i)
            for (int c = 0; c < n; ++c)
                v(i, c) += ybasis(i, j) * std::conj(kbasis(c, j));
    return v;
}

OrbitCertificate isometry_decompose_psd(const CMat& h, int block, const Tolerances& tol) {
    require_finite(h, "isometry_decompose_psd");
    if (!h.square()) throw std::invalid_argument("dimension error: psd block decomposition needs a square matrix");
    if (block <= 0 || h.rows() % block != 0)
        throw std::invalid_argument("dimension error: size not divisible by block");
    const int m = h.rows() / block;

    const CMat r = psd_power(h, 0.5, tol);  // also validates psd within slack
    std::vector<OrbitTerm> terms;
    terms.reserve(static_cast<size_t>(m));
    for (int k = 0; k < m; ++k) {
        const CMat rk = col_slice(r, k * block, (k + 1) * block);
        PolarSupport ps = polar_support(rk, tol);
        OrbitTerm t;
        t.witness = extend_partial_isometry(ps.w, tol);
        t.operand = block_extract(h, k, k, block);
        t.weight = 1.0;
        terms.push_back(std::move(t));
    }
    return finish(hermitize(h), std::move(terms), Relation::Equality, tol);
}

CMat fan_hoffman_orbit(const CMat& x, const Tolerances& tol) {
    require_finite(x, "fan_hoffman_orbit");
    if (!x.square()) throw std::invalid_argument("dimension error: fan_hoffman_orbit needs a square matrix");
    SpectralData re_eig = herm_eig(re_part(x), tol);
    SpectralData sv = svd(x, tol);
    return re_eig.left * sv.right.adjoint();
}

namespace {

// Shared Thompson construction for equal-shape inputs A, B in M_{m,n}:
// the support polar of A+B gives |A+B| = Re(W*A) + Re(W*B); each real part is
// dominated inside its own orbit by Re(W*A) <= U |W*A| U* <= U |A| U*.
OrbitCertificate thompson_core(const CMat& a, const CMat& b, const Tolerances& tol) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("dimension error: Thompson inequality needs equal shapes");
    require_finite(a, "thompson");
    require_finite(b, "thompson");
    PolarSupport ps = polar_support(a + b, tol);
    const CMat wa = ps.w.adjoint() * a;
    const CMat wb = ps.w.adjoint() * b;
    std::vector<OrbitTerm> terms(2);
    terms[0].witness = fan_hoffman_orbit(wa, tol);
    terms[0].operand = abs_modulus(a, tol);
    terms[1].witness = fan_hoffman_orbit(wb, tol);
    terms[1].operand = abs_modulus(b, tol);
    return finish(ps.abs, std::move(terms), Relation::Domination, tol);
}

}  // namespace

OrbitCertificate thompson_square(const CMat& a, const CMat& b, const Tolerances& tol) {
    if (!a.square() || !b.square())
        throw std::invalid_argument("dimension error: thompson_square needs square matrices");
    return thompson_core(a, b, tol);
}

OrbitCertificate thompson_rect(const CMat& a, const CMat& b, const Tolerances& tol) {
    return thompson_core(a, b, tol);
}

OrbitCertificate qsym_thompson(const CMat& x, const CMat& y, const Tolerances& tol) {
    require_same_square(x, y, "qsym_thompson");
    OrbitCertificate stacked =
        thompson_core(vstack(x, x.adjoint()), vstack(y, y.adjoint()), tol);
    // |(Z; Z*)| = sqrt(2) |Z|_qsym, so the sqrt(2) factors cancel termwise.
    stacked.target = qsym_modulus(x + y, tol);
    stacked.terms[0].operand = qsym_modulus(x, tol);
    stacked.terms[1].operand = qsym_modulus(y, tol);
    stacked.residual = certificate_residual(stacked, tol);
    return stacked;
}

OrbitCertificate sqrt_two_orbit(const CMat& h, const CMat& k, const Tolerances& tol) {
    require_same_square(h, k, "sqrt_two_orbit");
    const int n = h.rows();
    const CMat sh = psd_power(h, 0.5, tol);  // throws not-psd if h fails the slack
    const CMat sk = psd_power(k, 0.5, tol);
    const CMat z = CMat::zeros(n, n);
    OrbitCertificate cert = thompson_core(vstack(sh, z), vstack(z, sk), tol);
    cert.target = psd_power(hermitize(h + k), 0.5, tol);
    cert.terms[0].operand = sh;
    cert.terms[1].operand = sk;
    cert.residual = certificate_residual(cert, tol);
    return cert;
}

OrbitCertificate partitioned_pythagoras(const CMat& t, int block, const Tolerances& tol) {
    require_finite(t, "partitioned_pythagoras");
    if (!t.square()) throw std::invalid_argument("dimension error: partitioned_pythagoras needs a square matrix");
    if (block <= 0 || t.rows() % block != 0)
        throw std::invalid_argument("dimension error: size not divisible by block");
    const int m = t.rows() / block;
    const int total = t.rows();

    std::vector<OrbitTerm> terms;
    terms.reserve(static_cast<size_t>(m) * m);
    for (int i = 0; i < m; ++i) {
        // block row i as an n x (mn) matrix; |T|^2 = sum_i R_i* R_i
        CMat ri(block, total);
        for (int p = 0; p < block; ++p)
            for (int q = 0; q < total; ++q) ri(p, q) = t(i * block + p, q);
        const CMat gi = hermitize(ri.adjoint() * ri);
        OrbitCertificate inner = isometry_decompose_psd(gi, block, tol);
        for (OrbitTerm& tm : inner.terms) terms.push_back(std::move(tm));
    }
    return finish(abs_square(t), std::move(terms), Relation::Equality, tol);
}

namespace {

// 4x4 real Hadamard conjugator used by the Euler orbit refinement.
CMat hadamard4() {
    CMat h(4, 4);
    const double v[4][4] = {{1, 1, 1, 1}, {1, -1, 1, -1}, {1, 1, -1, -1}, {-1, 1, 1, -1}};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) h(i, j) = 0.5 * v[i][j];
    return h;
}

CMat fourier(int m) {
    CMat f(m, m);
    const double norm = 1.0 / std::sqrt(static_cast<double>(m));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            const double ang = 2.0 * M_PI * i * j / m;
            f(i, j) = norm * cx(std::cos(ang), std::sin(ang));
        }
    return f;
}

}  // namespace

OrbitCertificate euler_hadamard_orbit(const CMat& a, const CMat& b, const CMat& c,
                                      const Tolerances& tol) {
    require_same_square(a, b, "euler_hadamard_orbit");
    require_same_square(a, c, "euler_hadamard_orbit");
    const int n = a.rows();

    const CMat u = kron(hadamard4(), CMat::identity(n));
    const CMat zero = CMat::zeros(n, n);
    const CMat delta = direct_sum({a + b, b + c, c + a, zero});
    const CMat t = u * delta * u.adjoint();

    OrbitCertificate pyth = partitioned_pythagoras(t, n, tol);

    // block (i, j) of T carries +-(A+B+C)/2, +-A/2, +-B/2 or +-C/2; the class
    // table is the Klein four-group multiplication pattern of the proof.
    static const int kClass[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
    const CMat ops[4] = {abs_square(a + b + c), abs_square(a), abs_square(b), abs_square(c)};

    const CMat uadj = u.adjoint();
    std::vector<OrbitTerm> terms;
    terms.reserve(16);
    for (int cls = 0; cls < 4; ++cls) {
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                if (kClass[i][j] != cls) continue;
                OrbitTerm tm;
                tm.witness = uadj * pyth.terms[static_cast<size_t>(i * 4 + j)].witness;
                tm.operand = ops[cls];
                tm.weight = 0.25;
                terms.push_back(std::move(tm));
            }
    }
    CMat target = direct_sum({abs_square(a + b), abs_square(b + c), abs_square(c + a), zero});
    return finish(std::move(target), std::move(terms), Relation::Equality, tol);
}

namespace {

OrbitCertificate euler_fourier_common(const CMat& a, const CMat& b, const CMat& c, int m,
                                      const Tolerances& tol) {
    const int n = a.rows();
    const CMat w = kron(fourier(m), CMat::identity(n));

    std::vector<CMat> diag_blocks;
    CMat operand(n, n);
    if (m == 3) {
        diag_blocks = {abs_square(a + b), abs_square(b + c), abs_square(a + c)};
        operand = abs_square(a + b + c) + abs_square(a) + abs_square(b) + abs_square(c);
    } else {
        diag_blocks = {abs_square(a + b + c), abs_square(a), abs_square(b), abs_square(c)};
        operand = abs_square(a + b) + abs_square(b + c) + abs_square(a + c);
    }
    const CMat d = direct_sum(diag_blocks);
    const CMat h = hermitize(w * d * w.adjoint());

    OrbitCertificate inner = isometry_decompose_psd(h, n, tol);
    const CMat wadj = w.adjoint();
    std::vector<OrbitTerm> terms;
    terms.reserve(static_cast<size_t>(m));
    for (int k = 0; k < m; ++k) {
        OrbitTerm tm;
        tm.witness = wadj * inner.terms[static_cast<size_t>(k)].witness;
        tm.operand = operand;
        tm.weight = 1.0 / m;
        terms.push_back(std::move(tm));
    }
    return finish(d, std::move(terms), Relation::Equality, tol);
}

}  // namespace

OrbitCertificate euler_fourier3_orbit(const CMat& a, const CMat& b, const CMat& c,
                                      const Tolerances& tol) {
    require_same_square(a, b, "euler_fourier3_orbit");
    require_same_square(a, c, "euler_fourier3_orbit");
    return euler_fourier_common(a, b, c, 3, tol);
}

OrbitCertificate euler_fourier4_orbit(const CMat& a, const CMat& b, const CMat& c,
                                      const Tolerances& tol) {
    require_same_square(a, b, "euler_fourier4_orbit");
    require_same_square(a, c, "euler_fourier4_orbit");
    return euler_fourier_common(a, b, c, 4, tol);
}

OrbitCertificate euler_modulus_orbit(const CMat& a, const CMat& b, const CMat& c,
                                     const Tolerances& tol) {
    require_same_square(a, b, "euler_modulus_orbit");
    require_same_square(a, c, "euler_modulus_orbit");

    const CMat x1 = abs_square(a + b);
    const CMat x2 = abs_square(b + c);
    const CMat x3 = abs_square(c + a);

    // sqrt(x2 + x3) <= U2 sqrt(x2) U2* + V2 sqrt(x3) V2*
    OrbitCertificate tail = sqrt_two_orbit(x2, x3, tol);
    // sqrt(x1 + (x2+x3)) <= U1 sqrt(x1) U1* + V1 sqrt(x2+x3) V1*
    OrbitCertificate head = sqrt_two_orbit(x1, hermitize(x2 + x3), tol);

    const CMat& u1 = head.terms[0].witness;
    const CMat& v1 = head.terms[1].witness;
    std::vector<OrbitTerm> terms(3);
    terms[0].witness = u1;
    terms[0].operand = abs_modulus(a + b, tol);
    terms[1].witness = v1 * tail.terms[0].witness;
    terms[1].operand = abs_modulus(b + c, tol);
    terms[2].witness = v1 * tail.terms[1].witness;
    terms[2].operand = abs_modulus(c + a, tol);

    const CMat euler_sum =
        hermitize(abs_square(a + b + c) + abs_square(a) + abs_square(b) + abs_square(c));
    return finish(psd_power(euler_sum, 0.5, tol), std::move(terms), Relation::Domination, tol);
}

CertificateCheck verify_certificate(const OrbitCertificate& cert, const Tolerances& tol) {
    CertificateCheck chk;
    chk.scale = certificate_scale(cert);
    chk.min_operand_eig = std::numeric_limits<double>::infinity();

    for (size_t i = 0; i < cert.terms.size(); ++i) {
        const OrbitTerm& t = cert.terms[i];
        const std::string tag = "term " + std::to_string(i);
        if (!(t.weight > 0.0)) chk.failures.push_back(tag + ": nonpositive weight");
        if (t.witness.rows() < t.witness.cols())
            chk.failures.push_back(tag + ": witness has fewer rows than columns");
        const double defect =
            max_abs(t.witness.adjoint() * t.witness - CMat::identity(t.witness.cols()));
        chk.max_isometry_defect = std::max(chk.max_isometry_defect, defect);
        if (defect > tol.isometry_defect)
            chk.failures.push_back(tag + ": isometry defect " + std::to_string(defect));

        const double op_scale = std::max(1.0, max_abs(t.operand));
        if (herm_defect(t.operand) > tol.recon * op_scale) {
            chk.failures.push_back(tag + ": operand not Hermitian");
        } else {
            SpectralData eg = herm_eig(hermitize(t.operand), tol);
            const double lmin = eg.values.empty() ? 0.0 : eg.values.back();
            chk.min_operand_eig = std::min(chk.min_operand_eig, lmin);
            if (lmin < -tol.psd_slack * op_scale)
                chk.failures.push_back(tag + ": operand not psd");
        }
    }
    if (cert.terms.empty()) chk.min_operand_eig = 0.0;

    chk.residual = certificate_residual(cert, tol);
    const double limit =
        (cert.relation == Relation::Equality ? tol.recon : tol.psd_slack) * chk.scale;
    if (chk.residual > limit)
        chk.failures.push_back("residual " + std::to_string(chk.residual) + " exceeds " +
                               std::to_string(limit));
    chk.pass = chk.failures.empty();
    return chk;
}

}  // namespace moduli::orbit
