#include "moduli/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace moduli {

namespace {

constexpr double kJacobiOffTol = 1e-14;  // off-diagonal mass vs ||H||_F
constexpr int kMaxSweeps = 100;

// Phase-normalize a column in place: the first entry of largest modulus
// becomes real positive. Keeps certificates byte-reproducible.
void normalize_column_phase(CMat& m, int col) {
    int best = -1;
    double best_abs = 0.0;
    for (int i = 0; i < m.rows(); ++i) {
        const double a = std::abs(m(i, col));
        if (a > best_abs) {  // strict: first index of the largest modulus wins
            best_abs = a;
            best = i;
        }
    }
    if (best < 0 || best_abs == 0.0) return;
    const cx phase = m(best, col) / best_abs;
    const cx corr = std::conj(phase);
    for (int i = 0; i < m.rows(); ++i) m(i, col) *= corr;
    m(best, col) = cx(std::abs(m(best, col)), 0.0);
}

double off_diag_frob(const CMat& a) {
    double s = 0.0;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

// Orthogonalize v against the first `count` columns of basis (two passes).
// Returns the norm of the remainder, which replaces v.
double orthogonalize_against(std::vector<cx>& v, const CMat& basis, int count) {
    const int m = basis.rows();
    for (int pass = 0; pass < 2; ++pass) {
        for (int c = 0; c < count; ++c) {
            cx dot(0.0, 0.0);
            for (int i = 0; i < m; ++i) dot += std::conj(basis(i, c)) * v[static_cast<size_t>(i)];
            for (int i = 0; i < m; ++i) v[static_cast<size_t>(i)] -= dot * basis(i, c);
        }
    }
    double n2 = 0.0;
    for (const cx& t : v) n2 += std::norm(t);
    return std::sqrt(n2);
}

// Fill columns [start, start+want) of `basis` with orthonormal vectors that are
// orthogonal to the existing columns and (optionally) to range(extra).
// Candidates are the standard basis vectors, picked by largest remainder norm
// (pivoting), ties by index. Deterministic.
void extend_orthonormal(CMat& basis, int start, int want, const CMat* extra) {
    const int m = basis.rows();
    int filled = 0;
    std::vector<bool> used(static_cast<size_t>(m), false);
    while (filled < want) {
        int best_k = -1;
        double best_norm = -1.0;
        std::vector<cx> best_v;
        for (int k = 0; k < m; ++k) {
            if (used[static_cast<size_t>(k)]) continue;
            std::vector<cx> v(static_cast<size_t>(m), cx(0.0, 0.0));
            v[static_cast<size_t>(k)] = 1.0;
            if (extra != nullptr) {
                // project out range(extra): v -= extra (extra* v), twice
                for (int pass = 0; pass < 2; ++pass) {
                    std::vector<cx> w(static_cast<size_t>(extra->cols()), cx(0.0, 0.0));
                    for (int c = 0; c < extra->cols(); ++c)
                        for (int i = 0; i < m; ++i)
                            w[static_cast<size_t>(c)] += std::conj((*extra)(i, c)) * v[static_cast<size_t>(i)];
                    for (int i = 0; i < m; ++i)
                        for (int c = 0; c < extra->cols(); ++c)
                            v[static_cast<size_t>(i)] -= (*extra)(i, c) * w[static_cast<size_t>(c)];
                }
            }
            const double n = orthogonalize_against(v, basis, start + filled);
            if (n > best_norm + 1e-15) {
                best_norm = n;
                best_k = k;
                best_v = v;
            }
        }
        if (best_k < 0 || best_norm <= 1e-8)
            throw std::runtime_error("orthonormal extension failed: no candidate left");
        used[static_cast<size_t>(best_k)] = true;
        // re-orthogonalize once more if the pivot lost most of its mass
        if (best_norm < 0.5) best_norm = orthogonalize_against(best_v, basis, start + filled);
        for (int i = 0; i < m; ++i) basis(i, start + filled) = best_v[static_cast<size_t>(i)] / best_norm;
        normalize_column_phase(basis, start + filled);
        ++filled;
    }
}

}  // namespace

void Tolerances::validate() const {
    const double f[] = {psd_slack, isometry_defect, recon, rank_rel};
    for (double v : f)
        if (!(v >= 0.0) || !std::isfinite(v))
            throw std::invalid_argument("parameter error: tolerances must be finite and nonnegative");
}

double mu(const std::vector<double>& values, int m) {
    if (m < 1) throw std::invalid_argument("parameter error: singular value index is 1-based");
    if (m > static_cast<int>(values.size())) return 0.0;
    return values[static_cast<size_t>(m - 1)];
}

double mu(const SpectralData& s, int m) { return mu(s.values, m); }

SpectralData herm_eig(const CMat& h, const Tolerances& tol) {
    tol.validate();
    if (!h.square()) throw std::invalid_argument("dimension error: herm_eig needs a square matrix");
    require_finite(h, "herm_eig");
    const int n = h.rows();
    const double scale = std::max(1.0, max_abs(h));
    if (herm_defect(h) > tol.recon * scale)
        throw std::invalid_argument("symmetry error: input is not Hermitian within tolerance");

    CMat a = hermitize(h);
    CMat v = CMat::identity(n);
    const double hf = frob_norm(a);

    if (n > 1 && hf > 0.0) {
        int sweep = 0;
        while (off_diag_frob(a) > kJacobiOffTol * hf) {
            if (++sweep > kMaxSweeps)
                throw std::runtime_error("herm_eig: Jacobi iteration did not converge");
            for (int p = 0; p < n - 1; ++p) {
                for (int q = p + 1; q < n; ++q) {
                    const cx apq = a(p, q);
                    const double g = std::abs(apq);
                    if (g == 0.0) continue;
                    const double alpha = a(p, p).real();
                    const double beta = a(q, q).real();
                    // Zero a(p,q) with the unitary [[c, s], [-conj(s), c]] on
                    // coordinates (p, q): with s = t*c*phase, phase = apq/|apq|,
                    // t is the smaller root of t^2 - 2*theta*t - 1 = 0,
                    // theta = (alpha - beta) / (2|apq|).
                    const double theta = (alpha - beta) / (2.0 * g);
                    double t;
                    if (theta > 0.0)
                        t = -1.0 / (theta + std::sqrt(theta * theta + 1.0));
                    else
                        t = 1.0 / (-theta + std::sqrt(theta * theta + 1.0));
                    const double c = 1.0 / std::sqrt(1.0 + t * t);
                    const cx s = (t * c) * (apq / g);
                    const cx sconj = std::conj(s);

                    // rows/cols k != p,q
                    for (int k = 0; k < n; ++k) {
                        if (k == p || k == q) continue;
                        const cx akp = a(k, p);
                        const cx akq = a(k, q);
                        a(k, p) = c * akp - sconj * akq;
                        a(k, q) = s * akp + c * akq;
                        a(p, k) = std::conj(a(k, p));
                        a(q, k) = std::conj(a(k, q));
                    }
                    // 2x2 block
                    const double app_new = c * c * alpha - 2.0 * (sconj * apq * c).real() + (t * c) * (t * c) * beta;
                    const double aqq_new = (t * c) * (t * c) * alpha + 2.0 * (sconj * apq * c).real() + c * c * beta;
                    a(p, p) = app_new;
                    a(q, q) = aqq_new;
                    a(p, q) = 0.0;
                    a(q, p) = 0.0;

                    // accumulate V <- V G
                    for (int k = 0; k < n; ++k) {
                        const cx vkp = v(k, p);
                        const cx vkq = v(k, q);
                        v(k, p) = c * vkp - sconj * vkq;
                        v(k, q) = s * vkp + c * vkq;
                    }
                }
            }
        }
    }

    std::vector<int> idx(static_cast<size_t>(n));
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](int i, int j) { return a(i, i).real() > a(j, j).real(); });

    SpectralData out;
    out.values.resize(static_cast<size_t>(n));
    out.left = CMat(n, n);
    for (int c = 0; c < n; ++c) {
        out.values[static_cast<size_t>(c)] = a(idx[static_cast<size_t>(c)], idx[static_cast<size_t>(c)]).real();
        for (int r = 0; r < n; ++r) out.left(r, c) = v(r, idx[static_cast<size_t>(c)]);
        normalize_column_phase(out.left, c);
    }
    return out;
}

SpectralData svd(const CMat& x, const Tolerances& tol) {
    tol.validate();
    require_finite(x, "svd");
    const int m = x.rows();
    const int n = x.cols();
    const int k = std::min(m, n);

    const CMat xa = x.adjoint();
    SpectralData eg = herm_eig(hermitize(xa * x), tol);

    // Re-estimate each singular value as |X r|: the Gram eigenvalues bottom
    // out at eps * lambda_1, so sqrt(lambda) would report sqrt(eps) * sigma_1
    // for directions the matrix actually annihilates. The matrix action is
    // backward-stable and collapses those to honest eps-level values.
    std::vector<std::vector<cx>> action(static_cast<size_t>(k));
    std::vector<double> est(static_cast<size_t>(k), 0.0);
    for (int c = 0; c < k; ++c) {
        std::vector<cx>& y = action[static_cast<size_t>(c)];
        y.assign(static_cast<size_t>(m), cx(0.0, 0.0));
        for (int i = 0; i < m; ++i) {
            cx acc(0.0, 0.0);
            for (int j = 0; j < n; ++j) acc += x(i, j) * eg.left(j, c);
            y[static_cast<size_t>(i)] = acc;
        }
        double n2 = 0.0;
        for (const cx& t : y) n2 += std::norm(t);
        est[static_cast<size_t>(c)] = std::sqrt(n2);
    }
    std::vector<int> idx(static_cast<size_t>(k));
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int i, int j) {
        return est[static_cast<size_t>(i)] > est[static_cast<size_t>(j)];
    });

    SpectralData out;
    out.values.resize(static_cast<size_t>(k));
    out.right = CMat(n, k);
    for (int c = 0; c < k; ++c) {
        const int src = idx[static_cast<size_t>(c)];
        out.values[static_cast<size_t>(c)] = est[static_cast<size_t>(src)];
        for (int r = 0; r < n; ++r) out.right(r, c) = eg.left(r, src);
    }

    const double s1 = out.values.empty() ? 0.0 : out.values[0];
    const double cutoff = tol.rank_rel * s1 * std::max(m, n);

    out.left = CMat(m, k);
    int solid = 0;  // columns recovered as X r / sigma, kept contiguous in front
    for (int c = 0; c < k; ++c) {
        const double s = out.values[static_cast<size_t>(c)];
        if (s <= cutoff) break;  // values are sorted, the rest is null space
        std::vector<cx> col = action[static_cast<size_t>(idx[static_cast<size_t>(c)])];
        for (cx& t : col) t /= s;
        // polish: keep the computed left basis orthonormal even when sigma is small
        const double nn = solid > 0 ? orthogonalize_against(col, out.left, solid) : 1.0;
        if (nn <= 1e-8) break;  // direction already represented; the rest is null space
        if (solid > 0)
            for (cx& t : col) t /= nn;
        for (int i = 0; i < m; ++i) out.left(i, c) = col[static_cast<size_t>(i)];
        ++solid;
    }
    if (solid < k) extend_orthonormal(out.left, solid, k - solid, nullptr);
    return out;
}

int numeric_rank(const std::vector<double>& values, int rows, int cols, const Tolerances& tol) {
    if (values.empty()) return 0;
    const double cutoff = tol.rank_rel * values[0] * std::max(rows, cols);
    int r = 0;
    for (double v : values)
        if (v > cutoff) ++r;
    return r;
}

CMat psd_power(const CMat& h, double r, const Tolerances& tol) {
    if (!(r > 0.0) || !std::isfinite(r))
        throw std::invalid_argument("parameter error: psd_power exponent must be positive");
    SpectralData eg = herm_eig(h, tol);
    const double scale = std::max(1.0, max_abs(h));
    std::vector<double> powered(eg.values.size());
    for (size_t i = 0; i < eg.values.size(); ++i) {
        double lam = eg.values[i];
        if (lam < -tol.psd_slack * scale)
            throw std::invalid_argument("not-psd error: eigenvalue below tolerance in psd_power");
        if (lam < 0.0) lam = 0.0;
        powered[i] = std::pow(lam, r);
    }
    const int n = h.rows();
    CMat out(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            cx acc(0.0, 0.0);
            for (int c = 0; c < n; ++c)
                acc += eg.left(i, c) * powered[static_cast<size_t>(c)] * std::conj(eg.left(j, c));
            out(i, j) = acc;
        }
    return hermitize(out);
}

CMat abs_modulus(const CMat& x, const Tolerances& tol) {
    SpectralData sv = svd(x, tol);
    const int n = x.cols();
    const int k = static_cast<int>(sv.values.size());
    CMat out(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            cx acc(0.0, 0.0);
            for (int c = 0; c < k; ++c)
                acc += sv.right(i, c) * sv.values[static_cast<size_t>(c)] * std::conj(sv.right(j, c));
            out(i, j) = acc;
        }
    return hermitize(out);
}

CMat abs_square(const CMat& x) { return hermitize(x.adjoint() * x); }

double schatten_pow(const CMat& x, double p, const Tolerances& tol) {
    if (!(p > 0.0))
        throw std::invalid_argument("parameter error: Schatten exponent must be positive");
    SpectralData sv = svd(x, tol);
    double s = 0.0;
    for (double v : sv.values) s += std::pow(v, p);
    return s;
}

double schatten_norm(const CMat& x, double p, const Tolerances& tol) {
    if (std::isinf(p) && p > 0.0) return operator_norm(x, tol);
    if (!(p > 0.0) || std::isnan(p))
        throw std::invalid_argument("parameter error: Schatten exponent must be positive");
    SpectralData sv = svd(x, tol);
    const double top = sv.values.empty() ? 0.0 : sv.values[0];
    if (top == 0.0) return 0.0;
    double s = 0.0;
    for (double v : sv.values) s += std::pow(v / top, p);
    return top * std::pow(s, 1.0 / p);
}

double operator_norm(const CMat& x, const Tolerances& tol) {
    SpectralData sv = svd(x, tol);
    return sv.values.empty() ? 0.0 : sv.values[0];
}

PsdVerdict psd_leq(const CMat& a, const CMat& b, const Tolerances& tol) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("dimension error: psd_leq size mismatch");
    const double scale = std::max({1.0, max_abs(a), max_abs(b)});
    if (herm_defect(a) > tol.recon * scale || herm_defect(b) > tol.recon * scale)
        throw std::invalid_argument("symmetry error: psd_leq needs Hermitian inputs");
    SpectralData eg = herm_eig(hermitize(b - a), tol);
    PsdVerdict v;
    v.margin = eg.values.empty() ? 0.0 : eg.values.back();
    v.holds = v.margin >= -tol.psd_slack * scale;
    return v;
}

CMat sym_modulus(const CMat& z, const Tolerances& tol) {
    if (!z.square()) throw std::invalid_argument("dimension error: sym_modulus needs a square matrix");
    return 0.5 * (abs_modulus(z, tol) + abs_modulus(z.adjoint(), tol));
}

CMat qsym_modulus(const CMat& z, const Tolerances& tol) {
    if (!z.square()) throw std::invalid_argument("dimension error: qsym_modulus needs a square matrix");
    const CMat mean = 0.5 * (abs_square(z) + abs_square(z.adjoint()));
    return psd_power(mean, 0.5, tol);
}

CMat re_part(const CMat& z) { return hermitize(z); }

CMat im_part(const CMat& z) {
    if (!z.square()) throw std::invalid_argument("dimension error: im_part needs a square matrix");
    CMat r(z.rows(), z.cols());
    const cx factor(0.0, -0.5);
    for (int i = 0; i < z.rows(); ++i)
        for (int j = 0; j < z.cols(); ++j)
            r(i, j) = factor * (z(i, j) - std::conj(z(j, i)));
    return r;
}

}  // namespace moduli
