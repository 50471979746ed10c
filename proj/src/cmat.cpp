#include "moduli/cmat.hpp"

#include <cmath>
#include <string>

namespace moduli {

namespace {

void require_same_shape(const CMat& x, const CMat& y, const char* op) {
    if (x.rows() != y.rows() || x.cols() != y.cols())
        throw std::invalid_argument(std::string("dimension error: shape mismatch in ") + op);
}

}  // namespace

CMat& CMat::operator+=(const CMat& o) {
    require_same_shape(*this, o, "operator+=");
    for (size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
    return *this;
}

CMat& CMat::operator-=(const CMat& o) {
    require_same_shape(*this, o, "operator-=");
    for (size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
    return *this;
}

CMat& CMat::operator*=(cx s) {
    for (cx& v : a_) v *= s;
    return *this;
}

CMat operator+(const CMat& x, const CMat& y) {
    CMat r = x;
    r += y;
    return r;
}

CMat operator-(const CMat& x, const CMat& y) {
    CMat r = x;
    r -= y;
    return r;
}

CMat operator-(const CMat& x) {
    CMat r = x;
    r *= cx(-1.0, 0.0);
    return r;
}

CMat operator*(const CMat& x, const CMat& y) {
    if (x.cols() != y.rows())
        throw std::invalid_argument("dimension error: inner dimensions in matrix product");
    CMat r(x.rows(), y.cols());
    for (int i = 0; i < x.rows(); ++i) {
        for (int k = 0; k < x.cols(); ++k) {
            const cx xik = x(i, k);
            if (xik == cx(0.0, 0.0)) continue;
            for (int j = 0; j < y.cols(); ++j) r(i, j) += xik * y(k, j);
        }
    }
    return r;
}

CMat operator*(cx s, const CMat& x) {
    CMat r = x;
    r *= s;
    return r;
}

CMat operator*(double s, const CMat& x) { return cx(s, 0.0) * x; }
CMat operator*(const CMat& x, cx s) { return s * x; }
CMat operator*(const CMat& x, double s) { return cx(s, 0.0) * x; }

double max_abs(const CMat& x) {
    double m = 0.0;
    for (const cx& v : x.data()) m = std::max(m, std::abs(v));
    return m;
}

double frob_norm(const CMat& x) {
    double s = 0.0;
    for (const cx& v : x.data()) s += std::norm(v);
    return std::sqrt(s);
}

std::complex<double> trace(const CMat& x) {
    if (!x.square()) throw std::invalid_argument("dimension error: trace of non-square matrix");
    cx t(0.0, 0.0);
    for (int i = 0; i < x.rows(); ++i) t += x(i, i);
    return t;
}

double trace_real(const CMat& x) { return trace(x).real(); }

double herm_defect(const CMat& x) {
    if (!x.square()) throw std::invalid_argument("dimension error: Hermitian defect of non-square matrix");
    double m = 0.0;
    for (int i = 0; i < x.rows(); ++i)
        for (int j = 0; j < x.cols(); ++j)
            m = std::max(m, std::abs(x(i, j) - std::conj(x(j, i))));
    return m;
}

CMat hermitize(const CMat& x) {
    if (!x.square()) throw std::invalid_argument("dimension error: hermitize of non-square matrix");
    CMat r(x.rows(), x.cols());
    for (int i = 0; i < x.rows(); ++i)
        for (int j = 0; j < x.cols(); ++j)
            r(i, j) = 0.5 * (x(i, j) + std::conj(x(j, i)));
    return r;
}

bool all_finite(const CMat& x) {
    for (const cx& v : x.data())
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

void require_finite(const CMat& x, const char* where) {
    if (!all_finite(x))
        throw std::invalid_argument(std::string("non-finite entries in ") + where);
}

CMat vstack(const CMat& top, const CMat& bottom) {
    if (top.cols() != bottom.cols())
        throw std::invalid_argument("dimension error: vstack column mismatch");
    CMat r(top.rows() + bottom.rows(), top.cols());
    for (int i = 0; i < top.rows(); ++i)
        for (int j = 0; j < top.cols(); ++j) r(i, j) = top(i, j);
    for (int i = 0; i < bottom.rows(); ++i)
        for (int j = 0; j < bottom.cols(); ++j) r(top.rows() + i, j) = bottom(i, j);
    return r;
}

CMat hstack(const CMat& left, const CMat& right) {
    if (left.rows() != right.rows())
        throw std::invalid_argument("dimension error: hstack row mismatch");
    CMat r(left.rows(), left.cols() + right.cols());
    for (int i = 0; i < left.rows(); ++i) {
        for (int j = 0; j < left.cols(); ++j) r(i, j) = left(i, j);
        for (int j = 0; j < right.cols(); ++j) r(i, left.cols() + j) = right(i, j);
    }
    return r;
}

CMat block_compose(const std::vector<std::vector<CMat>>& blocks) {
    if (blocks.empty() || blocks.front().empty())
        throw std::invalid_argument("dimension error: empty block grid");
    const size_t bc = blocks.front().size();
    std::vector<int> row_h(blocks.size(), 0), col_w(bc, 0);
    for (size_t i = 0; i < blocks.size(); ++i) {
        if (blocks[i].size() != bc)
            throw std::invalid_argument("dimension error: ragged block grid");
        for (size_t j = 0; j < bc; ++j) {
            const CMat& b = blocks[i][j];
            if (row_h[i] == 0) row_h[i] = b.rows();
            if (col_w[j] == 0) col_w[j] = b.cols();
            if (b.rows() != row_h[i] || b.cols() != col_w[j])
                throw std::invalid_argument("dimension error: non-conformal block grid");
        }
    }
    int total_r = 0, total_c = 0;
    for (int h : row_h) total_r += h;
    for (int w : col_w) total_c += w;
    CMat r(total_r, total_c);
    int roff = 0;
    for (size_t i = 0; i < blocks.size(); ++i) {
        int coff = 0;
        for (size_t j = 0; j < bc; ++j) {
            const CMat& b = blocks[i][j];
            for (int p = 0; p < b.rows(); ++p)
                for (int q = 0; q < b.cols(); ++q) r(roff + p, coff + q) = b(p, q);
            coff += col_w[j];
        }
        roff += row_h[i];
    }
    return r;
}

CMat block_extract(const CMat& x, int i, int j, int n) {
    if (n <= 0 || i < 0 || j < 0 || (i + 1) * n > x.rows() || (j + 1) * n > x.cols())
        throw std::invalid_argument("dimension error: block index out of range");
    CMat r(n, n);
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) r(p, q) = x(i * n + p, j * n + q);
    return r;
}

CMat direct_sum(const std::vector<CMat>& blocks) {
    int total_r = 0, total_c = 0;
    for (const CMat& b : blocks) {
        total_r += b.rows();
        total_c += b.cols();
    }
    CMat r(total_r, total_c);
    int roff = 0, coff = 0;
    for (const CMat& b : blocks) {
        for (int i = 0; i < b.rows(); ++i)
            for (int j = 0; j < b.cols(); ++j) r(roff + i, coff + j) = b(i, j);
        roff += b.rows();
        coff += b.cols();
    }
    return r;
}

CMat kron(const CMat& a, const CMat& b) {
    CMat r(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) {
            const cx aij = a(i, j);
            if (aij == cx(0.0, 0.0)) continue;
            for (int p = 0; p < b.rows(); ++p)
                for (int q = 0; q < b.cols(); ++q)
                    r(i * b.rows() + p, j * b.cols() + q) = aij * b(p, q);
        }
    return r;
}

CMat col_slice(const CMat& x, int c0, int c1) {
    if (c0 < 0 || c1 < c0 || c1 > x.cols())
        throw std::invalid_argument("dimension error: column slice out of range");
    CMat r(x.rows(), c1 - c0);
    for (int i = 0; i < x.rows(); ++i)
        for (int j = c0; j < c1; ++j) r(i, j - c0) = x(i, j);
    return r;
}

}  // namespace moduli
