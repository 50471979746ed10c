#pragma once

#include <complex>
#include <initializer_list>
#include <stdexcept>
#include <vector>

namespace moduli {

using cx = std::complex<double>;

/// Dense complex matrix, row-major storage. The universal carrier for every
/// operator in this toolkit; sizes stay small (a few hundred at most), so all
/// algorithms are straightforward dense loops.
class CMat {
public:
    CMat() = default;

    CMat(int rows, int cols) : rows_(rows), cols_(cols) {
        if (rows < 0 || cols < 0)
            throw std::invalid_argument("dimension error: negative matrix size");
        a_.assign(static_cast<size_t>(rows) * cols, cx(0.0, 0.0));
    }

    /// Row-major construction from a nested initializer list (tests, fixed matrices).
    CMat(std::initializer_list<std::initializer_list<cx>> init) {
        rows_ = static_cast<int>(init.size());
        cols_ = rows_ > 0 ? static_cast<int>(init.begin()->size()) : 0;
        a_.reserve(static_cast<size_t>(rows_) * cols_);
        for (const auto& row : init) {
            if (static_cast<int>(row.size()) != cols_)
                throw std::invalid_argument("dimension error: ragged initializer");
            for (const cx& v : row) a_.push_back(v);
        }
    }

    static CMat zeros(int rows, int cols) { return CMat(rows, cols); }

    static CMat identity(int n) {
        CMat I(n, n);
        for (int i = 0; i < n; ++i) I(i, i) = 1.0;
        return I;
    }

    static CMat diag(const std::vector<double>& d) {
        CMat D(static_cast<int>(d.size()), static_cast<int>(d.size()));
        for (int i = 0; i < D.rows_; ++i) D(i, i) = d[static_cast<size_t>(i)];
        return D;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }
    bool square() const { return rows_ == cols_; }

    cx& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
    const cx& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

    const std::vector<cx>& data() const { return a_; }
    std::vector<cx>& data() { return a_; }

    CMat adjoint() const {
        CMat r(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
        return r;
    }

    CMat transpose() const {
        CMat r(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
        return r;
    }

    CMat conjugate() const {
        CMat r = *this;
        for (cx& v : r.a_) v = std::conj(v);
        return r;
    }

    CMat& operator+=(const CMat& o);
    CMat& operator-=(const CMat& o);
    CMat& operator*=(cx s);

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<cx> a_;
};

CMat operator+(const CMat& x, const CMat& y);
CMat operator-(const CMat& x, const CMat& y);
CMat operator-(const CMat& x);
CMat operator*(const CMat& x, const CMat& y);
CMat operator*(cx s, const CMat& x);
CMat operator*(double s, const CMat& x);
CMat operator*(const CMat& x, cx s);
CMat operator*(const CMat& x, double s);

/// Largest entry modulus; the cheap scale used in every tolerance test.
double max_abs(const CMat& x);
/// Frobenius norm.
double frob_norm(const CMat& x);
std::complex<double> trace(const CMat& x);
double trace_real(const CMat& x);
/// max |(X - X*)_{ij}|; zero for exactly Hermitian input.
double herm_defect(const CMat& x);
/// (X + X*)/2.
CMat hermitize(const CMat& x);
/// True if every entry is finite (no NaN/Inf).
bool all_finite(const CMat& x);
/// Throws if the matrix has non-finite entries.
void require_finite(const CMat& x, const char* where);

CMat vstack(const CMat& top, const CMat& bottom);
CMat hstack(const CMat& left, const CMat& right);
CMat block_compose(const std::vector<std::vector<CMat>>& blocks);
/// n-by-n block at block position (i, j), zero-based.
CMat block_extract(const CMat& x, int i, int j, int n);
CMat direct_sum(const std::vector<CMat>& blocks);
CMat kron(const CMat& a, const CMat& b);
/// Columns [c0, c1) as a rows x (c1-c0) matrix.
CMat col_slice(const CMat& x, int c0, int c1);

}  // namespace moduli
