#include "exactfa/ratmatrix.hpp"

#include "exactfa/errors.hpp"

namespace exactfa {

bool RationalMatrix::is_symmetric() const {
    if (rows_ != cols_) return false;
    for (int i = 0; i < rows_; ++i)
        for (int j = i + 1; j < cols_; ++j)
            if (at(i, j) != at(j, i)) return false;
    return true;
}

RationalMatrix RationalMatrix::transpose() const {
    RationalMatrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
    return t;
}

RationalMatrix RationalMatrix::operator*(const RationalMatrix& o) const {
    if (cols_ != o.rows_) throw StructuralError("matrix product shape mismatch");
    RationalMatrix r(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            if (at(i, k) == 0) continue;
            for (int j = 0; j < o.cols_; ++j) r.at(i, j) += at(i, k) * o.at(k, j);
        }
    return r;
}

RationalMatrix RationalMatrix::operator+(const RationalMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw StructuralError("matrix sum shape mismatch");
    RationalMatrix r = *this;
    for (int i = 0; i < rows_ * cols_; ++i) r.data_[i] += o.data_[i];
    return r;
}

RationalMatrix RationalMatrix::operator*(const Rational& s) const {
    RationalMatrix r = *this;
    for (auto& x : r.data_) x *= s;
    return r;
}

Rational RationalMatrix::determinant() const {
    if (rows_ != cols_) throw StructuralError("determinant of non-square matrix");
    RationalMatrix a = *this;
    int n = rows_;
    Rational det = 1;
    for (int col = 0; col < n; ++col) {
        int pivot = -1;
        for (int r = col; r < n; ++r)
            if (a.at(r, col) != 0) {
                pivot = r;
                break;
            }
        if (pivot < 0) return 0;
        if (pivot != col) {
            for (int j = 0; j < n; ++j) std::swap(a.at(pivot, j), a.at(col, j));
            det = -det;
        }
        det *= a.at(col, col);
        Rational inv = 1 / a.at(col, col);
        for (int r = col + 1; r < n; ++r) {
            if (a.at(r, col) == 0) continue;
            Rational f = a.at(r, col) * inv;
            for (int j = col; j < n; ++j) a.at(r, j) -= f * a.at(col, j);
        }
    }
    return det;
}

std::vector<Rational> RationalMatrix::leading_principal_minors() const {
    if (rows_ != cols_) throw StructuralError("principal minors of non-square matrix");
    std::vector<Rational> minors;
    for (int k = 1; k <= rows_; ++k) {
        RationalMatrix sub(k, k);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) sub.at(i, j) = at(i, j);
        minors.push_back(sub.determinant());
    }
    return minors;
}

std::vector<double> RationalMatrix::to_doubles() const {
    std::vector<double> v;
    v.reserve(data_.size());
    for (const auto& x : data_) v.push_back(rat_double(x));
    return v;
}

RationalMatrix rational_matrix_inverse(const RationalMatrix& S) {
    if (S.rows() != S.cols()) throw StructuralError("inverse of non-square matrix");
    int n = S.rows();
    RationalMatrix a = S;
    RationalMatrix inv = RationalMatrix::identity(n);
    for (int col = 0; col < n; ++col) {
        int pivot = -1;
        for (int r = col; r < n; ++r)
            if (a.at(r, col) != 0) {
                pivot = r;
                break;
            }
        if (pivot < 0)
            throw SingularCovariance(
                "matrix is singular; consider a ridge S + lambda*I with lambda > 0");
        if (pivot != col)
            for (int j = 0; j < n; ++j) {
                std::swap(a.at(pivot, j), a.at(col, j));
                std::swap(inv.at(pivot, j), inv.at(col, j));
            }
        Rational piv_inv = 1 / a.at(col, col);
        for (int j = 0; j < n; ++j) {
            a.at(col, j) *= piv_inv;
            inv.at(col, j) *= piv_inv;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col || a.at(r, col) == 0) continue;
            Rational f = a.at(r, col);
            for (int j = 0; j < n; ++j) {
                a.at(r, j) -= f * a.at(col, j);
                inv.at(r, j) -= f * inv.at(col, j);
            }
        }
    }
    return inv;
}

} // namespace exactfa
