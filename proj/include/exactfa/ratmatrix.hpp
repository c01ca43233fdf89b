#ifndef EXACTFA_RATMATRIX_HPP
#define EXACTFA_RATMATRIX_HPP

#include <vector>

#include "exactfa/rational.hpp"

namespace exactfa {

// Dense matrix of exact rationals; just enough linear algebra for the
// covariance-side bookkeeping.
class RationalMatrix {
public:
    RationalMatrix() : rows_(0), cols_(0) {}
    RationalMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(rows * cols, Rational(0)) {}

    static RationalMatrix identity(int n) {
        RationalMatrix m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    Rational& at(int i, int j) { return data_[i * cols_ + j]; }
    const Rational& at(int i, int j) const { return data_[i * cols_ + j]; }

    bool is_symmetric() const;
    RationalMatrix transpose() const;
    RationalMatrix operator*(const RationalMatrix& o) const;
    RationalMatrix operator+(const RationalMatrix& o) const;
    RationalMatrix operator*(const Rational& s) const;
    bool operator==(const RationalMatrix& o) const = default;

    Rational determinant() const;

    // Determinants of the k x k top-left blocks, k = 1..n; all positive iff
    // the (symmetric) matrix is positive definite.
    std::vector<Rational> leading_principal_minors() const;

    std::vector<double> to_doubles() const;

private:
    int rows_, cols_;
    std::vector<Rational> data_;
};

// Exact inverse by Gaussian elimination. Throws SingularCovariance with a
// ridge recommendation when det = 0.
RationalMatrix rational_matrix_inverse(const RationalMatrix& S);

} // namespace exactfa

#endif
