#ifndef RMTSHRINK_LINALG_HPP
#define RMTSHRINK_LINALG_HPP

#include <rmtshrink/errors.hpp>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>
#include <string>

namespace rmtshrink {

using Index = Eigen::Index;

/// Dense row-major matrix carrying signals, noise, observations and reconstructions.
template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename Scalar>
using DenseVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Matrix = DenseMatrix<double>;
using Vector = DenseVector<double>;

/// Thin singular value decomposition Y = sum_j values(j) * left.col(j) * right.col(j)'.
///
/// `values` is non-increasing and non-negative. Within each singular triple the
/// left vector's entry of largest magnitude (lowest index on ties) is non-negative.
template <typename Scalar>
struct SvdFactors {
    using Basis = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

    Basis left;                 // m x k
    DenseVector<Scalar> values; // k
    Basis right;                // n x k

    Index rows() const { return left.rows(); }
    Index cols() const { return right.rows(); }
    Index size() const { return values.size(); }
};

using Svd = SvdFactors<double>;

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& b) {
    return b.allFinite();
}

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& b, const char* what) {
    if (!b.allFinite()) {
        throw InvalidArgument(std::string(what) + ": matrix contains non-finite entries");
    }
}

namespace detail {

// Flip u_j and v_j together so the largest-magnitude entry of u_j is non-negative.
template <typename Scalar>
void canonicalize_signs(SvdFactors<Scalar>& f) {
    for (Index j = 0; j < f.size(); ++j) {
        Index pivot = 0;
        Scalar best = Scalar(-1);
        for (Index i = 0; i < f.left.rows(); ++i) {
            const Scalar mag = std::abs(f.left(i, j));
            if (mag > best) {
                best = mag;
                pivot = i;
            }
        }
        if (f.left(pivot, j) < Scalar(0)) {
            f.left.col(j) *= Scalar(-1);
            f.right.col(j) *= Scalar(-1);
        }
    }
}

} // namespace detail

/// Thin SVD with k = min(m, n) triples. Throws NumericalFailure when the
/// decomposition does not converge or returns non-finite factors.
template <typename Derived>
SvdFactors<typename Derived::Scalar> svd(const Eigen::MatrixBase<Derived>& y) {
    using Scalar = typename Derived::Scalar;
    if (y.rows() == 0 || y.cols() == 0) {
        throw InvalidArgument("svd: matrix must have at least one row and one column");
    }
    require_finite(y, "svd");

    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> dense = y;
    Eigen::BDCSVD<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>> solver(
        dense, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (solver.info() != Eigen::Success) {
        throw NumericalFailure("svd: decomposition did not converge");
    }

    SvdFactors<Scalar> f{solver.matrixU(), solver.singularValues(), solver.matrixV()};
    if (!f.left.allFinite() || !f.values.allFinite() || !f.right.allFinite()) {
        throw NumericalFailure("svd: decomposition produced non-finite factors");
    }
    detail::canonicalize_signs(f);
    return f;
}

template <typename Derived>
typename Derived::Scalar frobenius_norm_sq(const Eigen::MatrixBase<Derived>& b) {
    return b.squaredNorm();
}

/// <A, B> = tr(A'B).
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar matrix_inner_product(const Eigen::MatrixBase<DerivedA>& a,
                                               const Eigen::MatrixBase<DerivedB>& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw ShapeMismatch("matrix_inner_product: operands differ in shape");
    }
    return a.cwiseProduct(b).sum();
}

/// sum_j coefficients(j) * left.col(j) * right.col(j)'. Zero coefficients are skipped.
template <typename DerivedC, typename DerivedU, typename DerivedV>
DenseMatrix<typename DerivedC::Scalar> compose(const Eigen::MatrixBase<DerivedC>& coefficients,
                                               const Eigen::MatrixBase<DerivedU>& left,
                                               const Eigen::MatrixBase<DerivedV>& right) {
    using Scalar = typename DerivedC::Scalar;
    const Index k = coefficients.size();
    if (left.cols() != k || right.cols() != k) {
        throw ShapeMismatch("compose: coefficient count does not match the number of singular vectors");
    }
    DenseMatrix<Scalar> out = DenseMatrix<Scalar>::Zero(left.rows(), right.rows());
    Index active = 0;
    for (Index j = 0; j < k; ++j) {
        if (coefficients(j) != Scalar(0)) ++active;
    }
    if (active == 0) return out;

    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> lhs(left.rows(), active);
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> rhs(right.rows(), active);
    for (Index j = 0, t = 0; j < k; ++j) {
        if (coefficients(j) == Scalar(0)) continue;
        lhs.col(t) = left.col(j) * coefficients(j);
        rhs.col(t) = right.col(j);
        ++t;
    }
    out.noalias() = lhs * rhs.transpose();
    return out;
}

template <typename Scalar, typename DerivedC>
DenseMatrix<Scalar> compose(const Eigen::MatrixBase<DerivedC>& coefficients, const SvdFactors<Scalar>& f) {
    return compose(coefficients, f.left, f.right);
}

} // namespace rmtshrink

#endif // RMTSHRINK_LINALG_HPP
