#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace ofbm {

/// Thrown when an input violates a mathematical precondition (non-square,
/// negative eigenvalue where positivity is required, x <= 0, ...).
class domain_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Thrown on incompatible matrix shapes.
class shape_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Thrown when parameter validation fails (CLI exit code 2).
class validation_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Thrown when a computation leaves the supported numeric range.
class numeric_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Dense row-major matrix of doubles. Sizes here are tiny (n <= 16), so
/// everything is by value and eagerly computed.
class RealMatrix {
public:
    RealMatrix() = default;

    RealMatrix(int rows, int cols)
        : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, 0.0) {
        if (rows < 0 || cols < 0) throw shape_error("RealMatrix: negative dimension");
    }

    RealMatrix(int rows, int cols, std::vector<double> entries)
        : rows_(rows), cols_(cols), a_(std::move(entries)) {
        if (a_.size() != static_cast<size_t>(rows) * cols)
            throw shape_error("RealMatrix: entry count does not match shape");
        check_finite();
    }

    RealMatrix(std::initializer_list<std::initializer_list<double>> init) {
        rows_ = static_cast<int>(init.size());
        cols_ = rows_ > 0 ? static_cast<int>(init.begin()->size()) : 0;
        a_.reserve(static_cast<size_t>(rows_) * cols_);
        for (const auto& row : init) {
            if (static_cast<int>(row.size()) != cols_)
                throw shape_error("RealMatrix: ragged initializer");
            a_.insert(a_.end(), row.begin(), row.end());
        }
        check_finite();
    }

    static RealMatrix identity(int n) {
        RealMatrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static RealMatrix zero(int rows, int cols) { return RealMatrix(rows, cols); }

    static RealMatrix diag(const std::vector<double>& d) {
        RealMatrix m(static_cast<int>(d.size()), static_cast<int>(d.size()));
        for (size_t i = 0; i < d.size(); ++i) m(static_cast<int>(i), static_cast<int>(i)) = d[i];
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    double& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
    double operator()(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

    const std::vector<double>& data() const { return a_; }
    std::vector<double>& data() { return a_; }

    RealMatrix transpose() const {
        RealMatrix t(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    /// Column j as an n x 1 matrix.
    RealMatrix col(int j) const {
        RealMatrix c(rows_, 1);
        for (int i = 0; i < rows_; ++i) c(i, 0) = (*this)(i, j);
        return c;
    }

    void set_col(int j, const RealMatrix& c) {
        for (int i = 0; i < rows_; ++i) (*this)(i, j) = c(i, 0);
    }

    double trace() const {
        double t = 0.0;
        for (int i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
        return t;
    }

    void check_finite() const {
        for (double v : a_)
            if (!std::isfinite(v)) throw numeric_error("RealMatrix: non-finite entry");
    }

    RealMatrix& operator+=(const RealMatrix& o) {
        require_same_shape(o);
        for (size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
        return *this;
    }
    RealMatrix& operator-=(const RealMatrix& o) {
        require_same_shape(o);
        for (size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
        return *this;
    }
    RealMatrix& operator*=(double s) {
        for (double& v : a_) v *= s;
        return *this;
    }

    void require_same_shape(const RealMatrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw shape_error("RealMatrix: shape mismatch " + shape_str() + " vs " + o.shape_str());
    }

    std::string shape_str() const {
        return std::to_string(rows_) + "x" + std::to_string(cols_);
    }

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> a_;
};

inline RealMatrix operator+(RealMatrix a, const RealMatrix& b) { return a += b; }
inline RealMatrix operator-(RealMatrix a, const RealMatrix& b) { return a -= b; }
inline RealMatrix operator*(RealMatrix a, double s) { return a *= s; }
inline RealMatrix operator*(double s, RealMatrix a) { return a *= s; }
inline RealMatrix operator-(RealMatrix a) { return a *= -1.0; }

inline RealMatrix operator*(const RealMatrix& a, const RealMatrix& b) {
    if (a.cols() != b.rows())
        throw shape_error("matmul: inner dimensions " + a.shape_str() + " * " + b.shape_str());
    RealMatrix c(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

inline double frobenius_norm(const RealMatrix& m) {
    double s = 0.0;
    for (double v : m.data()) s += v * v;
    return std::sqrt(s);
}

inline double frobenius_inner(const RealMatrix& a, const RealMatrix& b) {
    a.require_same_shape(b);
    double s = 0.0;
    for (size_t i = 0; i < a.data().size(); ++i) s += a.data()[i] * b.data()[i];
    return s;
}

inline double max_abs(const RealMatrix& m) {
    double s = 0.0;
    for (double v : m.data()) s = std::max(s, std::abs(v));
    return s;
}

inline bool approx_equal(const RealMatrix& a, const RealMatrix& b, double tol) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    return frobenius_norm(a - b) <= tol;
}

inline RealMatrix symmetric_part(const RealMatrix& m) {
    return 0.5 * (m + m.transpose());
}

inline RealMatrix skew_part(const RealMatrix& m) {
    return 0.5 * (m - m.transpose());
}

/// Complex matrix stored as a (real, imaginary) pair of equal-shape parts.
class ComplexMatrix {
public:
    ComplexMatrix() = default;

    ComplexMatrix(RealMatrix re, RealMatrix im) : re_(std::move(re)), im_(std::move(im)) {
        re_.require_same_shape(im_);
    }

    explicit ComplexMatrix(const RealMatrix& re)
        : re_(re), im_(RealMatrix::zero(re.rows(), re.cols())) {}

    static ComplexMatrix identity(int n) {
        return ComplexMatrix(RealMatrix::identity(n), RealMatrix::zero(n, n));
    }

    int rows() const { return re_.rows(); }
    int cols() const { return re_.cols(); }

    const RealMatrix& real() const { return re_; }
    const RealMatrix& imag() const { return im_; }

    std::complex<double> operator()(int i, int j) const { return {re_(i, j), im_(i, j)}; }

    ComplexMatrix conj() const { return ComplexMatrix(re_, -im_); }

    /// Conjugate transpose.
    ComplexMatrix adjoint() const { return ComplexMatrix(re_.transpose(), -im_.transpose()); }

    ComplexMatrix operator+(const ComplexMatrix& o) const {
        return ComplexMatrix(re_ + o.re_, im_ + o.im_);
    }
    ComplexMatrix operator-(const ComplexMatrix& o) const {
        return ComplexMatrix(re_ - o.re_, im_ - o.im_);
    }
    ComplexMatrix operator*(const ComplexMatrix& o) const {
        return ComplexMatrix(re_ * o.re_ - im_ * o.im_, re_ * o.im_ + im_ * o.re_);
    }

private:
    RealMatrix re_;
    RealMatrix im_;
};

inline ComplexMatrix operator*(const RealMatrix& a, const ComplexMatrix& b) {
    return ComplexMatrix(a * b.real(), a * b.imag());
}

inline ComplexMatrix operator*(const ComplexMatrix& a, const RealMatrix& b) {
    return ComplexMatrix(a.real() * b, a.imag() * b);
}

inline double frobenius_norm(const ComplexMatrix& m) {
    double s = 0.0;
    for (double v : m.real().data()) s += v * v;
    for (double v : m.imag().data()) s += v * v;
    return std::sqrt(s);
}

/// Tolerances used throughout; every module contract that mentions an epsilon
/// reads it from here so callers can override in one place.
struct ToleranceConfig {
    double eps_eig = 1e-12;      // relative eigendecomposition residual
    double eps_fun = 1e-12;      // relative exp/log residual
    double eps_sym = 1e-10;      // symmetry / skewness checks
    double eps_rank = 1e-10;     // full-rank gate: min eig > eps_rank * max eig
    double cluster_gap = 1e-7;   // eigenvalue clustering gap, scaled by max(1, |Pi|)
    double sigma_null = 1e-9;    // nullspace cut, relative to largest singular value
    double delta_graph = 1e-9;   // structural-zero threshold in invariant-subspace graphs
    double eps_element = 1e-8;   // symmetry-element verification tolerance
};

}  // namespace ofbm
