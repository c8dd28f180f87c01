#ifndef ANISO_RT_LINALG_HPP
#define ANISO_RT_LINALG_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

namespace aniso_rt {

// Fixed-capacity d-vector, d in {1,2,3}. Unused entries stay zero so that
// dot/cross work uniformly across dimensions.
struct VecD {
    int d = 0;
    std::array<double, 3> x{0.0, 0.0, 0.0};

    VecD() = default;
    VecD(double a, double b) : d(2), x{a, b, 0.0} {}
    VecD(double a, double b, double c) : d(3), x{a, b, c} {}
    static VecD zero(int dim) {
        VecD v;
        v.d = dim;
        return v;
    }
    static VecD unit(int dim, int axis) {
        VecD v = zero(dim);
        v.x[static_cast<size_t>(axis)] = 1.0;
        return v;
    }

    double& operator[](int i) { return x[static_cast<size_t>(i)]; }
    double operator[](int i) const { return x[static_cast<size_t>(i)]; }
};

inline VecD operator+(const VecD& a, const VecD& b) {
    VecD r = a;
    for (int i = 0; i < a.d; ++i) r[i] += b[i];
    return r;
}
inline VecD operator-(const VecD& a, const VecD& b) {
    VecD r = a;
    for (int i = 0; i < a.d; ++i) r[i] -= b[i];
    return r;
}
inline VecD operator*(double s, const VecD& a) {
    VecD r = a;
    for (int i = 0; i < a.d; ++i) r[i] *= s;
    return r;
}
inline double dot(const VecD& a, const VecD& b) {
    double s = 0.0;
    for (int i = 0; i < a.d; ++i) s += a[i] * b[i];
    return s;
}
inline double norm2(const VecD& a) { return std::sqrt(dot(a, a)); }
inline VecD cross3(const VecD& a, const VecD& b) {
    VecD r = VecD::zero(3);
    r[0] = a[1] * b[2] - a[2] * b[1];
    r[1] = a[2] * b[0] - a[0] * b[2];
    r[2] = a[0] * b[1] - a[1] * b[0];
    return r;
}
// z-component of the 2D cross product.
inline double cross2(const VecD& a, const VecD& b) { return a[0] * b[1] - a[1] * b[0]; }
inline VecD normalized(const VecD& a) {
    double n = norm2(a);
    return (1.0 / n) * a;
}

// Row-major d x d matrix, d in {2,3}.
struct MatD {
    int d = 0;
    std::array<double, 9> a{};

    static MatD zero(int dim) {
        MatD m;
        m.d = dim;
        return m;
    }
    static MatD identity(int dim) {
        MatD m = zero(dim);
        for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
        return m;
    }
    static MatD diag(const VecD& v) {
        MatD m = zero(v.d);
        for (int i = 0; i < v.d; ++i) m(i, i) = v[i];
        return m;
    }
    static MatD from_columns(const std::vector<VecD>& cols) {
        MatD m = zero(cols[0].d);
        for (int j = 0; j < m.d; ++j)
            for (int i = 0; i < m.d; ++i) m(i, j) = cols[static_cast<size_t>(j)][i];
        return m;
    }

    double& operator()(int i, int j) { return a[static_cast<size_t>(i * d + j)]; }
    double operator()(int i, int j) const { return a[static_cast<size_t>(i * d + j)]; }

    VecD column(int j) const {
        VecD c = VecD::zero(d);
        for (int i = 0; i < d; ++i) c[i] = (*this)(i, j);
        return c;
    }
};

inline MatD operator*(const MatD& A, const MatD& B) {
    MatD C = MatD::zero(A.d);
    for (int i = 0; i < A.d; ++i)
        for (int k = 0; k < A.d; ++k) {
            double aik = A(i, k);
            for (int j = 0; j < A.d; ++j) C(i, j) += aik * B(k, j);
        }
    return C;
}
inline VecD operator*(const MatD& A, const VecD& v) {
    VecD r = VecD::zero(A.d);
    for (int i = 0; i < A.d; ++i)
        for (int j = 0; j < A.d; ++j) r[i] += A(i, j) * v[j];
    return r;
}
inline MatD transpose(const MatD& A) {
    MatD T = MatD::zero(A.d);
    for (int i = 0; i < A.d; ++i)
        for (int j = 0; j < A.d; ++j) T(j, i) = A(i, j);
    return T;
}

double det(const MatD& A);
MatD inverse(const MatD& A);

// Eigenvalues of a symmetric d x d matrix (ascending), cyclic Jacobi.
std::array<double, 3> sym_eigenvalues(const MatD& S);

// Largest / smallest singular values and the spectral (Euclidean) norm.
double spectral_norm(const MatD& A);
double spectral_cond(const MatD& A);

// Dense row-major matrix for moment systems (N <= ~40).
class Matrix {
  public:
    Matrix() = default;
    Matrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, 0.0) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    double& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
    double operator()(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

    double norm1() const; // max column sum

  private:
    int rows_ = 0, cols_ = 0;
    std::vector<double> a_;
};

// LU factorization with partial pivoting of a square matrix.
struct LuFactors {
    Matrix lu;
    std::vector<int> perm;
    bool singular = false;

    std::vector<double> solve(const std::vector<double>& rhs) const;
};

LuFactors lu_factor(const Matrix& A);
Matrix lu_invert(const LuFactors& f);

// 1-norm condition number (exact, via explicit inverse; fine at these sizes).
double cond1(const Matrix& A);

} // namespace aniso_rt

#endif
