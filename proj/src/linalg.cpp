#include "aniso_rt/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace aniso_rt {

double det(const MatD& A) {
    if (A.d == 2) return A(0, 0) * A(1, 1) - A(0, 1) * A(1, 0);
    return A(0, 0) * (A(1, 1) * A(2, 2) - A(1, 2) * A(2, 1)) -
           A(0, 1) * (A(1, 0) * A(2, 2) - A(1, 2) * A(2, 0)) +
           A(0, 2) * (A(1, 0) * A(2, 1) - A(1, 1) * A(2, 0));
}

MatD inverse(const MatD& A) {
    MatD inv = MatD::zero(A.d);
    double d = det(A);
    if (A.d == 2) {
        inv(0, 0) = A(1, 1) / d;
        inv(0, 1) = -A(0, 1) / d;
        inv(1, 0) = -A(1, 0) / d;
        inv(1, 1) = A(0, 0) / d;
        return inv;
    }
    inv(0, 0) = (A(1, 1) * A(2, 2) - A(1, 2) * A(2, 1)) / d;
    inv(0, 1) = (A(0, 2) * A(2, 1) - A(0, 1) * A(2, 2)) / d;
    inv(0, 2) = (A(0, 1) * A(1, 2) - A(0, 2) * A(1, 1)) / d;
    inv(1, 0) = (A(1, 2) * A(2, 0) - A(1, 0) * A(2, 2)) / d;
    inv(1, 1) = (A(0, 0) * A(2, 2) - A(0, 2) * A(2, 0)) / d;
    inv(1, 2) = (A(0, 2) * A(1, 0) - A(0, 0) * A(1, 2)) / d;
    inv(2, 0) = (A(1, 0) * A(2, 1) - A(1, 1) * A(2, 0)) / d;
    inv(2, 1) = (A(0, 1) * A(2, 0) - A(0, 0) * A(2, 1)) / d;
    inv(2, 2) = (A(0, 0) * A(1, 1) - A(0, 1) * A(1, 0)) / d;
    return inv;
}

std::array<double, 3> sym_eigenvalues(const MatD& S) {
    MatD a = S;
    const int n = a.d;
    // Cyclic Jacobi; converges in a handful of sweeps for n <= 3.
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
        if (off < 1e-300) break;
        double scale = 0.0;
        for (int i = 0; i < n; ++i) scale = std::max(scale, std::abs(a(i, i)));
        if (std::sqrt(off) <= 1e-16 * std::max(scale, 1e-300)) break;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) {
                if (a(p, q) == 0.0) continue;
                double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                MatD r = a;
                for (int k = 0; k < n; ++k) {
                    r(p, k) = c * a(p, k) - s * a(q, k);
                    r(q, k) = s * a(p, k) + c * a(q, k);
                }
                a = r;
                MatD r2 = a;
                for (int k = 0; k < n; ++k) {
                    r2(k, p) = c * a(k, p) - s * a(k, q);
                    r2(k, q) = s * a(k, p) + c * a(k, q);
                }
                a = r2;
            }
    }
    std::array<double, 3> ev{0.0, 0.0, 0.0};
    for (int i = 0; i < n; ++i) ev[static_cast<size_t>(i)] = a(i, i);
    std::sort(ev.begin(), ev.begin() + n);
    return ev;
}

double spectral_norm(const MatD& A) {
    MatD S = transpose(A) * A;
    auto ev = sym_eigenvalues(S);
    return std::sqrt(std::max(0.0, ev[static_cast<size_t>(A.d - 1)]));
}

double spectral_cond(const MatD& A) {
    MatD S = transpose(A) * A;
    auto ev = sym_eigenvalues(S);
    double smax = std::sqrt(std::max(0.0, ev[static_cast<size_t>(A.d - 1)]));
    double smin = std::sqrt(std::max(0.0, ev[0]));
    return smax / smin;
}

double Matrix::norm1() const {
    double best = 0.0;
    for (int j = 0; j < cols_; ++j) {
        double s = 0.0;
        for (int i = 0; i < rows_; ++i) s += std::abs((*this)(i, j));
        best = std::max(best, s);
    }
    return best;
}

LuFactors lu_factor(const Matrix& A) {
    const int n = A.rows();
    LuFactors f;
    f.lu = A;
    f.perm.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) f.perm[static_cast<size_t>(i)] = i;
    for (int k = 0; k < n; ++k) {
        int piv = k;
        double best = std::abs(f.lu(k, k));
        for (int i = k + 1; i < n; ++i) {
            double v = std::abs(f.lu(i, k));
            if (v > best) {
                best = v;
                piv = i;
            }
        }
        if (best == 0.0) {
            f.singular = true;
            return f;
        }
        if (piv != k) {
            for (int j = 0; j < n; ++j) std::swap(f.lu(k, j), f.lu(piv, j));
            std::swap(f.perm[static_cast<size_t>(k)], f.perm[static_cast<size_t>(piv)]);
        }
        for (int i = k + 1; i < n; ++i) {
            f.lu(i, k) /= f.lu(k, k);
            double lik = f.lu(i, k);
            for (int j = k + 1; j < n; ++j) f.lu(i, j) -= lik * f.lu(k, j);
        }
    }
    return f;
}

std::vector<double> LuFactors::solve(const std::vector<double>& rhs) const {
    const int n = lu.rows();
    std::vector<double> y(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        double s = rhs[static_cast<size_t>(perm[static_cast<size_t>(i)])];
        for (int j = 0; j < i; ++j) s -= lu(i, j) * y[static_cast<size_t>(j)];
        y[static_cast<size_t>(i)] = s;
    }
    for (int i = n - 1; i >= 0; --i) {
        double s = y[static_cast<size_t>(i)];
        for (int j = i + 1; j < n; ++j) s -= lu(i, j) * y[static_cast<size_t>(j)];
        y[static_cast<size_t>(i)] = s / lu(i, i);
    }
    return y;
}

Matrix lu_invert(const LuFactors& f) {
    const int n = f.lu.rows();
    Matrix inv(n, n);
    std::vector<double> e(static_cast<size_t>(n), 0.0);
    for (int j = 0; j < n; ++j) {
        e[static_cast<size_t>(j)] = 1.0;
        auto col = f.solve(e);
        e[static_cast<size_t>(j)] = 0.0;
        for (int i = 0; i < n; ++i) inv(i, j) = col[static_cast<size_t>(i)];
    }
    return inv;
}

double cond1(const Matrix& A) {
    auto f = lu_factor(A);
    if (f.singular) return std::numeric_limits<double>::infinity();
    Matrix inv = lu_invert(f);
    return A.norm1() * inv.norm1();
}

} // namespace aniso_rt
