#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace hybridctl {

/// State / input vectors. Systems in scope are low-dimensional, so a plain
/// dynamic vector is enough.
using Vec = std::vector<double>;

inline double norm(const Vec& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

inline Vec zeros(std::size_t n) { return Vec(n, 0.0); }

/// y += a * x
inline void axpy(Vec& y, double a, const Vec& x) {
    if (y.size() != x.size()) throw std::invalid_argument("axpy: dimension mismatch");
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

inline Vec scaled_sum(const Vec& x, double a, const Vec& d) {
    Vec r = x;
    axpy(r, a, d);
    return r;
}

/// Dense row-major matrix (control gains are n x m with tiny n, m).
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
        return m;
    }
    static Matrix scalar(double v) {
        Matrix m(1, 1);
        m.at(0, 0) = v;
        return m;
    }

    double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    Vec apply(const Vec& u) const {
        if (u.size() != cols) throw std::invalid_argument("Matrix::apply: dimension mismatch");
        Vec y(rows, 0.0);
        for (std::size_t i = 0; i < rows; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < cols; ++j) s += data[i * cols + j] * u[j];
            y[i] = s;
        }
        return y;
    }
};

}  // namespace hybridctl
