#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "sketchlsq/errors.hpp"

namespace sketchlsq {

using Vector = std::vector<double>;

/// y += alpha * x
inline void axpy(double alpha, const Vector& x, Vector& y) {
    if (x.size() != y.size()) throw DimensionMismatch("axpy: length mismatch");
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += alpha * x[i];
}

/// x *= alpha
inline void scal(double alpha, Vector& x) {
    for (double& v : x) v *= alpha;
}

inline double dot(const Vector& x, const Vector& y) {
    if (x.size() != y.size()) throw DimensionMismatch("dot: length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

inline double norm2(const Vector& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

inline Vector scaled(const Vector& x, double alpha) {
    Vector y(x);
    scal(alpha, y);
    return y;
}

}  // namespace sketchlsq
