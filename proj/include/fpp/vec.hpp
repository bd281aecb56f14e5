#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace fpp {

// Points and directions in R^d, d known at runtime (d is small, 2..4).
using Vec = std::vector<double>;

inline double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

inline double norminf(const Vec& a) {
    double m = 0.0;
    for (double x : a) m = std::max(m, std::fabs(x));
    return m;
}

inline Vec add(const Vec& a, const Vec& b) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline Vec sub(const Vec& a, const Vec& b) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline Vec scale(const Vec& a, double c) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] * c;
    return r;
}

inline Vec axpy(const Vec& a, double t, const Vec& dir) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + t * dir[i];
    return r;
}

inline Vec normalized(const Vec& a) {
    double n = norm2(a);
    if (n == 0.0) throw std::invalid_argument("cannot normalize zero vector");
    return scale(a, 1.0 / n);
}

inline Vec unit(std::size_t d, std::size_t axis, double sign = 1.0) {
    Vec e(d, 0.0);
    e[axis] = sign;
    return e;
}

}  // namespace fpp
