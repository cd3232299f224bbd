#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

namespace mfl {

// Fixed-capacity vector; the active dimension (1..3) is carried by the
// owning container. Unused components stay zero.
using Vec = std::array<double, 3>;

inline constexpr Vec vzero() { return {0.0, 0.0, 0.0}; }

inline Vec vadd(const Vec& a, const Vec& b) {
    return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}

inline Vec vsub(const Vec& a, const Vec& b) {
    return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}

inline Vec vscale(double s, const Vec& a) {
    return {s * a[0], s * a[1], s * a[2]};
}

inline double vdot(const Vec& a, const Vec& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline double vnorm(const Vec& a) { return std::sqrt(vdot(a, a)); }

inline bool vfinite(const Vec& a) {
    return std::isfinite(a[0]) && std::isfinite(a[1]) && std::isfinite(a[2]);
}

enum class Boundary { Free, Periodic };

// Axis-aligned simulation box. Periodic boxes use minimal-image distances.
struct Box {
    int dim = 1;
    Vec lo{{0.0, 0.0, 0.0}};
    Vec hi{{1.0, 1.0, 1.0}};
    Boundary boundary = Boundary::Free;

    double length(int c) const { return hi[c] - lo[c]; }

    void validate() const {
        if (dim < 1 || dim > 3) throw std::invalid_argument("box: dim must be 1..3");
        for (int c = 0; c < dim; ++c)
            if (!(hi[c] > lo[c])) throw std::invalid_argument("box: hi must exceed lo");
    }

    // Wrap a coordinate into [lo, hi) for periodic boxes; identity otherwise.
    double wrap(double x, int c) const {
        if (boundary != Boundary::Periodic) return x;
        const double L = length(c);
        double y = std::fmod(x - lo[c], L);
        if (y < 0.0) y += L;
        return lo[c] + y;
    }

    Vec wrap(const Vec& x) const {
        Vec y = x;
        for (int c = 0; c < dim; ++c) y[c] = wrap(x[c], c);
        return y;
    }

    // Displacement a - b, minimal image under periodicity.
    double delta(double a, double b, int c) const {
        double d = a - b;
        if (boundary == Boundary::Periodic) {
            const double L = length(c);
            d -= L * std::round(d / L);
        }
        return d;
    }

    Vec delta(const Vec& a, const Vec& b) const {
        Vec d = vzero();
        for (int c = 0; c < dim; ++c) d[c] = delta(a[c], b[c], c);
        return d;
    }

    double distance(const Vec& a, const Vec& b) const { return vnorm(delta(a, b)); }

    bool contains(const Vec& x) const {
        for (int c = 0; c < dim; ++c)
            if (x[c] < lo[c] || x[c] > hi[c]) return false;
        return true;
    }
};

} // namespace mfl
