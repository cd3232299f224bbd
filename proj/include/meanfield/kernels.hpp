#pragma once

#include "meanfield/geometry.hpp"
#include "meanfield/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace mfl {

// Raised-cosine C1 bump of given radius, normalized to unit mass in
// dimension dim. Used for the chemical deposition kernel and for the
// mollified-Dirac pair potentials of the epsilon-scaled systems.
struct Bump {
    double radius = 1.0;
    int dim = 1;
    double norm = 1.0; // value prefactor fixing unit mass

    static Bump make(double radius, int dim);

    double value(double r) const {
        if (r >= radius) return 0.0;
        return norm * 0.5 * (1.0 + std::cos(std::numbers::pi * r / radius));
    }

    // d/dr of value; zero at r = 0 and beyond the support.
    double radial_derivative(double r) const {
        if (r >= radius) return 0.0;
        return -norm * 0.5 * (std::numbers::pi / radius) *
               std::sin(std::numbers::pi * r / radius);
    }

    double lipschitz() const {
        return norm * 0.5 * std::numbers::pi / radius;
    }
};

// Pair-force catalogue for the two-body and chemotaxis laws. Each entry is
// a Lipschitz vector field g with force F_i = (1/N) sum_j g(x_i - x_j);
// pair_potential returns the V with g = -grad V (energy bookkeeping).
enum class GradKernelKind {
    None,
    Harmonic,          // g(z) = -a z (attractive spring)
    HarmonicRepulsive, // g(z) = +a z (printed-sign variant)
    Morse,             // bounded attractive/repulsive well
    GaussianBump,      // short-range repulsion
    MollifiedDirac,    // g = -a grad(theta_w), theta_w unit-mass bump
};

struct GradKernel {
    GradKernelKind kind = GradKernelKind::None;
    double amplitude = 1.0;
    double width = 1.0; // length scale; bump radius for MollifiedDirac
    int dim = 1;        // only used to normalize the bump

    Vec eval(const Vec& z) const;
    double pair_potential(const Vec& z) const;
    double lipschitz_bound() const;
    bool active() const { return kind != GradKernelKind::None; }
    void validate() const {
        if (amplitude < 0.0) throw ValidationError("grad kernel: amplitude must be >= 0");
        if (kind != GradKernelKind::None && kind != GradKernelKind::Harmonic &&
            kind != GradKernelKind::HarmonicRepulsive && width <= 0.0)
            throw ValidationError("grad kernel: width must be > 0");
    }
};

GradKernelKind grad_kernel_from_name(const std::string& name);
std::string grad_kernel_name(GradKernelKind kind);

// Rank-weight catalogue K: [0,1] -> R+, non-increasing Lipschitz.
enum class RankKernelKind { ClampedLinear, SmoothStep };

struct RankKernel {
    RankKernelKind kind = RankKernelKind::ClampedLinear;
    double amplitude = 1.0;

    double eval(double m) const {
        const double s = std::clamp(m, 0.0, 1.0);
        switch (kind) {
            case RankKernelKind::ClampedLinear: return amplitude * (1.0 - s);
            case RankKernelKind::SmoothStep:
            default: return amplitude * (1.0 - s * s * (3.0 - 2.0 * s));
        }
    }
    double lipschitz() const {
        return amplitude * (kind == RankKernelKind::ClampedLinear ? 1.0 : 1.5);
    }
    void validate() const;
};

RankKernelKind rank_kernel_from_name(const std::string& name);
std::string rank_kernel_name(RankKernelKind kind);

// Cucker-Smale communication weight 1 / (1 + r^2/R^2)^beta.
inline double cs_weight(double r, double R, double beta) {
    const double s = 1.0 + (r * r) / (R * R);
    if (beta == 1.0) return 1.0 / s;
    if (beta == 2.0) return 1.0 / (s * s);
    if (beta == 0.5) return 1.0 / std::sqrt(s);
    return std::pow(s, -beta);
}

} // namespace mfl
