#include "meanfield/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace mfl {

namespace {

// Surface area of the unit (d-1)-sphere, d = 1..3.
double sphere_area(int dim) {
    switch (dim) {
        case 1: return 2.0;
        case 2: return 2.0 * std::numbers::pi;
        case 3: return 4.0 * std::numbers::pi;
        default: throw ValidationError("bump: dim must be 1..3");
    }
}

// Closed form of int_0^R r^(d-1) (1+cos(pi r/R))/2 dr.
double bump_profile_mass(double R, int dim) {
    const double pi2 = std::numbers::pi * std::numbers::pi;
    switch (dim) {
        case 1: return 0.5 * R;
        case 2: return R * R * (0.25 - 1.0 / pi2);
        case 3: return R * R * R * (1.0 / 6.0 - 1.0 / pi2);
        default: throw ValidationError("bump: dim must be 1..3");
    }
}

} // namespace

Bump Bump::make(double radius, int dim) {
    if (radius <= 0.0) throw ValidationError("bump: radius must be > 0");
    Bump b;
    b.radius = radius;
    b.dim = dim;
    b.norm = 1.0 / (sphere_area(dim) * bump_profile_mass(radius, dim));
    return b;
}

Vec GradKernel::eval(const Vec& z) const {
    switch (kind) {
        case GradKernelKind::None:
            return vzero();
        case GradKernelKind::Harmonic:
            return vscale(-amplitude, z);
        case GradKernelKind::HarmonicRepulsive:
            return vscale(amplitude, z);
        case GradKernelKind::Morse: {
            const double r = vnorm(z);
            if (r == 0.0) return vzero();
            const double f = -amplitude * (std::exp(-r / width) - std::exp(-2.0 * r / width));
            return vscale(f / r, z);
        }
        case GradKernelKind::GaussianBump: {
            const double r2 = vdot(z, z);
            const double f = amplitude / (width * width) * std::exp(-0.5 * r2 / (width * width));
            return vscale(f, z);
        }
        case GradKernelKind::MollifiedDirac: {
            const Bump theta = Bump::make(width, dim);
            const double r = vnorm(z);
            if (r == 0.0) return vzero();
            const double f = -amplitude * theta.radial_derivative(r);
            return vscale(f / r, z);
        }
    }
    return vzero();
}

double GradKernel::pair_potential(const Vec& z) const {
    const double r = vnorm(z);
    switch (kind) {
        case GradKernelKind::None:
            return 0.0;
        case GradKernelKind::Harmonic:
            return 0.5 * amplitude * r * r;
        case GradKernelKind::HarmonicRepulsive:
            return -0.5 * amplitude * r * r;
        case GradKernelKind::Morse:
            return amplitude * width * (0.5 * std::exp(-2.0 * r / width) - std::exp(-r / width));
        case GradKernelKind::GaussianBump:
            return amplitude * std::exp(-0.5 * r * r / (width * width));
        case GradKernelKind::MollifiedDirac: {
            const Bump theta = Bump::make(width, dim);
            return amplitude * theta.value(r);
        }
    }
    return 0.0;
}

double GradKernel::lipschitz_bound() const {
    switch (kind) {
        case GradKernelKind::None: return 0.0;
        case GradKernelKind::Harmonic:
        case GradKernelKind::HarmonicRepulsive: return amplitude;
        case GradKernelKind::Morse: return 2.0 * amplitude / width;
        case GradKernelKind::GaussianBump: return amplitude / (width * width);
        case GradKernelKind::MollifiedDirac: {
            const Bump theta = Bump::make(width, dim);
            return amplitude * theta.norm * 0.5 *
                   std::pow(std::numbers::pi / width, 2.0);
        }
    }
    return 0.0;
}

GradKernelKind grad_kernel_from_name(const std::string& name) {
    static const std::map<std::string, GradKernelKind> table{
        {"none", GradKernelKind::None},
        {"harmonic", GradKernelKind::Harmonic},
        {"harmonic_repulsive", GradKernelKind::HarmonicRepulsive},
        {"morse", GradKernelKind::Morse},
        {"gaussian_bump", GradKernelKind::GaussianBump},
        {"mollified_dirac", GradKernelKind::MollifiedDirac},
    };
    auto it = table.find(name);
    if (it == table.end()) throw ValidationError("unknown grad kernel: " + name);
    return it->second;
}

std::string grad_kernel_name(GradKernelKind kind) {
    switch (kind) {
        case GradKernelKind::None: return "none";
        case GradKernelKind::Harmonic: return "harmonic";
        case GradKernelKind::HarmonicRepulsive: return "harmonic_repulsive";
        case GradKernelKind::Morse: return "morse";
        case GradKernelKind::GaussianBump: return "gaussian_bump";
        case GradKernelKind::MollifiedDirac: return "mollified_dirac";
    }
    return "none";
}

void RankKernel::validate() const {
    if (amplitude < 0.0) throw ValidationError("rank kernel: amplitude must be >= 0");
    if (!std::isfinite(eval(0.0))) throw ValidationError("rank kernel: K(0) must be finite");
    // Non-increasing on a sampled grid of [0, 1].
    double prev = eval(0.0);
    for (int i = 1; i <= 64; ++i) {
        const double cur = eval(i / 64.0);
        if (cur > prev + 1e-14) throw ValidationError("rank kernel: K must be non-increasing");
        prev = cur;
    }
}

RankKernelKind rank_kernel_from_name(const std::string& name) {
    if (name == "clamped_linear") return RankKernelKind::ClampedLinear;
    if (name == "smooth_step") return RankKernelKind::SmoothStep;
    throw ValidationError("unknown rank kernel: " + name);
}

std::string rank_kernel_name(RankKernelKind kind) {
    return kind == RankKernelKind::ClampedLinear ? "clamped_linear" : "smooth_step";
}

} // namespace mfl
