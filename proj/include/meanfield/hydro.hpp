#pragma once

#include "meanfield/model.hpp"

#include <vector>

namespace mfl {

// 1d periodic cell-centered grid for the hydrodynamic solvers.
struct HydroGrid {
    int nx = 128;
    double xmin = 0.0, xmax = 1.0;

    double dx() const { return (xmax - xmin) / nx; }
    double x(int i) const { return xmin + (i + 0.5) * dx(); }
    Box xbox() const {
        Box b;
        b.dim = 1;
        b.lo = {xmin, 0, 0};
        b.hi = {xmax, 0, 0};
        b.boundary = Boundary::Periodic;
        return b;
    }
    void validate() const;
};

struct HydroState {
    HydroGrid grid;
    std::vector<double> mu;  // density, unit mass
    std::vector<double> q;   // momentum mu*u
    std::vector<double> psi; // chemical potential
    double eps = 1.0;        // time-scaling of the momentum/chemical equations
    double eps_p = 0.0;      // added pressure coefficient

    static HydroState make(const HydroGrid& grid);
    double mass() const;
    double momentum_total() const;
    // velocity with the vacuum rule u = 0 where mu < 1e-12 * max(mu)
    std::vector<double> velocity() const;
    void validate() const;
};

// Finite-volume step of the nonlocal Euler system. Local Lax-Friedrichs
// fluxes; nonlocal momentum source by midpoint quadrature; optional pressure
// flux eps_p * d(mu dmu); chemical field stepped parabolically when the
// model couples to it.
void step_euler(HydroState& s, const ModelSpec& model, double dt);

// Epsilon-scaled variant with friction sink -u mu; the friction relaxation
// is integrated exactly against the frozen remaining right-hand side, so
// small eps is not a stability constraint. include_friction=false with
// eps=1 reproduces step_euler bit for bit.
void step_euler_eps(HydroState& s, const ModelSpec& model, double dt,
                    bool include_friction = true);

// Periodic screened Poisson solve (lap - kappa) psi = -mu, cyclic tridiagonal.
std::vector<double> solve_screened_poisson(const HydroGrid& grid,
                                           const std::vector<double>& mu,
                                           double kappa);

// Degenerate-diffusion Keller-Segel step: d(mu)/dt = d(mu dmu) - eta d(mu dpsi)
// with psi from the elliptic solve each step. gradient_drift=false selects
// the non-gradient drift flux mu*psi instead of mu*dpsi.
void step_keller_segel(std::vector<double>& mu, std::vector<double>& psi,
                       const HydroGrid& grid, const ModelSpec& model, double dt,
                       bool gradient_drift = true);

// Friction-balance closure velocity u = (eta mu dpsi - mu dmu) / mu.
std::vector<double> closure_velocity(const HydroGrid& grid,
                                     const std::vector<double>& mu,
                                     const std::vector<double>& psi, double eta);

} // namespace mfl
