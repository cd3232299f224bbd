#pragma once

#include "meanfield/field.hpp"
#include "meanfield/model.hpp"

#include <vector>

namespace mfl {

// 1d x 1d phase-space grid, cell centered; periodic in x, truncated in v.
struct PhaseGrid {
    int nx = 64, nv = 64;
    double xmin = -1.0, xmax = 1.0;
    double vmin = -1.0, vmax = 1.0;

    double dx() const { return (xmax - xmin) / nx; }
    double dv() const { return (vmax - vmin) / nv; }
    double x(int i) const { return xmin + (i + 0.5) * dx(); }
    double v(int j) const { return vmin + (j + 0.5) * dv(); }
    double cell() const { return dx() * dv(); }
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

struct PhaseDensity {
    PhaseGrid grid;
    std::vector<double> rho; // nx*nv, row-major in x
    double clipped = 0.0;    // cumulative negative mass removed (logged)

    static PhaseDensity zero(const PhaseGrid& grid);

    double& at(int i, int j) { return rho[std::size_t(i) * grid.nv + j]; }
    double at(int i, int j) const { return rho[std::size_t(i) * grid.nv + j]; }
    double mass() const;
    void renormalize(); // rescale to unit mass
    // largest density on the v-boundary rows (truncation diagnostics)
    double boundary_density() const;
};

struct MomentFields {
    std::vector<double> mu;       // density
    std::vector<double> momentum; // mu * u
    std::vector<double> u;        // velocity with vacuum floor rule
};

// Self-consistent kinetic force; affine in v for every supported law:
// F(x_i, v) = base[i] + slope[i] * v.
struct KineticForce {
    std::vector<double> base, slope;
    double max_abs(const PhaseGrid& g) const;
};

MomentFields moments(const PhaseDensity& rho);

KineticForce vlasov_force_field(const PhaseDensity& rho, const ModelSpec& model,
                                const ChemicalField* psi = nullptr);

// Strang-split semi-Lagrangian step: half x-advection, chemical update and
// full v-advection with the frozen force, half x-advection.
void step_vlasov(PhaseDensity& rho, const ModelSpec& model, double dt,
                 ChemicalField* psi = nullptr, int chem_substeps = 1);

// rho(x,v) = mu(x) Gaussian(v; u(x), sigma_v^2), renormalized to unit mass.
PhaseDensity monokinetic_init(const PhaseGrid& grid, const std::vector<double>& mu,
                              const std::vector<double>& u, double sigma_v);

// Deposition source chi * mu on the x-grid (periodic quadrature).
std::vector<double> convolve_chi(const PhaseGrid& grid, const std::vector<double>& mu,
                                 const Bump& chi);

} // namespace mfl
