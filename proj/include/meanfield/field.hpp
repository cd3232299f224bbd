#pragma once

#include "meanfield/geometry.hpp"
#include "meanfield/kernels.hpp"
#include "meanfield/errors.hpp"

#include <array>
#include <vector>

namespace mfl {

// Regular cell-centered lattice over the simulation box holding the
// chemical concentration. Supported in 1 and 2 spatial dimensions.
struct ChemicalField {
    enum class Bc { Periodic, Neumann };

    int dim = 1;
    std::array<int, 2> nodes{{64, 1}};
    Box box;
    Bc bc = Bc::Periodic;
    std::vector<double> phi; // nodes[0] * nodes[1], row-major

    static ChemicalField make(const Box& box, std::array<int, 2> nodes, Bc bc,
                              double initial = 0.0);

    double dx(int c) const { return box.length(c) / nodes[c]; }
    double node_coord(int i, int c) const { return box.lo[c] + (i + 0.5) * dx(c); }
    int size() const { return nodes[0] * nodes[1]; }
    double& at(int i, int j) { return phi[i * nodes[1] + j]; }
    double at(int i, int j) const { return phi[i * nodes[1] + j]; }

    void validate() const;
};

// Gradient of the interpolated field at x: nodal central differences,
// multilinearly interpolated. Exact for fields linear in each coordinate.
Vec chem_gradient(const ChemicalField& field, const Vec& x);

// Interpolated field value (multilinear).
double chem_value(const ChemicalField& field, const Vec& x);

// One explicit step of  d(phi)/dt = D lap(phi) - kappa phi + source.
// `source` is evaluated per node. Throws CflError when D dt / dx^2 exceeds
// the explicit stability bound.
void step_chemical_gridded(ChemicalField& field, const std::vector<double>& source,
                           double D, double kappa, double dt);

// Same step with the particle-borne source (1/N) sum_j chi(x - x_j).
void step_chemical(ChemicalField& field, const std::vector<Vec>& positions,
                   const Bump& chi, double D, double kappa, double dt);

// Deposit (1/N) sum_j chi(x - x_j) on the grid.
std::vector<double> deposit_sources(const ChemicalField& field,
                                    const std::vector<Vec>& positions,
                                    const Bump& chi);

} // namespace mfl
