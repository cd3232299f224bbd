#pragma once

#include "meanfield/model.hpp"
#include "meanfield/rng.hpp"

#include <cstdint>
#include <vector>

namespace mfl {

enum class Scheme { RK4, SemiImplicitEuler };

struct IntegratorConfig {
    Scheme scheme = Scheme::RK4;
    double dt = 1e-2;
    double t_final = 1.0;
    int chem_substeps = 1; // chemical PDE substeps per particle step
    int chem_nodes = 64;   // chemical grid nodes per dimension
    Box box;

    void validate() const;
};

// Named product initial laws, sampled i.i.d. per particle and coordinate.
struct InitialLaw {
    enum class Kind { Gaussian, UniformBox, TwoCluster };
    Kind kind = Kind::Gaussian;
    Vec x_mean{{0, 0, 0}};
    double x_sigma = 1.0;   // Gaussian / TwoCluster position spread
    Vec v_mean{{0, 0, 0}};
    double v_sigma = 1.0;
    double cluster_sep = 2.0; // TwoCluster: centers at x_mean -+ sep/2 along axis 0

    void validate() const;
};

struct ReplicaPlan {
    int replicas = 1;
    std::uint64_t seed = 0;
    InitialLaw law;
    int n_particles = 16;
    int dim = 1;

    void validate() const;
};

struct Snapshot {
    double t = 0.0;
    std::vector<double> x, v; // n*dim each
};

using ReplicaRun = std::vector<Snapshot>; // one Snapshot per requested time

// One dt advance: chemical substeps with the frozen particle source,
// then a particle step against the frozen updated field.
void step_particles(ParticleEnsemble& ens, const ModelSpec& model,
                    const IntegratorConfig& cfg);

// Deterministic i.i.d. initial state for (plan.seed, replica index).
ParticleEnsemble sample_ensemble(const ReplicaPlan& plan, const Box& box,
                                 int replica, double mass = 1.0);

// M independent trajectories; snapshots at the requested times (each must be
// a multiple of cfg.dt up to rounding). Deterministic given (seed, replica).
std::vector<ReplicaRun> run_replicas(const ReplicaPlan& plan, const ModelSpec& model,
                                     const IntegratorConfig& cfg,
                                     const std::vector<double>& snapshot_times,
                                     int workers = 0);

// Interaction + kinetic energy bookkeeping for Hamiltonian two-body runs:
// sum v^2/2m + (1/2N) sum_ij V(x_i - x_j).
double two_body_energy(const ModelSpec& model, const ParticleEnsemble& ens);

// max_{i,j} |v_i - v_j| (flocking diagnostics).
double velocity_diameter(const ParticleEnsemble& ens);

} // namespace mfl
