#pragma once

#include "meanfield/field.hpp"
#include "meanfield/geometry.hpp"
#include "meanfield/kernels.hpp"

#include <optional>
#include <string>
#include <vector>

namespace mfl {

enum class ModelKind { TwoBody, CuckerSmale, Topological, Chemotaxis, MultiAgent };

ModelKind model_kind_from_name(const std::string& name);
std::string model_kind_name(ModelKind kind);

struct CuckerSmaleParams {
    double lambda = 1.0; // coupling, 1/time
    double R = 1.0;      // communication length
    double beta = 1.0;   // decay exponent
    int sign = -1;       // -1: aligning (v_j - v_i); +1: printed form (v_i - v_j)
};

struct TopologicalParams {
    RankKernel K;
    int sign = -1;
};

struct ChemotaxisParams {
    double eta = 0.0;   // coupling to grad(phi)
    double kappa = 0.0; // chemical decay rate
    double D = 1.0;     // chemical diffusivity
    Bump chi;           // mollified indicator deposition kernel
};

enum class ExtForceKind { None, LinearTrap, Constant };

struct ExtForce {
    ExtForceKind kind = ExtForceKind::None;
    double amplitude = 0.0;
    Vec eval(const Vec& x) const {
        switch (kind) {
            case ExtForceKind::LinearTrap: return vscale(-amplitude, x);
            case ExtForceKind::Constant: return {amplitude, 0.0, 0.0};
            case ExtForceKind::None:
            default: return vzero();
        }
    }
};

enum class AgentWeights { Uniform, TwoGroups };

struct MultiAgentParams {
    AgentWeights weights = AgentWeights::Uniform;
    double group_coupling = 1.0;   // inter-group weight for TwoGroups
    double confidence = 1.0;       // Krause confidence radius
    double weight(int i, int j, int n) const {
        if (weights == AgentWeights::Uniform) return 1.0;
        const bool same = (i < n / 2) == (j < n / 2);
        return same ? 1.0 : group_coupling;
    }
    // Bounded-confidence consensus kernel sigma(z) = -z * c(|z|).
    Vec sigma(const Vec& z) const {
        const double r = vnorm(z);
        const double c = std::max(0.0, 1.0 - r / confidence);
        return vscale(-c, z);
    }
};

struct ModelSpec {
    ModelKind kind = ModelKind::TwoBody;
    GradKernel pair_gradient;   // TwoBody; pair part of Chemotaxis
    CuckerSmaleParams cs;       // CuckerSmale; velocity coupling of Chemotaxis
    TopologicalParams topo;
    ChemotaxisParams chem;
    MultiAgentParams agent;
    ExtForce ext_force;
    bool friction = false;      // subtract v_i from every force
    double mass_scale_eps = 1.0; // m = 1/eps in the friction/large-mass variant

    bool first_order() const { return kind == ModelKind::MultiAgent; }
    void validate() const;
    bool chi_mass_positive() const;
    // Lipschitz bound of the force in (x, v) on the unit-mass catalogue.
    double force_lipschitz_bound() const;
};

struct ParticleEnsemble {
    int n = 0;
    int dim = 1;
    std::vector<double> x;     // n*dim
    std::vector<double> v;     // n*dim
    std::vector<double> mass;  // n
    Box box;
    std::optional<ChemicalField> chem;

    static ParticleEnsemble make(int n, int dim, const Box& box, double mass = 1.0);

    Vec pos(int i) const {
        Vec p = vzero();
        for (int c = 0; c < dim; ++c) p[c] = x[i * dim + c];
        return p;
    }
    Vec vel(int i) const {
        Vec p = vzero();
        for (int c = 0; c < dim; ++c) p[c] = v[i * dim + c];
        return p;
    }
    void set_pos(int i, const Vec& p) { for (int c = 0; c < dim; ++c) x[i * dim + c] = p[c]; }
    void set_vel(int i, const Vec& p) { for (int c = 0; c < dim; ++c) v[i * dim + c] = p[c]; }

    void validate() const;
};

// Force (acceleration) on particle i under the selected interaction law.
// The (1/N) sums include the self term j = i, which vanishes for every
// builtin kernel. Pure and reentrant.
Vec eval_force(const ModelSpec& model, const ParticleEnsemble& ens, int i);

// All forces at once; same contract, O(N^2).
std::vector<Vec> eval_all_forces(const ModelSpec& model, const ParticleEnsemble& ens);

// Fraction of agents within distance r of particle i (self included).
double rank_function(const ParticleEnsemble& ens, int i, double r);

} // namespace mfl
