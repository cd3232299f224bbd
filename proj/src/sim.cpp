#include "meanfield/sim.hpp"

#include "meanfield/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mfl {

void IntegratorConfig::validate() const {
    if (!(dt > 0.0)) throw ValidationError("integrator: dt must be > 0");
    if (t_final < 0.0) throw ValidationError("integrator: t_final must be >= 0");
    if (chem_substeps < 1) throw ValidationError("integrator: chem substeps must be >= 1");
    box.validate();
}

void InitialLaw::validate() const {
    if (!(x_sigma > 0.0) || !(v_sigma > 0.0))
        throw ValidationError("initial law: sigmas must be > 0 (finite second moment)");
    if (kind == Kind::TwoCluster && !(cluster_sep >= 0.0))
        throw ValidationError("initial law: cluster separation must be >= 0");
}

void ReplicaPlan::validate() const {
    if (replicas < 1) throw ValidationError("replica plan: M must be >= 1");
    if (n_particles < 1) throw ValidationError("replica plan: N must be >= 1");
    if (dim < 1 || dim > 3) throw ValidationError("replica plan: dim must be 1..3");
    law.validate();
}

namespace {

std::vector<Vec> positions_of(const ParticleEnsemble& ens) {
    std::vector<Vec> p(ens.n);
    for (int i = 0; i < ens.n; ++i) p[i] = ens.pos(i);
    return p;
}

// d/dt of the particle state with the chemical field frozen.
void state_derivative(const ModelSpec& model, const ParticleEnsemble& ens,
                      std::vector<double>& dx, std::vector<double>& dv) {
    const int n = ens.n, d = ens.dim;
    const auto forces = eval_all_forces(model, ens);
    if (model.first_order()) {
        // agent systems are first order in the configuration variable
        for (int i = 0; i < n; ++i)
            for (int c = 0; c < d; ++c) {
                dx[i * d + c] = forces[i][c];
                dv[i * d + c] = 0.0;
            }
        return;
    }
    for (int i = 0; i < n; ++i)
        for (int c = 0; c < d; ++c) {
            dx[i * d + c] = ens.v[i * d + c] / ens.mass[i];
            dv[i * d + c] = forces[i][c];
        }
}

void axpy(std::vector<double>& out, const std::vector<double>& base,
          double s, const std::vector<double>& dir) {
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = base[k] + s * dir[k];
}

void particle_step(ParticleEnsemble& ens, const ModelSpec& model,
                   const IntegratorConfig& cfg) {
    const std::size_t m = ens.x.size();
    const double dt = cfg.dt;

    if (cfg.scheme == Scheme::SemiImplicitEuler && !model.first_order()) {
        const double L = model.force_lipschitz_bound();
        if (dt * L >= 1.0)
            throw CflError("semi-implicit Euler: dt * force Lipschitz bound >= 1");
        const auto forces = eval_all_forces(model, ens);
        for (int i = 0; i < ens.n; ++i)
            for (int c = 0; c < ens.dim; ++c) {
                ens.v[i * ens.dim + c] += dt * forces[i][c];
                ens.x[i * ens.dim + c] += dt * ens.v[i * ens.dim + c] / ens.mass[i];
            }
        return;
    }

    // classic RK4 with the field frozen over the step
    ParticleEnsemble work = ens;
    std::vector<double> k1x(m), k1v(m), k2x(m), k2v(m), k3x(m), k3v(m), k4x(m), k4v(m);
    state_derivative(model, ens, k1x, k1v);
    axpy(work.x, ens.x, 0.5 * dt, k1x);
    axpy(work.v, ens.v, 0.5 * dt, k1v);
    state_derivative(model, work, k2x, k2v);
    axpy(work.x, ens.x, 0.5 * dt, k2x);
    axpy(work.v, ens.v, 0.5 * dt, k2v);
    state_derivative(model, work, k3x, k3v);
    axpy(work.x, ens.x, dt, k3x);
    axpy(work.v, ens.v, dt, k3v);
    state_derivative(model, work, k4x, k4v);
    for (std::size_t k = 0; k < m; ++k) {
        ens.x[k] += dt / 6.0 * (k1x[k] + 2.0 * k2x[k] + 2.0 * k3x[k] + k4x[k]);
        ens.v[k] += dt / 6.0 * (k1v[k] + 2.0 * k2v[k] + 2.0 * k3v[k] + k4v[k]);
    }
}

} // namespace

void step_particles(ParticleEnsemble& ens, const ModelSpec& model,
                    const IntegratorConfig& cfg) {
    cfg.validate();
    if (model.kind == ModelKind::Chemotaxis) {
        if (!ens.chem)
            throw ValidationError("step_particles: chemotaxis model requires a chemical field");
        const double dtc = cfg.dt / cfg.chem_substeps;
        const auto pos = positions_of(ens);
        for (int s = 0; s < cfg.chem_substeps; ++s)
            step_chemical(*ens.chem, pos, model.chem.chi, model.chem.D,
                          model.chem.kappa, dtc);
    }
    particle_step(ens, model, cfg);
    if (ens.box.boundary == Boundary::Periodic)
        for (int i = 0; i < ens.n; ++i)
            for (int c = 0; c < ens.dim; ++c)
                ens.x[i * ens.dim + c] = ens.box.wrap(ens.x[i * ens.dim + c], c);
    for (double c : ens.x)
        if (!std::isfinite(c)) throw NumericalError("step_particles: non-finite position");
    for (double c : ens.v)
        if (!std::isfinite(c)) throw NumericalError("step_particles: non-finite velocity");
}

ParticleEnsemble sample_ensemble(const ReplicaPlan& plan, const Box& box,
                                 int replica, double mass) {
    ParticleEnsemble ens = ParticleEnsemble::make(plan.n_particles, plan.dim, box, mass);
    const CounterRng rng{plan.seed, std::uint64_t(replica)};
    const auto& law = plan.law;
    for (int i = 0; i < ens.n; ++i) {
        for (int c = 0; c < ens.dim; ++c) {
            double xs = 0.0;
            switch (law.kind) {
                case InitialLaw::Kind::Gaussian:
                    xs = law.x_mean[c] + law.x_sigma * rng.normal(draw_key(i, c, 0));
                    break;
                case InitialLaw::Kind::UniformBox:
                    xs = rng.uniform(draw_key(i, c, 0) * 2 + 1, box.lo[c], box.hi[c]);
                    break;
                case InitialLaw::Kind::TwoCluster: {
                    xs = law.x_mean[c] + law.x_sigma * rng.normal(draw_key(i, c, 0));
                    if (c == 0) {
                        const bool up = rng.uniform01(draw_key(i, 7, 3) * 2 + 1) < 0.5;
                        xs += (up ? 0.5 : -0.5) * law.cluster_sep;
                    }
                    break;
                }
            }
            ens.x[i * ens.dim + c] = box.boundary == Boundary::Periodic ? box.wrap(xs, c) : xs;
            ens.v[i * ens.dim + c] =
                law.v_mean[c] + law.v_sigma * rng.normal(draw_key(i, c, 1));
        }
    }
    return ens;
}

std::vector<ReplicaRun> run_replicas(const ReplicaPlan& plan, const ModelSpec& model,
                                     const IntegratorConfig& cfg,
                                     const std::vector<double>& snapshot_times,
                                     int workers) {
    plan.validate();
    cfg.validate();
    model.validate();
    std::vector<long> snap_steps(snapshot_times.size());
    const long total_steps = std::lround(cfg.t_final / cfg.dt);
    for (std::size_t k = 0; k < snapshot_times.size(); ++k) {
        const double t = snapshot_times[k];
        if (t < 0.0 || t > cfg.t_final + 1e-9 * std::max(1.0, cfg.t_final))
            throw ValidationError("run_replicas: snapshot time outside [0, t_final]");
        snap_steps[k] = std::lround(t / cfg.dt);
        if (std::abs(snap_steps[k] * cfg.dt - t) > 1e-9 * std::max(1.0, t))
            throw ValidationError("run_replicas: snapshot times must be multiples of dt");
    }

    const double mass = model.friction ? 1.0 / model.mass_scale_eps : 1.0;
    std::vector<ReplicaRun> out(plan.replicas);
    parallel_for(plan.replicas, [&](int m) {
        try {
            ParticleEnsemble ens = sample_ensemble(plan, cfg.box, m, mass);
            if (model.kind == ModelKind::Chemotaxis)
                ens.chem = ChemicalField::make(
                    cfg.box, {cfg.chem_nodes, cfg.chem_nodes},
                    cfg.box.boundary == Boundary::Periodic
                        ? ChemicalField::Bc::Periodic
                        : ChemicalField::Bc::Neumann);
            ReplicaRun run(snapshot_times.size());
            auto capture = [&](long step) {
                for (std::size_t k = 0; k < snap_steps.size(); ++k)
                    if (snap_steps[k] == step)
                        run[k] = Snapshot{step * cfg.dt, ens.x, ens.v};
            };
            capture(0);
            for (long step = 1; step <= total_steps; ++step) {
                step_particles(ens, model, cfg);
                capture(step);
            }
            out[m] = std::move(run);
        } catch (const std::exception& e) {
            throw NumericalError("replica " + std::to_string(m) + ": " + e.what());
        }
    }, workers);
    return out;
}

double two_body_energy(const ModelSpec& model, const ParticleEnsemble& ens) {
    double e = 0.0;
    for (int i = 0; i < ens.n; ++i)
        e += 0.5 * vdot(ens.vel(i), ens.vel(i)) / ens.mass[i];
    const double w = 0.5 / double(ens.n);
    for (int i = 0; i < ens.n; ++i)
        for (int j = 0; j < ens.n; ++j)
            e += w * model.pair_gradient.pair_potential(
                     ens.box.delta(ens.pos(i), ens.pos(j)));
    return e;
}

double velocity_diameter(const ParticleEnsemble& ens) {
    double d = 0.0;
    for (int i = 0; i < ens.n; ++i)
        for (int j = i + 1; j < ens.n; ++j)
            d = std::max(d, vnorm(vsub(ens.vel(i), ens.vel(j))));
    return d;
}

} // namespace mfl
