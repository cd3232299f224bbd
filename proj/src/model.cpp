#include "meanfield/model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

namespace mfl {

ModelKind model_kind_from_name(const std::string& name) {
    static const std::map<std::string, ModelKind> table{
        {"two_body", ModelKind::TwoBody},
        {"cucker_smale", ModelKind::CuckerSmale},
        {"topological", ModelKind::Topological},
        {"chemotaxis", ModelKind::Chemotaxis},
        {"multi_agent", ModelKind::MultiAgent},
    };
    auto it = table.find(name);
    if (it == table.end()) throw ValidationError("unknown model kind: " + name);
    return it->second;
}

std::string model_kind_name(ModelKind kind) {
    switch (kind) {
        case ModelKind::TwoBody: return "two_body";
        case ModelKind::CuckerSmale: return "cucker_smale";
        case ModelKind::Topological: return "topological";
        case ModelKind::Chemotaxis: return "chemotaxis";
        case ModelKind::MultiAgent: return "multi_agent";
    }
    return "two_body";
}

void ModelSpec::validate() const {
    pair_gradient.validate();
    if (cs.lambda < 0.0) throw ValidationError("model: cs lambda must be >= 0");
    if (cs.R <= 0.0) throw ValidationError("model: cs R must be > 0");
    if (cs.beta < 0.0) throw ValidationError("model: cs beta must be >= 0");
    if (cs.sign != 1 && cs.sign != -1) throw ValidationError("model: cs sign must be +-1");
    topo.K.validate();
    if (topo.sign != 1 && topo.sign != -1) throw ValidationError("model: topo sign must be +-1");
    if (chem.eta < 0.0) throw ValidationError("model: chem eta must be >= 0");
    if (chem.kappa < 0.0) throw ValidationError("model: chem kappa must be >= 0");
    if (chem.D < 0.0) throw ValidationError("model: chem D must be >= 0");
    if (kind == ModelKind::Chemotaxis) {
        if (chem.chi.radius <= 0.0)
            throw ValidationError("model: chi radius must be > 0");
        if (!(chi_mass_positive()))
            throw ValidationError("model: chi must have strictly positive mass");
    }
    if (!(mass_scale_eps > 0.0 && mass_scale_eps <= 1.0))
        throw ValidationError("model: mass scale eps must be in (0, 1]");
    if (kind == ModelKind::MultiAgent && agent.confidence <= 0.0)
        throw ValidationError("model: agent confidence radius must be > 0");
}

bool ModelSpec::chi_mass_positive() const {
    // Sampled check that the deposition kernel carries positive mass.
    const Bump& chi = chem.chi;
    double acc = 0.0;
    for (int i = 0; i < 32; ++i) acc += chi.value(chi.radius * i / 32.0);
    return acc > 0.0;
}

double ModelSpec::force_lipschitz_bound() const {
    double L = 0.0;
    switch (kind) {
        case ModelKind::TwoBody:
            L = pair_gradient.lipschitz_bound();
            break;
        case ModelKind::CuckerSmale:
            // weight <= 1 in v; |dw/dr| <= beta/R in x times velocity scale.
            L = cs.lambda * (1.0 + cs.beta / cs.R);
            break;
        case ModelKind::Topological:
            L = topo.K.eval(0.0) + topo.K.lipschitz();
            break;
        case ModelKind::Chemotaxis:
            L = pair_gradient.lipschitz_bound() + cs.lambda * (1.0 + cs.beta / cs.R) +
                chem.eta * (chem.chi.radius > 0.0 ? chem.chi.lipschitz() : 0.0);
            break;
        case ModelKind::MultiAgent:
            L = 2.0; // |sigma'| <= 2 for the clamped-linear confidence kernel
            break;
    }
    if (ext_force.kind == ExtForceKind::LinearTrap) L += ext_force.amplitude;
    if (friction) L += 1.0;
    return L;
}

ParticleEnsemble ParticleEnsemble::make(int n, int dim, const Box& box, double mass) {
    if (n < 1) throw ValidationError("ensemble: N must be >= 1");
    if (dim < 1 || dim > 3) throw ValidationError("ensemble: dim must be 1..3");
    ParticleEnsemble e;
    e.n = n;
    e.dim = dim;
    e.box = box;
    e.x.assign(std::size_t(n) * dim, 0.0);
    e.v.assign(std::size_t(n) * dim, 0.0);
    e.mass.assign(n, mass);
    return e;
}

void ParticleEnsemble::validate() const {
    if (n < 1) throw ValidationError("ensemble: N must be >= 1");
    for (double c : x)
        if (!std::isfinite(c)) throw NumericalError("ensemble: non-finite position");
    for (double c : v)
        if (!std::isfinite(c)) throw NumericalError("ensemble: non-finite velocity");
    for (double m : mass)
        if (!(m > 0.0)) throw ValidationError("ensemble: masses must be > 0");
}

double rank_function(const ParticleEnsemble& ens, int i, double r) {
    if (i < 0 || i >= ens.n) throw ValidationError("rank function: index out of range");
    if (r < 0.0) throw ValidationError("rank function: r must be >= 0");
    const Vec xi = ens.pos(i);
    int count = 0;
    for (int k = 0; k < ens.n; ++k)
        if (ens.box.distance(ens.pos(k), xi) <= r) ++count; // ties count inside
    return double(count) / double(ens.n);
}

namespace {

Vec pair_sum_force(const ModelSpec& model, const ParticleEnsemble& ens, int i) {
    const Vec xi = ens.pos(i);
    const Vec vi = ens.vel(i);
    const double invn = 1.0 / double(ens.n);
    Vec acc = vzero();

    switch (model.kind) {
        case ModelKind::TwoBody: {
            for (int j = 0; j < ens.n; ++j)
                acc = vadd(acc, model.pair_gradient.eval(ens.box.delta(xi, ens.pos(j))));
            return vscale(invn, acc);
        }
        case ModelKind::CuckerSmale: {
            const auto& p = model.cs;
            for (int j = 0; j < ens.n; ++j) {
                const double r = ens.box.distance(xi, ens.pos(j));
                const double w = cs_weight(r, p.R, p.beta);
                acc = vadd(acc, vscale(w * p.sign, vsub(vi, ens.vel(j))));
            }
            return vscale(p.lambda * invn, acc);
        }
        case ModelKind::Topological: {
            // rank of j among i's neighbours via one sorted distance pass
            std::vector<double> dist(ens.n);
            for (int k = 0; k < ens.n; ++k) dist[k] = ens.box.distance(xi, ens.pos(k));
            std::vector<double> sorted = dist;
            std::sort(sorted.begin(), sorted.end());
            for (int j = 0; j < ens.n; ++j) {
                const auto ub = std::upper_bound(sorted.begin(), sorted.end(), dist[j]);
                const double m = double(ub - sorted.begin()) / double(ens.n);
                const double w = model.topo.K.eval(m);
                acc = vadd(acc, vscale(w * model.topo.sign, vsub(vi, ens.vel(j))));
            }
            return vscale(invn, acc);
        }
        case ModelKind::Chemotaxis: {
            const auto& p = model.cs;
            for (int j = 0; j < ens.n; ++j) {
                const Vec z = ens.box.delta(xi, ens.pos(j));
                if (model.pair_gradient.active())
                    acc = vadd(acc, model.pair_gradient.eval(z));
                if (p.lambda > 0.0) {
                    const double w = p.lambda * cs_weight(vnorm(z), p.R, p.beta);
                    acc = vadd(acc, vscale(w * p.sign, vsub(vi, ens.vel(j))));
                }
            }
            return vscale(invn, acc);
        }
        case ModelKind::MultiAgent: {
            for (int j = 0; j < ens.n; ++j) {
                const Vec z = ens.box.delta(xi, ens.pos(j));
                const double w = model.agent.weight(i, j, ens.n);
                acc = vadd(acc, vscale(w, model.agent.sigma(z)));
            }
            return vscale(invn, acc);
        }
    }
    return acc;
}

} // namespace

Vec eval_force(const ModelSpec& model, const ParticleEnsemble& ens, int i) {
    if (i < 0 || i >= ens.n) throw ValidationError("eval_force: index out of range");
    const Vec xi = ens.pos(i);
    if (!vfinite(xi) || !vfinite(ens.vel(i)))
        throw NumericalError("eval_force: non-finite input state");

    Vec f = pair_sum_force(model, ens, i);

    if (model.kind == ModelKind::Chemotaxis) {
        if (!ens.chem)
            throw ValidationError("eval_force: chemotaxis model requires a chemical field");
        f = vadd(f, vscale(model.chem.eta, chem_gradient(*ens.chem, xi)));
    }
    if (model.ext_force.kind != ExtForceKind::None)
        f = vadd(f, model.ext_force.eval(xi));
    if (model.friction) f = vsub(f, ens.vel(i));
    return f;
}

std::vector<Vec> eval_all_forces(const ModelSpec& model, const ParticleEnsemble& ens) {
    std::vector<Vec> out(ens.n);

    // Linear kernels in free space: the (1/N)-sum collapses onto the mean
    // position, so the whole evaluation is O(N) instead of O(N^2).
    const auto gk = model.pair_gradient.kind;
    if (model.kind == ModelKind::TwoBody &&
        ens.box.boundary == Boundary::Free &&
        (gk == GradKernelKind::Harmonic || gk == GradKernelKind::HarmonicRepulsive)) {
        Vec mean = vzero();
        for (int i = 0; i < ens.n; ++i) mean = vadd(mean, ens.pos(i));
        mean = vscale(1.0 / double(ens.n), mean);
        const double a = model.pair_gradient.amplitude *
                         (gk == GradKernelKind::Harmonic ? -1.0 : 1.0);
        for (int i = 0; i < ens.n; ++i) {
            Vec f = vscale(a, vsub(ens.pos(i), mean));
            if (model.ext_force.kind != ExtForceKind::None)
                f = vadd(f, model.ext_force.eval(ens.pos(i)));
            if (model.friction) f = vsub(f, ens.vel(i));
            out[i] = f;
        }
        return out;
    }

    for (int i = 0; i < ens.n; ++i) out[i] = eval_force(model, ens, i);
    return out;
}

} // namespace mfl
