#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "meanfield/model.hpp"
#include "meanfield/rng.hpp"

#include <algorithm>
#include <numeric>

using namespace mfl;

namespace {

Box free_box(int dim) {
    Box b;
    b.dim = dim;
    b.lo = {-100, -100, -100};
    b.hi = {100, 100, 100};
    b.boundary = Boundary::Free;
    return b;
}

ParticleEnsemble line_ensemble(std::initializer_list<double> xs,
                               std::initializer_list<double> vs) {
    ParticleEnsemble e = ParticleEnsemble::make(int(xs.size()), 1, free_box(1));
    std::copy(xs.begin(), xs.end(), e.x.begin());
    std::copy(vs.begin(), vs.end(), e.v.begin());
    return e;
}

ParticleEnsemble random_ensemble(int n, int dim, std::uint64_t seed) {
    ParticleEnsemble e = ParticleEnsemble::make(n, dim, free_box(dim));
    const CounterRng rng{seed, 0};
    for (std::size_t k = 0; k < e.x.size(); ++k) {
        e.x[k] = rng.uniform(2 * k, -1.0, 1.0);
        e.v[k] = rng.uniform(2 * k + 1, -1.0, 1.0);
    }
    return e;
}

// independent direct-summation oracle for the pairwise laws
Vec oracle_force(const ModelSpec& m, const ParticleEnsemble& e, int i) {
    Vec acc = vzero();
    for (int j = 0; j < e.n; ++j) {
        const Vec z = e.box.delta(e.pos(i), e.pos(j));
        switch (m.kind) {
            case ModelKind::TwoBody:
                acc = vadd(acc, m.pair_gradient.eval(z));
                break;
            case ModelKind::CuckerSmale: {
                const double w =
                    m.cs.lambda * cs_weight(vnorm(z), m.cs.R, m.cs.beta);
                acc = vadd(acc, vscale(w * m.cs.sign, vsub(e.vel(i), e.vel(j))));
                break;
            }
            case ModelKind::Topological: {
                const double rank = rank_function(e, i, vnorm(z));
                const double w = m.topo.K.eval(rank);
                acc = vadd(acc, vscale(w * m.topo.sign, vsub(e.vel(i), e.vel(j))));
                break;
            }
            default: break;
        }
    }
    return vscale(1.0 / e.n, acc);
}

} // namespace

TEST_CASE("two-body printed-sign force on two particles") {
    // grad V(x) = x: F_0 = (1/2)(gradV(0) + gradV(-1)) = -0.5
    ModelSpec m;
    m.kind = ModelKind::TwoBody;
    m.pair_gradient.kind = GradKernelKind::HarmonicRepulsive;
    m.pair_gradient.amplitude = 1.0;
    auto e = line_ensemble({0.0, 1.0}, {0.0, 0.0});
    CHECK(eval_force(m, e, 0)[0] == doctest::Approx(-0.5));
    CHECK(eval_force(m, e, 1)[0] == doctest::Approx(0.5));
}

TEST_CASE("cucker-smale printed sign on two particles") {
    ModelSpec m;
    m.kind = ModelKind::CuckerSmale;
    m.cs = {1.0, 1.0, 1.0, +1};
    auto e = line_ensemble({0.0, 1.0}, {1.0, 0.0});
    CHECK(eval_force(m, e, 0)[0] == doctest::Approx(0.25));
    m.cs.sign = -1; // aligning default
    CHECK(eval_force(m, e, 0)[0] == doctest::Approx(-0.25));
}

TEST_CASE("coincident states give zero force for every kind") {
    for (auto kind : {ModelKind::TwoBody, ModelKind::CuckerSmale,
                      ModelKind::Topological, ModelKind::MultiAgent}) {
        ModelSpec m;
        m.kind = kind;
        m.pair_gradient.kind = GradKernelKind::Harmonic;
        auto e = line_ensemble({0.3, 0.3, 0.3}, {0.7, 0.7, 0.7});
        const Vec f = eval_force(m, e, 1);
        CHECK(std::abs(f[0]) < 1e-15);
    }
}

TEST_CASE("rank function enumerated examples") {
    auto e = line_ensemble({0.0, 1.0, 2.0}, {0, 0, 0});
    CHECK(rank_function(e, 0, 1.0) == doctest::Approx(2.0 / 3.0));
    CHECK(rank_function(e, 0, 10.0) == doctest::Approx(1.0));
    CHECK(rank_function(e, 0, 0.0) == doctest::Approx(1.0 / 3.0));
    // non-decreasing in r with 1/N jumps
    double prev = 0.0;
    for (double r = 0.0; r <= 3.0; r += 0.05) {
        const double cur = rank_function(e, 1, r);
        CHECK(cur >= prev);
        CHECK(std::abs(cur * 3.0 - std::round(cur * 3.0)) < 1e-12);
        prev = cur;
    }
}

TEST_CASE("direct summation oracle over random ensembles") {
    for (auto kind :
         {ModelKind::TwoBody, ModelKind::CuckerSmale, ModelKind::Topological}) {
        ModelSpec m;
        m.kind = kind;
        m.pair_gradient.kind = GradKernelKind::Morse;
        m.pair_gradient.amplitude = 0.7;
        m.pair_gradient.width = 0.5;
        m.cs = {0.9, 0.8, 1.5, -1};
        auto e = random_ensemble(17, 2, 11);
        for (int i : {0, 5, 16}) {
            const Vec f = eval_force(m, e, i);
            const Vec o = oracle_force(m, e, i);
            for (int c = 0; c < 2; ++c)
                CHECK(f[c] == doctest::Approx(o[c]).epsilon(1e-12));
        }
    }
}

TEST_CASE("batched forces match per-index forces (harmonic fast path included)") {
    ModelSpec m;
    m.kind = ModelKind::TwoBody;
    m.pair_gradient.kind = GradKernelKind::Harmonic;
    m.pair_gradient.amplitude = 1.4;
    auto e = random_ensemble(23, 1, 3);
    const auto all = eval_all_forces(m, e);
    for (int i = 0; i < e.n; ++i)
        CHECK(all[i][0] == doctest::Approx(eval_force(m, e, i)[0]).epsilon(1e-13));
}

TEST_CASE("permutation equivariance") {
    ModelSpec m;
    m.kind = ModelKind::CuckerSmale;
    m.cs = {1.0, 1.0, 1.0, -1};
    auto e = random_ensemble(9, 1, 5);
    auto p = e;
    std::vector<int> perm(e.n);
    std::iota(perm.begin(), perm.end(), 0);
    std::reverse(perm.begin(), perm.end());
    for (int i = 0; i < e.n; ++i) {
        p.set_pos(i, e.pos(perm[i]));
        p.set_vel(i, e.vel(perm[i]));
    }
    for (int i = 0; i < e.n; ++i)
        CHECK(eval_force(m, p, i)[0] ==
              doctest::Approx(eval_force(m, e, perm[i])[0]).epsilon(1e-13));
}

TEST_CASE("odd pair gradient conserves total interaction momentum") {
    ModelSpec m;
    m.kind = ModelKind::TwoBody;
    m.pair_gradient.kind = GradKernelKind::Morse;
    m.pair_gradient.width = 0.4;
    auto e = random_ensemble(12, 2, 7);
    Vec total = vzero();
    for (int i = 0; i < e.n; ++i) total = vadd(total, eval_force(m, e, i));
    CHECK(std::abs(total[0]) < 1e-13);
    CHECK(std::abs(total[1]) < 1e-13);
}

TEST_CASE("equal velocities kill alignment forces") {
    for (auto kind : {ModelKind::CuckerSmale, ModelKind::Topological}) {
        ModelSpec m;
        m.kind = kind;
        auto e = random_ensemble(8, 1, 13);
        for (int i = 0; i < e.n; ++i) e.set_vel(i, {0.42, 0, 0});
        for (int i = 0; i < e.n; ++i) CHECK(std::abs(eval_force(m, e, i)[0]) < 1e-15);
    }
}

TEST_CASE("force is Lipschitz within the advertised bound") {
    ModelSpec m;
    m.kind = ModelKind::CuckerSmale;
    m.cs = {1.2, 0.9, 1.0, -1};
    const double L = m.force_lipschitz_bound();
    auto e = random_ensemble(6, 1, 17);
    auto e2 = e;
    const double h = 1e-5;
    e2.x[2] += h; // perturb one coordinate
    double df = 0.0;
    for (int i = 0; i < e.n; ++i)
        df = std::max(df, std::abs(eval_force(m, e2, i)[0] - eval_force(m, e, i)[0]));
    CHECK(df <= L * h * (1.0 + 1e-6));
}

TEST_CASE("multi-agent Krause force on a hand-computed pair") {
    ModelSpec m;
    m.kind = ModelKind::MultiAgent;
    m.agent.confidence = 1.0;
    // sigma(z) = -z (1 - |z|), z = x_0 - x_1 = -0.5 -> sigma = 0.25
    auto e = line_ensemble({0.0, 0.5}, {0, 0});
    CHECK(eval_force(m, e, 0)[0] == doctest::Approx(0.125)); // (1/2) sigma
    CHECK(eval_force(m, e, 1)[0] == doctest::Approx(-0.125));
    // outside the confidence radius the coupling vanishes
    auto far = line_ensemble({0.0, 3.0}, {0, 0});
    CHECK(eval_force(m, far, 0)[0] == doctest::Approx(0.0));
}

TEST_CASE("chemotaxis kind requires the chemical field") {
    ModelSpec m;
    m.kind = ModelKind::Chemotaxis;
    m.chem.eta = 1.0;
    m.chem.chi = Bump::make(0.25, 1);
    auto e = line_ensemble({0.0, 0.5}, {0, 0});
    CHECK_THROWS_AS(eval_force(m, e, 0), ValidationError);
}

TEST_CASE("validation rejects bad parameters") {
    ModelSpec m;
    m.cs.R = 0.0;
    CHECK_THROWS_AS(m.validate(), ValidationError);
    m = ModelSpec{};
    m.mass_scale_eps = 0.0;
    CHECK_THROWS_AS(m.validate(), ValidationError);
    m = ModelSpec{};
    m.cs.sign = 2;
    CHECK_THROWS_AS(m.validate(), ValidationError);
}
