#include "meanfield/hydro.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mfl {

void HydroGrid::validate() const {
    if (nx < 8) throw ValidationError("hydro grid: need at least 8 cells");
    if (!(xmax > xmin)) throw ValidationError("hydro grid: empty extent");
}

HydroState HydroState::make(const HydroGrid& grid) {
    grid.validate();
    HydroState s;
    s.grid = grid;
    s.mu.assign(grid.nx, 0.0);
    s.q.assign(grid.nx, 0.0);
    s.psi.assign(grid.nx, 0.0);
    return s;
}

double HydroState::mass() const {
    double m = 0.0;
    for (double v : mu) m += v;
    return m * grid.dx();
}

double HydroState::momentum_total() const {
    double m = 0.0;
    for (double v : q) m += v;
    return m * grid.dx();
}

std::vector<double> HydroState::velocity() const {
    double mu_max = 0.0;
    for (double v : mu) mu_max = std::max(mu_max, v);
    const double floor = 1e-12 * mu_max;
    std::vector<double> u(mu.size(), 0.0);
    for (std::size_t i = 0; i < mu.size(); ++i)
        u[i] = mu[i] > floor ? q[i] / mu[i] : 0.0;
    return u;
}

void HydroState::validate() const {
    for (double v : mu)
        if (!std::isfinite(v)) throw NumericalError("hydro: non-finite density");
    for (double v : q)
        if (!std::isfinite(v)) throw NumericalError("hydro: non-finite momentum");
}

namespace {

int wrap(int i, int n) { return (i % n + n) % n; }

// Nonlocal momentum source mu(x) int f(x - y; u(x) - u(y)) mu(y) dy.
std::vector<double> nonlocal_source(const HydroState& s, const ModelSpec& model,
                                    const std::vector<double>& u) {
    const int n = s.grid.nx;
    const double dx = s.grid.dx();
    const Box bx = s.grid.xbox();
    std::vector<double> src(n, 0.0);

    const bool pair = (model.kind == ModelKind::TwoBody ||
                       model.kind == ModelKind::Chemotaxis) &&
                      model.pair_gradient.active();
    const bool cs = model.kind == ModelKind::CuckerSmale ||
                    (model.kind == ModelKind::Chemotaxis && model.cs.lambda > 0.0);
    if (model.kind == ModelKind::MultiAgent)
        throw ValidationError("euler: multi-agent systems have no exchangeable mean field");

    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        if (model.kind == ModelKind::Topological) {
            std::vector<double> dist(n);
            for (int k = 0; k < n; ++k)
                dist[k] = std::abs(bx.delta(s.grid.x(i), s.grid.x(k), 0));
            std::vector<int> order(n);
            for (int k = 0; k < n; ++k) order[k] = k;
            std::sort(order.begin(), order.end(),
                      [&](int a, int b) { return dist[a] < dist[b]; });
            double cum = 0.0;
            std::vector<double> rank(n);
            for (int q = 0; q < n; ++q) {
                cum += s.mu[order[q]] * dx;
                rank[order[q]] = std::min(cum, 1.0);
            }
            for (int k = 0; k < n; ++k)
                acc += model.topo.K.eval(rank[k]) * model.topo.sign *
                       (u[i] - u[k]) * s.mu[k];
        } else {
            for (int k = 0; k < n; ++k) {
                const double d = bx.delta(s.grid.x(i), s.grid.x(k), 0);
                if (pair) {
                    double gz = model.pair_gradient.eval({d, 0, 0})[0];
                    // symmetrize the periodized kernel at the antipode of an
                    // even grid (it jumps there; trapezoid takes the average)
                    if (n % 2 == 0 && ((k - i) % n + n) % n == n / 2)
                        gz = 0.5 * (gz + model.pair_gradient.eval({-d, 0, 0})[0]);
                    acc += gz * s.mu[k];
                }
                if (cs)
                    acc += model.cs.lambda * cs_weight(std::abs(d), model.cs.R, model.cs.beta) *
                           model.cs.sign * (u[i] - u[k]) * s.mu[k];
            }
        }
        src[i] = s.mu[i] * acc * dx;
    }
    return src;
}

// chi * mu by periodic quadrature on the hydro grid.
std::vector<double> chi_convolution(const HydroState& s, const Bump& chi) {
    const int n = s.grid.nx;
    const double dx = s.grid.dx();
    const Box bx = s.grid.xbox();
    std::vector<double> src(n, 0.0);
    const int reach = std::min(n / 2, int(std::ceil(chi.radius / dx)) + 1);
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int o = -reach; o <= reach; ++o) {
            const int k = wrap(i + o, n);
            acc += chi.value(std::abs(bx.delta(s.grid.x(i), s.grid.x(k), 0))) * s.mu[k];
        }
        src[i] = acc * dx;
    }
    return src;
}

void step_chemical_hydro(HydroState& s, const ModelSpec& model, double dt,
                         double eps) {
    const auto src = chi_convolution(s, model.chem.chi);
    const double dx = s.grid.dx();
    const int n = s.grid.nx;
    // auto-substep to the explicit diffusion bound (time scale dt/eps)
    const double limit = 0.45 * dx * dx / std::max(model.chem.D, 1e-30);
    const int nsub = std::max(1, int(std::ceil((dt / eps) / limit)));
    const double dts = dt / eps / nsub;
    std::vector<double> next(n);
    for (int sstep = 0; sstep < nsub; ++sstep) {
        for (int i = 0; i < n; ++i) {
            const double lap = (s.psi[wrap(i + 1, n)] - 2.0 * s.psi[i] +
                                s.psi[wrap(i - 1, n)]) / (dx * dx);
            next[i] = s.psi[i] +
                      dts * (model.chem.D * lap - model.chem.kappa * s.psi[i] + src[i]);
        }
        s.psi.swap(next);
    }
}

void euler_core(HydroState& s, const ModelSpec& model, double dt, double eps,
                bool friction) {
    const int n = s.grid.nx;
    const double dx = s.grid.dx();
    const std::vector<double> u = s.velocity();

    double umax = 0.0;
    for (double v : u) umax = std::max(umax, std::abs(v));
    if (umax * dt / dx > 0.9 + 1e-12)
        throw CflError("euler: hyperbolic CFL violated (max|u| dt / dx > 0.9)");

    // local Lax-Friedrichs fluxes for (mu, q) with wave speed max|u|
    std::vector<double> fmu(n + 1, 0.0), fq(n + 1, 0.0);
    for (int i = 0; i < n; ++i) {
        const int l = i, r = wrap(i + 1, n);
        const double a = std::max(std::abs(u[l]), std::abs(u[r])) + 1e-14;
        fmu[i + 1] = 0.5 * (s.mu[l] * u[l] + s.mu[r] * u[r]) - 0.5 * a * (s.mu[r] - s.mu[l]);
        fq[i + 1] = 0.5 * (s.q[l] * u[l] + s.q[r] * u[r]) - 0.5 * a * (s.q[r] - s.q[l]);
    }
    fmu[0] = fmu[n];
    fq[0] = fq[n];

    std::vector<double> source = nonlocal_source(s, model, u);
    if (model.kind == ModelKind::Chemotaxis && model.chem.eta > 0.0) {
        for (int i = 0; i < n; ++i) {
            const double dpsi = (s.psi[wrap(i + 1, n)] - s.psi[wrap(i - 1, n)]) / (2.0 * dx);
            source[i] += model.chem.eta * s.mu[i] * dpsi;
        }
    }
    if (s.eps_p != 0.0) {
        // pressure flux eps_p * mu dmu, centered
        std::vector<double> p(n + 1, 0.0);
        for (int i = 0; i < n; ++i) {
            const int r = wrap(i + 1, n);
            p[i + 1] = s.eps_p * 0.5 * (s.mu[i] + s.mu[r]) * (s.mu[r] - s.mu[i]) / dx;
        }
        p[0] = p[n];
        for (int i = 0; i < n; ++i) source[i] += (p[i + 1] - p[i]) / dx;
    }

    std::vector<double> mu_next(n), q_next(n);
    for (int i = 0; i < n; ++i) {
        mu_next[i] = s.mu[i] - dt / dx * (fmu[i + 1] - fmu[i]);
        const double rhs = source[i] - (fq[i + 1] - fq[i]) / dx;
        if (friction) {
            // dq/dt = (rhs - q)/eps with rhs frozen: exact relaxation
            const double decay = std::exp(-dt / eps);
            q_next[i] = rhs + (s.q[i] - rhs) * decay;
        } else {
            q_next[i] = s.q[i] + dt / eps * rhs;
        }
        if (mu_next[i] < 0.0 && mu_next[i] > -1e-14) mu_next[i] = 0.0;
    }
    s.mu.swap(mu_next);
    s.q.swap(q_next);

    if (model.kind == ModelKind::Chemotaxis) step_chemical_hydro(s, model, dt, eps);
    s.validate();
}

} // namespace

void step_euler(HydroState& s, const ModelSpec& model, double dt) {
    euler_core(s, model, dt, 1.0, false);
}

void step_euler_eps(HydroState& s, const ModelSpec& model, double dt,
                    bool include_friction) {
    if (!(s.eps > 0.0)) throw ValidationError("euler eps: eps must be > 0");
    euler_core(s, model, dt, s.eps, include_friction);
}

std::vector<double> solve_screened_poisson(const HydroGrid& grid,
                                           const std::vector<double>& mu,
                                           double kappa) {
    const int n = grid.nx;
    if (int(mu.size()) != n) throw ValidationError("poisson: size mismatch");
    if (!(kappa > 0.0))
        throw ValidationError("poisson: kappa must be > 0 for a unique solution");
    const double h2 = grid.dx() * grid.dx();
    // (psi[i-1] - (2 + kappa h^2) psi[i] + psi[i+1]) = -mu[i] h^2, cyclic
    const double diag = -(2.0 + kappa * h2);
    const double off = 1.0;

    auto thomas = [&](std::vector<double> rhs, double d0, double dn) {
        std::vector<double> c(n, 0.0), sol(n, 0.0);
        double d_prev = d0;
        c[0] = off / d_prev;
        rhs[0] /= d_prev;
        for (int i = 1; i < n - 1; ++i) {
            const double m = diag - off * c[i - 1];
            c[i] = off / m;
            rhs[i] = (rhs[i] - off * rhs[i - 1]) / m;
        }
        const double m = dn - off * c[n - 2];
        rhs[n - 1] = (rhs[n - 1] - off * rhs[n - 2]) / m;
        sol[n - 1] = rhs[n - 1];
        for (int i = n - 2; i >= 0; --i) sol[i] = rhs[i] - c[i] * sol[i + 1];
        return sol;
    };

    // Sherman-Morrison for the periodic corner terms
    const double gamma = -diag;
    std::vector<double> rhs(n);
    for (int i = 0; i < n; ++i) rhs[i] = -mu[i] * h2;
    std::vector<double> y = thomas(rhs, diag - gamma, diag - off * off / gamma);
    std::vector<double> uvec(n, 0.0);
    uvec[0] = gamma;
    uvec[n - 1] = off;
    std::vector<double> z = thomas(uvec, diag - gamma, diag - off * off / gamma);
    const double frac = (y[0] + off * y[n - 1] / gamma) /
                        (1.0 + z[0] + off * z[n - 1] / gamma);
    std::vector<double> psi(n);
    for (int i = 0; i < n; ++i) psi[i] = y[i] - frac * z[i];
    for (double v : psi)
        if (!std::isfinite(v)) throw NumericalError("poisson: solver produced non-finite values");
    return psi;
}

std::vector<double> closure_velocity(const HydroGrid& grid,
                                     const std::vector<double>& mu,
                                     const std::vector<double>& psi, double eta) {
    const int n = grid.nx;
    const double dx = grid.dx();
    std::vector<double> u(n, 0.0);
    for (int i = 0; i < n; ++i) {
        const double dmu = (mu[wrap(i + 1, n)] - mu[wrap(i - 1, n)]) / (2.0 * dx);
        const double dpsi = (psi[wrap(i + 1, n)] - psi[wrap(i - 1, n)]) / (2.0 * dx);
        u[i] = eta * dpsi - dmu;
    }
    return u;
}

void step_keller_segel(std::vector<double>& mu, std::vector<double>& psi,
                       const HydroGrid& grid, const ModelSpec& model, double dt,
                       bool gradient_drift) {
    const int n = grid.nx;
    const double dx = grid.dx();
    double mu_max = 0.0;
    for (double v : mu) mu_max = std::max(mu_max, v);
    if (mu_max * dt / (dx * dx) > 0.25 + 1e-12)
        throw CflError("keller-segel: parabolic CFL violated (max(mu) dt / dx^2 > 1/4)");

    psi = solve_screened_poisson(grid, mu, model.chem.kappa);
    const double eta = model.chem.eta;

    // flux D = mu dmu - eta mu dpsi (gradient form) or mu dmu - eta mu psi
    std::vector<double> flux(n + 1, 0.0);
    for (int i = 0; i < n; ++i) {
        const int r = wrap(i + 1, n);
        const double mbar = 0.5 * (mu[i] + mu[r]);
        const double dmu = (mu[r] - mu[i]) / dx;
        const double drift = gradient_drift ? (psi[r] - psi[i]) / dx
                                            : 0.5 * (psi[i] + psi[r]);
        flux[i + 1] = mbar * (dmu - eta * drift);
    }
    flux[0] = flux[n];
    for (int i = 0; i < n; ++i) {
        mu[i] += dt / dx * (flux[i + 1] - flux[i]);
        if (mu[i] < 0.0 && mu[i] > -1e-14) mu[i] = 0.0;
    }
    for (double v : mu)
        if (!std::isfinite(v)) throw NumericalError("keller-segel: non-finite density");
}

} // namespace mfl
