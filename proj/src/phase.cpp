#include "meanfield/phase.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace mfl {

void PhaseGrid::validate() const {
    if (nx < 8 || nv < 8) throw ValidationError("phase grid: need at least 8x8 cells");
    if (!(xmax > xmin) || !(vmax > vmin))
        throw ValidationError("phase grid: empty extent");
}

PhaseDensity PhaseDensity::zero(const PhaseGrid& grid) {
    grid.validate();
    PhaseDensity r;
    r.grid = grid;
    r.rho.assign(std::size_t(grid.nx) * grid.nv, 0.0);
    return r;
}

double PhaseDensity::mass() const {
    double m = 0.0;
    for (double v : rho) m += v;
    return m * grid.cell();
}

void PhaseDensity::renormalize() {
    const double m = mass();
    if (!(m > 0.0)) throw NumericalError("phase density: nonpositive mass");
    for (double& v : rho) v /= m;
}

double PhaseDensity::boundary_density() const {
    double b = 0.0;
    for (int i = 0; i < grid.nx; ++i)
        b = std::max({b, at(i, 0), at(i, grid.nv - 1)});
    return b;
}

MomentFields moments(const PhaseDensity& r) {
    const int nx = r.grid.nx, nv = r.grid.nv;
    const double dv = r.grid.dv();
    MomentFields m;
    m.mu.assign(nx, 0.0);
    m.momentum.assign(nx, 0.0);
    m.u.assign(nx, 0.0);
    double mu_max = 0.0;
    for (int i = 0; i < nx; ++i) {
        double s0 = 0.0, s1 = 0.0;
        for (int j = 0; j < nv; ++j) {
            s0 += r.at(i, j);
            s1 += r.at(i, j) * r.grid.v(j);
        }
        m.mu[i] = s0 * dv;
        m.momentum[i] = s1 * dv;
        mu_max = std::max(mu_max, m.mu[i]);
    }
    const double floor = 1e-12 * mu_max;
    for (int i = 0; i < nx; ++i)
        m.u[i] = m.mu[i] > floor ? m.momentum[i] / m.mu[i] : 0.0;
    return m;
}

double KineticForce::max_abs(const PhaseGrid& g) const {
    double f = 0.0;
    for (std::size_t i = 0; i < base.size(); ++i) {
        f = std::max(f, std::abs(base[i] + slope[i] * g.vmin));
        f = std::max(f, std::abs(base[i] + slope[i] * g.vmax));
    }
    return f;
}

std::vector<double> convolve_chi(const PhaseGrid& grid, const std::vector<double>& mu,
                                 const Bump& chi) {
    const int nx = grid.nx;
    const double dx = grid.dx();
    const Box bx = grid.xbox();
    std::vector<double> src(nx, 0.0);
    const int reach = std::min(nx / 2, int(std::ceil(chi.radius / dx)) + 1);
    for (int i = 0; i < nx; ++i) {
        double s = 0.0;
        for (int o = -reach; o <= reach; ++o) {
            const int k = ((i + o) % nx + nx) % nx;
            const double r = std::abs(bx.delta(grid.x(i), grid.x(k), 0));
            s += chi.value(r) * mu[k];
        }
        src[i] = s * dx;
    }
    return src;
}

KineticForce vlasov_force_field(const PhaseDensity& r, const ModelSpec& model,
                                const ChemicalField* psi) {
    const int nx = r.grid.nx;
    const double dx = r.grid.dx();
    const Box bx = r.grid.xbox();
    const MomentFields m = moments(r);

    KineticForce f;
    f.base.assign(nx, 0.0);
    f.slope.assign(nx, 0.0);

    switch (model.kind) {
        case ModelKind::TwoBody: {
            for (int i = 0; i < nx; ++i) {
                double acc = 0.0;
                for (int k = 0; k < nx; ++k) {
                    const Vec z{bx.delta(r.grid.x(i), r.grid.x(k), 0), 0, 0};
                    double gz = model.pair_gradient.eval(z)[0];
                    // the periodized kernel jumps at the antipode of an even
                    // grid; the trapezoid value there is the two-sided average
                    if (nx % 2 == 0 && ((k - i) % nx + nx) % nx == nx / 2)
                        gz = 0.5 * (gz + model.pair_gradient.eval({-z[0], 0, 0})[0]);
                    acc += gz * m.mu[k];
                }
                f.base[i] = acc * dx;
            }
            break;
        }
        case ModelKind::CuckerSmale: {
            const auto& p = model.cs;
            for (int i = 0; i < nx; ++i) {
                double a = 0.0, b = 0.0;
                for (int k = 0; k < nx; ++k) {
                    const double w =
                        cs_weight(std::abs(bx.delta(r.grid.x(i), r.grid.x(k), 0)), p.R, p.beta);
                    a += w * m.mu[k];
                    b += w * m.momentum[k];
                }
                f.slope[i] = p.sign * p.lambda * a * dx;
                f.base[i] = -p.sign * p.lambda * b * dx;
            }
            break;
        }
        case ModelKind::Topological: {
            // continuum mass-rank M(x, r) = integral of mu over {|y-x| <= r}
            for (int i = 0; i < nx; ++i) {
                std::vector<double> dist(nx);
                for (int k = 0; k < nx; ++k)
                    dist[k] = std::abs(bx.delta(r.grid.x(i), r.grid.x(k), 0));
                std::vector<int> order(nx);
                for (int k = 0; k < nx; ++k) order[k] = k;
                std::sort(order.begin(), order.end(),
                          [&](int a, int b) { return dist[a] < dist[b]; });
                std::vector<double> rank(nx);
                double cum = 0.0;
                for (int q = 0; q < nx; ++q) {
                    cum += m.mu[order[q]] * dx;
                    rank[order[q]] = std::min(cum, 1.0);
                }
                double a = 0.0, b = 0.0;
                for (int k = 0; k < nx; ++k) {
                    const double w = model.topo.K.eval(rank[k]);
                    a += w * m.mu[k];
                    b += w * m.momentum[k];
                }
                f.slope[i] = model.topo.sign * a * dx;
                f.base[i] = -model.topo.sign * b * dx;
            }
            break;
        }
        case ModelKind::Chemotaxis: {
            const auto& p = model.cs;
            for (int i = 0; i < nx; ++i) {
                double base = 0.0, a = 0.0, b = 0.0;
                for (int k = 0; k < nx; ++k) {
                    const double d = bx.delta(r.grid.x(i), r.grid.x(k), 0);
                    if (model.pair_gradient.active()) {
                        double gz = model.pair_gradient.eval({d, 0, 0})[0];
                        if (nx % 2 == 0 && ((k - i) % nx + nx) % nx == nx / 2)
                            gz = 0.5 * (gz + model.pair_gradient.eval({-d, 0, 0})[0]);
                        base += gz * m.mu[k];
                    }
                    if (p.lambda > 0.0) {
                        const double w = cs_weight(std::abs(d), p.R, p.beta);
                        a += w * m.mu[k];
                        b += w * m.momentum[k];
                    }
                }
                f.base[i] = (base - p.sign * p.lambda * b) * dx;
                f.slope[i] = p.sign * p.lambda * a * dx;
            }
            if (psi) {
                for (int i = 0; i < nx; ++i)
                    f.base[i] += model.chem.eta *
                                 chem_gradient(*psi, {r.grid.x(i), 0, 0})[0];
            }
            break;
        }
        case ModelKind::MultiAgent:
            throw ValidationError(
                "vlasov force: multi-agent systems have no exchangeable mean field");
    }

    if (model.ext_force.kind != ExtForceKind::None)
        for (int i = 0; i < nx; ++i)
            f.base[i] += model.ext_force.eval({r.grid.x(i), 0, 0})[0];
    return f;
}

namespace {

// Uniform-shift periodic advection by cubic Lagrange interpolation;
// conservative because every target uses the same stencil weights.
void shift_periodic_cubic(std::vector<double>& row, double shift_cells) {
    const int n = int(row.size());
    const double delta = shift_cells;
    const int o = int(std::floor(-delta));
    const double t = -delta - o;
    const double wm1 = -t * (t - 1.0) * (t - 2.0) / 6.0;
    const double w0 = (t * t - 1.0) * (t - 2.0) / 2.0;
    const double w1 = -t * (t + 1.0) * (t - 2.0) / 2.0;
    const double w2 = t * (t * t - 1.0) / 6.0;
    static thread_local std::vector<double> tmp;
    tmp.resize(n);
    for (int i = 0; i < n; ++i) {
        const int base = i + o;
        const auto idx = [&](int k) { return ((base + k) % n + n) % n; };
        tmp[i] = wm1 * row[idx(-1)] + w0 * row[idx(0)] + w1 * row[idx(1)] +
                 w2 * row[idx(2)];
    }
    row.swap(tmp);
}

inline double minmod(double a, double b) {
    if (a * b <= 0.0) return 0.0;
    return std::abs(a) < std::abs(b) ? a : b;
}

// Conservative flux-form advection of one v-column with cell velocities w_j.
// Limited linear reconstruction, zero flux through the v boundaries.
void advect_v_column(std::vector<double>& col, const std::vector<double>& w,
                     double dt, double dv) {
    const int n = int(col.size());
    static thread_local std::vector<double> flux;
    flux.assign(n + 1, 0.0);
    for (int j = 0; j < n - 1; ++j) {
        const double wf = 0.5 * (w[j] + w[j + 1]);
        if (wf >= 0.0) {
            const double sl = minmod(j > 0 ? col[j] - col[j - 1] : 0.0,
                                     col[j + 1] - col[j]);
            flux[j + 1] = wf * (col[j] + 0.5 * sl * (1.0 - wf * dt / dv));
        } else {
            const double sr = minmod(col[j + 1] - col[j],
                                     j + 2 < n ? col[j + 2] - col[j + 1] : 0.0);
            flux[j + 1] = wf * (col[j + 1] - 0.5 * sr * (1.0 + wf * dt / dv));
        }
    }
    for (int j = 0; j < n; ++j)
        col[j] -= dt / dv * (flux[j + 1] - flux[j]);
}

} // namespace

void step_vlasov(PhaseDensity& r, const ModelSpec& model, double dt,
                 ChemicalField* psi, int chem_substeps) {
    const PhaseGrid& g = r.grid;
    const double vmax = std::max(std::abs(g.vmin), std::abs(g.vmax));
    if (vmax * dt / g.dx() > 1.0 + 1e-12)
        throw CflError("vlasov: x-advection CFL violated (max|v| dt / dx > 1)");
    const double mass_before = r.mass();

    static thread_local std::vector<double> row;
    row.resize(g.nx);
    auto advect_x = [&](double half_dt) {
        for (int j = 0; j < g.nv; ++j) {
            const double shift = g.v(j) * half_dt / g.dx();
            for (int i = 0; i < g.nx; ++i) row[i] = r.at(i, j);
            shift_periodic_cubic(row, shift);
            for (int i = 0; i < g.nx; ++i) r.at(i, j) = row[i];
        }
    };

    advect_x(0.5 * dt);

    // chemical update with the current spatial density as source
    if (psi && model.kind == ModelKind::Chemotaxis) {
        const MomentFields m = moments(r);
        const auto src = convolve_chi(g, m.mu, model.chem.chi);
        const double dtc = dt / chem_substeps;
        for (int s = 0; s < chem_substeps; ++s)
            step_chemical_gridded(*psi, src, model.chem.D, model.chem.kappa, dtc);
    }

    const KineticForce f = vlasov_force_field(r, model, psi);
    if (f.max_abs(g) * dt / g.dv() > 1.0 + 1e-12)
        throw CflError("vlasov: v-advection CFL violated (max|F| dt / dv > 1)");

    static thread_local std::vector<double> col, w;
    col.resize(g.nv);
    w.resize(g.nv);
    for (int i = 0; i < g.nx; ++i) {
        for (int j = 0; j < g.nv; ++j) {
            col[j] = r.at(i, j);
            w[j] = f.base[i] + f.slope[i] * g.v(j);
        }
        advect_v_column(col, w, dt, g.dv());
        for (int j = 0; j < g.nv; ++j) r.at(i, j) = col[j];
    }

    advect_x(0.5 * dt);

    const double mass_after = r.mass();
    if (std::abs(mass_after - mass_before) > 1e-8 * std::max(1.0, mass_before))
        throw NumericalError("vlasov: mass drift above 1e-8 in one step");
    // positivity by clipping; removed mass is logged, not redistributed
    for (double& v : r.rho)
        if (v < 0.0) {
            r.clipped += -v * g.cell();
            v = 0.0;
        }
}

PhaseDensity monokinetic_init(const PhaseGrid& grid, const std::vector<double>& mu,
                              const std::vector<double>& u, double sigma_v) {
    grid.validate();
    if (int(mu.size()) != grid.nx || int(u.size()) != grid.nx)
        throw ValidationError("monokinetic init: field size mismatch");
    if (sigma_v < grid.dv())
        throw ValidationError("monokinetic init: sigma_v below grid resolution");
    PhaseDensity r = PhaseDensity::zero(grid);
    const double norm = 1.0 / (sigma_v * std::sqrt(2.0 * std::numbers::pi));
    for (int i = 0; i < grid.nx; ++i)
        for (int j = 0; j < grid.nv; ++j) {
            const double s = (grid.v(j) - u[i]) / sigma_v;
            r.at(i, j) = mu[i] * norm * std::exp(-0.5 * s * s);
        }
    r.renormalize();
    return r;
}

} // namespace mfl
