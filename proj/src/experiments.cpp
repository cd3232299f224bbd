#include "meanfield/experiments.hpp"

#include "meanfield/errors.hpp"
#include "meanfield/parallel.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

namespace mfl {

namespace fs = std::filesystem;
using nlohmann::json;

std::vector<double> periodic_gaussian(int nx, double xmin, double xmax, double mean,
                                      double sigma) {
    if (nx < 2 || !(xmax > xmin) || !(sigma > 0.0))
        throw ValidationError("periodic gaussian: bad grid or sigma");
    const double L = xmax - xmin;
    const double dx = L / nx;
    std::vector<double> mu(nx, 0.0);
    double total = 0.0;
    for (int i = 0; i < nx; ++i) {
        const double x = xmin + (i + 0.5) * dx;
        double s = 0.0;
        for (int k = -3; k <= 3; ++k) { // wrapped images
            const double d = (x - mean + k * L) / sigma;
            s += std::exp(-0.5 * d * d);
        }
        mu[i] = s;
        total += s * dx;
    }
    for (double& m : mu) m /= total;
    return mu;
}

PhaseDensity law_phase_density(const PhaseGrid& grid, const InitialLaw& law) {
    law.validate();
    const auto mx = periodic_gaussian(grid.nx, grid.xmin, grid.xmax, law.x_mean[0],
                                      law.x_sigma);
    PhaseDensity r = PhaseDensity::zero(grid);
    const double norm = 1.0 / (law.v_sigma * std::sqrt(2.0 * std::numbers::pi));
    for (int i = 0; i < grid.nx; ++i)
        for (int j = 0; j < grid.nv; ++j) {
            const double s = (grid.v(j) - law.v_mean[0]) / law.v_sigma;
            r.at(i, j) = mx[i] * norm * std::exp(-0.5 * s * s);
        }
    r.renormalize();
    return r;
}

namespace {

int step_count(const IntegratorConfig& in) {
    const double raw = in.t_final / in.dt;
    const int n = int(std::lround(raw));
    if (std::abs(raw - n) > 1e-9 * std::max(1.0, raw))
        throw ValidationError("integrator: t_final must be a multiple of dt");
    return n;
}

double l1(const std::vector<double>& a, double dx) {
    double s = 0.0;
    for (double v : a) s += std::abs(v);
    return s * dx;
}

double l1_diff(const std::vector<double>& a, const std::vector<double>& b, double dx) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
    return s * dx;
}

// Advances rho by dt, splitting into substeps that respect the x-advection
// CFL regardless of the particle-side step size.
void march_vlasov(PhaseDensity& rho, const ModelSpec& model, double dt,
                  ChemicalField* psi = nullptr, int chem_substeps = 1) {
    const double vmax =
        std::max(std::abs(rho.grid.vmin), std::abs(rho.grid.vmax));
    const int ns =
        std::max(1, int(std::ceil(vmax * dt / (0.9 * rho.grid.dx()))));
    for (int s = 0; s < ns; ++s)
        step_vlasov(rho, model, dt / ns, psi, chem_substeps);
}

} // namespace

VeCompareResult run_compare_ve(const ExperimentConfig& cfg, double eps_p) {
    if (!cfg.has_phase_grid || !cfg.has_hydro)
        throw ValidationError("compare_ve: phase_grid and hydro sections required");
    if (cfg.model.kind == ModelKind::Chemotaxis || cfg.model.kind == ModelKind::MultiAgent)
        throw ValidationError("compare_ve: unsupported model kind");
    const PhaseGrid& g = cfg.phase_grid;
    if (cfg.hydro.nx != g.nx)
        throw ValidationError("compare_ve: hydro nx must match the phase grid");

    const InitialLaw& law = cfg.plan.law;
    const auto mu0 = periodic_gaussian(g.nx, g.xmin, g.xmax, law.x_mean[0], law.x_sigma);
    const std::vector<double> u0(g.nx, law.v_mean[0]);

    PhaseDensity rho = monokinetic_init(g, mu0, u0, law.v_sigma);

    HydroGrid hg;
    hg.nx = g.nx;
    hg.xmin = g.xmin;
    hg.xmax = g.xmax;
    HydroState s = HydroState::make(hg);
    s.mu = mu0;
    for (int i = 0; i < g.nx; ++i) s.q[i] = mu0[i] * u0[i];
    s.eps_p = eps_p;

    const int steps = step_count(cfg.integrator);
    const double dt = cfg.integrator.dt;
    const double dx = hg.dx();
    const int stride = std::max(1, steps / 64);

    VeCompareResult out;
    double e_mu = 0.0, e_q = 0.0, n_mu = 0.0, n_q = 0.0;
    for (int k = 1; k <= steps; ++k) {
        step_vlasov(rho, cfg.model, dt);
        step_euler(s, cfg.model, dt);
        const MomentFields m = moments(rho);
        const double emu = l1_diff(m.mu, s.mu, dx);
        const double eq = l1_diff(m.momentum, s.q, dx);
        e_mu += emu;
        e_q += eq;
        n_mu += 0.5 * (l1(m.mu, dx) + l1(s.mu, dx));
        n_q += 0.5 * (l1(m.momentum, dx) + l1(s.q, dx));
        if (k % stride == 0 || k == steps) {
            out.times.push_back(k * dt);
            out.mu_err.push_back(emu);
            out.q_err.push_back(eq);
        }
    }
    out.mu_rel = e_mu / std::max(n_mu, 1e-300);
    out.q_rel = n_q > 1e-12 * n_mu ? e_q / n_q : e_q / std::max(n_mu, 1e-300);
    out.combined = (e_mu + e_q) / std::max(n_mu + n_q, 1e-300);
    return out;
}

PvCompareResult run_compare_pv(const ExperimentConfig& cfg) {
    if (!cfg.has_phase_grid)
        throw ValidationError("compare_pv: phase_grid section required");
    if (cfg.model.first_order())
        throw ValidationError("compare_pv: multi-agent laws have no kinetic limit here");
    std::vector<double> times = cfg.snapshot_times;
    std::sort(times.begin(), times.end());

    const auto runs = run_replicas(cfg.plan, cfg.model, cfg.integrator, times,
                                   cfg.workers);

    PhaseDensity rho = law_phase_density(cfg.phase_grid, cfg.plan.law);
    const double dt = cfg.integrator.dt;

    PvCompareResult out;
    double t = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k) {
        const int steps = int(std::lround((times[k] - t) / dt));
        for (int s = 0; s < steps; ++s) march_vlasov(rho, cfg.model, dt);
        t = times[k];
        std::vector<Snapshot> slice;
        slice.reserve(runs.size());
        for (const auto& run : runs) slice.push_back(run[k]);
        const ChaosError e = chaos_error(slice, cfg.plan.dim, cfg.plan.n_particles,
                                         rho, 1, cfg.plan.seed);
        out.times.push_back(t);
        out.w2.push_back(e.distance);
        out.estimator = e.estimator;
    }
    return out;
}

RateStudyResult run_rate_study(const ExperimentConfig& cfg) {
    if (!cfg.has_rate || !cfg.has_phase_grid)
        throw ValidationError("rate_study: rate_study and phase_grid sections required");
    const double t = cfg.rate.t;
    const double dt = cfg.integrator.dt;

    PhaseDensity rho0 = law_phase_density(cfg.phase_grid, cfg.plan.law);
    PhaseDensity rho = rho0;
    const int steps = int(std::lround(t / dt));
    for (int s = 0; s < steps; ++s) march_vlasov(rho, cfg.model, dt);

    RateStudyResult out;
    out.n_values = cfg.rate.n_values;
    std::vector<std::pair<double, double>> pairs;
    for (int n : cfg.rate.n_values) {
        ReplicaPlan plan = cfg.plan;
        plan.n_particles = n;
        const auto runs = run_replicas(plan, cfg.model, cfg.integrator, {0.0, t},
                                       cfg.workers);
        std::vector<Snapshot> at0, at1;
        at0.reserve(runs.size());
        at1.reserve(runs.size());
        for (const auto& run : runs) {
            at0.push_back(run[0]);
            at1.push_back(run[1]);
        }
        const DiscreteMeasure m1 =
            extract_marginal(at1, plan.dim, n, cfg.rate.j, cfg.model.kind);
        const DiscreteMeasure ref1 = vlasov_reference_measure(rho, 0, plan.seed);
        const double d1 =
            sliced_w2(m1, ref1, cfg.rate.directions, plan.seed).value;

        double corrected = d1;
        double d0 = 0.0;
        if (cfg.rate.subtract_noise_floor) {
            const DiscreteMeasure m0 =
                extract_marginal(at0, plan.dim, n, cfg.rate.j, cfg.model.kind);
            const DiscreteMeasure ref0 = vlasov_reference_measure(rho0, 0, plan.seed);
            d0 = sliced_w2(m0, ref0, cfg.rate.directions, plan.seed).value;
            corrected = std::sqrt(std::max(d1 * d1 - d0 * d0, 1e-12 * d1 * d1));
        }
        out.raw_distance.push_back(d1);
        out.noise_floor.push_back(d0);
        out.corrected.push_back(corrected);
        pairs.emplace_back(double(n), corrected);
    }
    out.fit = fit_rate(pairs);
    return out;
}

EpsSweepResult run_eps_sweep(const ExperimentConfig& cfg) {
    if (cfg.eps_sweep_values.empty())
        throw ValidationError("eps_sweep: no sweep values");
    EpsSweepResult out;
    std::vector<double> values = cfg.eps_sweep_values;
    std::sort(values.begin(), values.end());
    for (double v : values) {
        if (!out.eps_p.empty() && v == out.eps_p.back()) {
            out.warnings.push_back("duplicate eps_p " + format_g17(v) + " dropped");
            continue;
        }
        out.eps_p.push_back(v);
    }
    out.mismatch.resize(out.eps_p.size());
    std::vector<std::string> failures(out.eps_p.size());
    parallel_for(int(out.eps_p.size()), [&](int k) {
        try {
            out.mismatch[k] = run_compare_ve(cfg, out.eps_p[k]).combined;
        } catch (const std::exception& e) {
            failures[k] = e.what();
        }
    }, cfg.workers);
    for (std::size_t k = 0; k < failures.size(); ++k)
        if (!failures[k].empty())
            throw NumericalError("eps_sweep at eps_p = " + format_g17(out.eps_p[k]) +
                                 ": " + failures[k]);
    const auto best = std::min_element(out.mismatch.begin(), out.mismatch.end());
    const std::size_t bi = best - out.mismatch.begin();
    out.best_eps_p = out.eps_p[bi];
    out.interior_optimum = bi > 0 && bi + 1 < out.eps_p.size();
    return out;
}

namespace {

// Degenerate-diffusion stability bound: substep until max(mu) dt / dx^2 <= 0.2.
void advance_ks(std::vector<double>& mu, std::vector<double>& psi,
                const HydroGrid& grid, const ModelSpec& model, double dt) {
    double remaining = dt;
    while (remaining > 1e-15) {
        double mmax = 0.0;
        for (double m : mu) mmax = std::max(mmax, m);
        const double cap = 0.2 * grid.dx() * grid.dx() / std::max(mmax, 1e-12);
        const double h = std::min(remaining, cap);
        step_keller_segel(mu, psi, grid, model, h);
        remaining -= h;
    }
}

} // namespace

KsLimitResult run_ks_limit(const ExperimentConfig& cfg) {
    if (!cfg.has_hydro) throw ValidationError("ks_limit: hydro section required");
    if (cfg.ks_eps_values.empty()) throw ValidationError("ks_limit: no eps values");
    const InitialLaw& law = cfg.plan.law;

    HydroGrid hg;
    hg.nx = cfg.hydro.nx;
    hg.xmin = cfg.integrator.box.lo[0];
    hg.xmax = cfg.integrator.box.hi[0];
    hg.validate();
    const auto mu0 = periodic_gaussian(hg.nx, hg.xmin, hg.xmax, law.x_mean[0],
                                       law.x_sigma);

    // reference: the limiting density-only system
    std::vector<double> mu_ks = mu0, psi_ks(hg.nx, 0.0);
    const int steps = step_count(cfg.integrator);
    const double dt = cfg.integrator.dt;
    for (int k = 0; k < steps; ++k) advance_ks(mu_ks, psi_ks, hg, cfg.model, dt);

    KsLimitResult out;
    out.eps = cfg.ks_eps_values;
    std::sort(out.eps.begin(), out.eps.end());
    out.l1_error.resize(out.eps.size());
    std::vector<std::string> failures(out.eps.size());
    parallel_for(int(out.eps.size()), [&](int k) {
        try {
            const double eps = out.eps[k];
            ModelSpec model = cfg.model;
            // mollifier shrinks with eps; keep it resolved on the grid
            model.pair_gradient.kind = GradKernelKind::MollifiedDirac;
            model.pair_gradient.dim = 1;
            model.pair_gradient.width =
                std::max(cfg.model.pair_gradient.width * std::sqrt(eps), 4.0 * hg.dx());
            HydroState s = HydroState::make(hg);
            s.mu = mu0;
            s.eps = eps;
            for (int step = 0; step < steps; ++step)
                step_euler_eps(s, model, dt);
            out.l1_error[k] = l1_diff(s.mu, mu_ks, hg.dx());
        } catch (const std::exception& e) {
            failures[k] = e.what();
        }
    }, cfg.workers);
    for (std::size_t k = 0; k < failures.size(); ++k)
        if (!failures[k].empty())
            throw NumericalError("ks_limit at eps = " + format_g17(out.eps[k]) + ": " +
                                 failures[k]);
    return out;
}

std::string format_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string emit_csv(const CsvTable& table) {
    std::string out;
    for (std::size_t c = 0; c < table.header.size(); ++c) {
        if (c) out += ',';
        out += table.header[c];
    }
    out += '\n';
    for (const auto& row : table.rows) {
        if (row.size() != table.header.size())
            throw ValidationError("csv: ragged row");
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += ',';
            out += format_g17(row[c]);
        }
        out += '\n';
    }
    return out;
}

CsvTable parse_csv(const std::string& text) {
    CsvTable t;
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw ValidationError("csv: empty input");
    std::istringstream hs(line);
    std::string tok;
    while (std::getline(hs, tok, ',')) t.header.push_back(tok);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream rs(line);
        std::vector<double> row;
        while (std::getline(rs, tok, ',')) {
            std::size_t pos = 0;
            row.push_back(std::stod(tok, &pos));
            if (pos != tok.size()) throw ValidationError("csv: bad number '" + tok + "'");
        }
        if (row.size() != t.header.size()) throw ValidationError("csv: ragged row");
        t.rows.push_back(std::move(row));
    }
    return t;
}

namespace {

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write '" + path.string() + "'");
    out << content;
}

std::string snap_name(const char* prefix, std::size_t k) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s_%03zu.csv", prefix, k);
    return buf;
}

json manifest_json(const ExperimentConfig& cfg, const std::string& config_text) {
    char hash[32];
    std::snprintf(hash, sizeof hash, "%016llx",
                  static_cast<unsigned long long>(config_hash(config_text)));
    json m;
    m["config_hash"] = hash;
    m["seed"] = cfg.plan.seed;
    m["experiment"] = to_string(cfg.experiment);
    m["format_version"] = 1;
    m["version"] = "0.1.0";
    return m;
}

std::vector<std::string> emit_particles(const ExperimentConfig& cfg,
                                        const fs::path& dir, json& summary) {
    std::vector<double> times = cfg.snapshot_times;
    std::sort(times.begin(), times.end());
    const auto runs = run_replicas(cfg.plan, cfg.model, cfg.integrator, times,
                                   cfg.workers);
    const int d = cfg.plan.dim;
    std::vector<std::string> files;
    for (std::size_t k = 0; k < times.size(); ++k) {
        CsvTable t;
        t.header = {"t", "replica", "i"};
        for (int c = 0; c < d; ++c) t.header.push_back("x" + std::to_string(c));
        for (int c = 0; c < d; ++c) t.header.push_back("v" + std::to_string(c));
        for (std::size_t m = 0; m < runs.size(); ++m) {
            const Snapshot& s = runs[m][k];
            for (int i = 0; i < cfg.plan.n_particles; ++i) {
                std::vector<double> row = {s.t, double(m), double(i)};
                for (int c = 0; c < d; ++c) row.push_back(s.x[i * d + c]);
                for (int c = 0; c < d; ++c) row.push_back(s.v[i * d + c]);
                t.rows.push_back(std::move(row));
            }
        }
        const std::string name = snap_name("particles", k);
        write_file(dir / name, emit_csv(t));
        files.push_back(name);
    }
    summary["replicas"] = cfg.plan.replicas;
    summary["n_particles"] = cfg.plan.n_particles;
    summary["times"] = times;
    return files;
}

std::vector<std::string> emit_vlasov(const ExperimentConfig& cfg, const fs::path& dir,
                                     json& summary) {
    std::vector<double> times = cfg.snapshot_times;
    std::sort(times.begin(), times.end());
    PhaseDensity rho = law_phase_density(cfg.phase_grid, cfg.plan.law);
    ChemicalField psi;
    ChemicalField* psi_ptr = nullptr;
    if (cfg.model.kind == ModelKind::Chemotaxis) {
        psi = ChemicalField::make(cfg.phase_grid.xbox(), {cfg.phase_grid.nx, 1},
                                  ChemicalField::Bc::Periodic);
        psi_ptr = &psi;
    }
    const double dt = cfg.integrator.dt;
    double t = 0.0;
    std::vector<std::string> files;
    for (std::size_t k = 0; k < times.size(); ++k) {
        const int steps = int(std::lround((times[k] - t) / dt));
        for (int s = 0; s < steps; ++s)
            march_vlasov(rho, cfg.model, dt, psi_ptr, cfg.integrator.chem_substeps);
        t = times[k];
        CsvTable pt;
        pt.header = {"t", "x", "v", "rho"};
        for (int i = 0; i < rho.grid.nx; ++i)
            for (int j = 0; j < rho.grid.nv; ++j)
                pt.rows.push_back({t, rho.grid.x(i), rho.grid.v(j), rho.at(i, j)});
        std::string name = snap_name("phase", k);
        write_file(dir / name, emit_csv(pt));
        files.push_back(name);

        const MomentFields m = moments(rho);
        CsvTable ft;
        ft.header = {"t", "x", "mu", "q"};
        for (int i = 0; i < rho.grid.nx; ++i)
            ft.rows.push_back({t, rho.grid.x(i), m.mu[i], m.momentum[i]});
        name = snap_name("fields", k);
        write_file(dir / name, emit_csv(ft));
        files.push_back(name);
    }
    summary["mass"] = rho.mass();
    summary["clipped_mass"] = rho.clipped;
    summary["times"] = times;
    return files;
}

std::vector<std::string> emit_hydro(const ExperimentConfig& cfg, const fs::path& dir,
                                    json& summary) {
    std::vector<double> times = cfg.snapshot_times;
    std::sort(times.begin(), times.end());
    HydroGrid hg;
    hg.nx = cfg.hydro.nx;
    hg.xmin = cfg.integrator.box.lo[0];
    hg.xmax = cfg.integrator.box.hi[0];
    hg.validate();
    const InitialLaw& law = cfg.plan.law;
    const auto mu0 = periodic_gaussian(hg.nx, hg.xmin, hg.xmax, law.x_mean[0],
                                       law.x_sigma);

    const bool ks = cfg.experiment == ExperimentKind::KellerSegel;
    HydroState s = HydroState::make(hg);
    s.mu = mu0;
    s.eps = cfg.hydro.eps;
    s.eps_p = cfg.hydro.eps_p;
    for (int i = 0; i < hg.nx; ++i) s.q[i] = mu0[i] * law.v_mean[0];
    std::vector<double> mu = mu0, psi(hg.nx, 0.0);

    const double dt = cfg.integrator.dt;
    double t = 0.0;
    std::vector<std::string> files;
    for (std::size_t k = 0; k < times.size(); ++k) {
        const int steps = int(std::lround((times[k] - t) / dt));
        for (int st = 0; st < steps; ++st) {
            if (ks) advance_ks(mu, psi, hg, cfg.model, dt);
            else step_euler_eps(s, cfg.model, dt, cfg.model.friction);
        }
        t = times[k];
        CsvTable ft;
        if (ks) {
            ft.header = {"t", "x", "mu", "psi"};
            for (int i = 0; i < hg.nx; ++i)
                ft.rows.push_back({t, hg.x(i), mu[i], psi[i]});
        } else {
            ft.header = {"t", "x", "mu", "q", "psi"};
            for (int i = 0; i < hg.nx; ++i)
                ft.rows.push_back({t, hg.x(i), s.mu[i], s.q[i], s.psi[i]});
        }
        const std::string name = snap_name("fields", k);
        write_file(dir / name, emit_csv(ft));
        files.push_back(name);
    }
    double mass = 0.0;
    for (int i = 0; i < hg.nx; ++i) mass += (ks ? mu[i] : s.mu[i]) * hg.dx();
    summary["mass"] = mass;
    summary["times"] = times;
    return files;
}

} // namespace

std::vector<std::string> run_experiment(const ExperimentConfig& cfg,
                                        const std::string& config_text) {
    cfg.validate();
    const fs::path dir(cfg.output_dir);
    fs::create_directories(dir);

    json summary;
    summary["experiment"] = to_string(cfg.experiment);
    std::vector<std::string> files;

    switch (cfg.experiment) {
        case ExperimentKind::Particles:
            files = emit_particles(cfg, dir, summary);
            break;
        case ExperimentKind::Vlasov:
            files = emit_vlasov(cfg, dir, summary);
            break;
        case ExperimentKind::Euler:
        case ExperimentKind::KellerSegel:
            files = emit_hydro(cfg, dir, summary);
            break;
        case ExperimentKind::ComparePV: {
            const PvCompareResult r = run_compare_pv(cfg);
            CsvTable t;
            t.header = {"t", "w2_marginal"};
            for (std::size_t k = 0; k < r.times.size(); ++k)
                t.rows.push_back({r.times[k], r.w2[k]});
            write_file(dir / "compare_pv.csv", emit_csv(t));
            files.push_back("compare_pv.csv");
            summary["w2"] = r.w2;
            summary["times"] = r.times;
            summary["estimator"] = r.estimator;
            break;
        }
        case ExperimentKind::CompareVE: {
            const VeCompareResult r = run_compare_ve(cfg, cfg.hydro.eps_p);
            CsvTable t;
            t.header = {"t", "mu_l1_err", "q_l1_err"};
            for (std::size_t k = 0; k < r.times.size(); ++k)
                t.rows.push_back({r.times[k], r.mu_err[k], r.q_err[k]});
            write_file(dir / "compare_ve.csv", emit_csv(t));
            files.push_back("compare_ve.csv");
            summary["mu_rel"] = r.mu_rel;
            summary["q_rel"] = r.q_rel;
            summary["combined_rel"] = r.combined;
            break;
        }
        case ExperimentKind::RateStudy: {
            const RateStudyResult r = run_rate_study(cfg);
            CsvTable t;
            t.header = {"n", "w2_raw", "noise_floor", "w2_corrected"};
            for (std::size_t k = 0; k < r.n_values.size(); ++k)
                t.rows.push_back({double(r.n_values[k]), r.raw_distance[k],
                                  r.noise_floor[k], r.corrected[k]});
            write_file(dir / "rate_table.csv", emit_csv(t));
            files.push_back("rate_table.csv");
            summary["alpha_hat"] = r.fit.alpha_hat;
            summary["c_hat"] = r.fit.c_hat;
            summary["residual"] = r.fit.residual;
            summary["slope_stderr"] = r.fit.slope_stderr;
            break;
        }
        case ExperimentKind::EpsSweep: {
            const EpsSweepResult r = run_eps_sweep(cfg);
            CsvTable t;
            t.header = {"eps_p", "mismatch"};
            for (std::size_t k = 0; k < r.eps_p.size(); ++k)
                t.rows.push_back({r.eps_p[k], r.mismatch[k]});
            write_file(dir / "eps_sweep.csv", emit_csv(t));
            files.push_back("eps_sweep.csv");
            summary["best_eps_p"] = r.best_eps_p;
            summary["interior_optimum"] = r.interior_optimum;
            summary["warnings"] = r.warnings;
            break;
        }
        case ExperimentKind::KsLimit: {
            const KsLimitResult r = run_ks_limit(cfg);
            CsvTable t;
            t.header = {"eps", "l1_density_error"};
            for (std::size_t k = 0; k < r.eps.size(); ++k)
                t.rows.push_back({r.eps[k], r.l1_error[k]});
            write_file(dir / "ks_limit.csv", emit_csv(t));
            files.push_back("ks_limit.csv");
            summary["eps"] = r.eps;
            summary["l1_error"] = r.l1_error;
            break;
        }
    }

    write_file(dir / "summary.json", summary.dump(2) + "\n");
    files.push_back("summary.json");
    write_file(dir / "manifest.json", manifest_json(cfg, config_text).dump(2) + "\n");
    files.push_back("manifest.json");
    return files;
}

} // namespace mfl
