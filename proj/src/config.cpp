#include "meanfield/config.hpp"

#include "meanfield/errors.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace mfl {

std::string to_string(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::Particles: return "particles";
        case ExperimentKind::Vlasov: return "vlasov";
        case ExperimentKind::Euler: return "euler";
        case ExperimentKind::KellerSegel: return "keller_segel";
        case ExperimentKind::ComparePV: return "compare_pv";
        case ExperimentKind::CompareVE: return "compare_ve";
        case ExperimentKind::RateStudy: return "rate_study";
        case ExperimentKind::EpsSweep: return "eps_sweep";
        case ExperimentKind::KsLimit: return "ks_limit";
    }
    return "?";
}

ExperimentKind experiment_kind_from(const std::string& s) {
    for (ExperimentKind k :
         {ExperimentKind::Particles, ExperimentKind::Vlasov, ExperimentKind::Euler,
          ExperimentKind::KellerSegel, ExperimentKind::ComparePV,
          ExperimentKind::CompareVE, ExperimentKind::RateStudy,
          ExperimentKind::EpsSweep, ExperimentKind::KsLimit})
        if (to_string(k) == s) return k;
    throw ValidationError("config: unknown experiment kind '" + s + "'");
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

using Section = std::map<std::string, std::string>;

std::map<std::string, Section> tokenize(const std::string& text) {
    std::map<std::string, Section> out;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ValidationError("config line " + std::to_string(lineno) +
                                      ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw ValidationError("config line " + std::to_string(lineno) +
                                      ": empty section name");
            out[section]; // sections may be empty
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ValidationError("config line " + std::to_string(lineno) +
                                  ": expected key = value");
        if (section.empty())
            throw ValidationError("config line " + std::to_string(lineno) +
                                  ": key outside any section");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty()) throw ValidationError("config line " + std::to_string(lineno) +
                                               ": empty key");
        if (out[section].count(key))
            throw ValidationError("config: duplicate key '" + section + "." + key + "'");
        out[section][key] = val;
    }
    return out;
}

// Tracks consumed keys so leftovers can be rejected.
struct SectionView {
    std::string name;
    const Section* kv = nullptr;
    std::set<std::string> used;

    bool has(const std::string& key) const { return kv && kv->count(key); }

    std::string raw(const std::string& key) {
        used.insert(key);
        return kv->at(key);
    }

    std::string str(const std::string& key, const std::string& fallback) {
        return has(key) ? raw(key) : fallback;
    }

    double num(const std::string& key, double fallback) {
        if (!has(key)) return fallback;
        return parse_double(key, raw(key));
    }

    double require_num(const std::string& key) {
        if (!has(key))
            throw ValidationError("config: [" + name + "] requires key '" + key + "'");
        return parse_double(key, raw(key));
    }

    long long integer(const std::string& key, long long fallback) {
        if (!has(key)) return fallback;
        return parse_int(key, raw(key));
    }

    bool flag(const std::string& key, bool fallback) {
        if (!has(key)) return fallback;
        const std::string v = raw(key);
        if (v == "true" || v == "1" || v == "yes") return true;
        if (v == "false" || v == "0" || v == "no") return false;
        throw ValidationError("config: [" + name + "] " + key + ": expected boolean");
    }

    std::vector<double> num_list(const std::string& key) {
        std::vector<double> out;
        if (!has(key)) return out;
        std::istringstream in(raw(key));
        std::string tok;
        while (std::getline(in, tok, ',')) {
            tok = trim(tok);
            if (tok.empty()) continue;
            out.push_back(parse_double(key, tok));
        }
        return out;
    }

    double parse_double(const std::string& key, const std::string& v) {
        try {
            std::size_t pos = 0;
            const double x = std::stod(v, &pos);
            if (pos != v.size()) throw std::invalid_argument("trailing characters");
            return x;
        } catch (const std::exception&) {
            throw ValidationError("config: [" + name + "] " + key +
                                  ": bad number '" + v + "'");
        }
    }

    long long parse_int(const std::string& key, const std::string& v) {
        try {
            std::size_t pos = 0;
            const long long x = std::stoll(v, &pos);
            if (pos != v.size()) throw std::invalid_argument("trailing characters");
            return x;
        } catch (const std::exception&) {
            throw ValidationError("config: [" + name + "] " + key +
                                  ": bad integer '" + v + "'");
        }
    }

    void finish() const {
        if (!kv) return;
        for (const auto& [key, _] : *kv)
            if (!used.count(key))
                throw ValidationError("config: unknown key '" + name + "." + key + "'");
    }
};

SectionView view(const std::map<std::string, Section>& all, const std::string& name) {
    SectionView v;
    v.name = name;
    const auto it = all.find(name);
    if (it != all.end()) v.kv = &it->second;
    return v;
}

ModelSpec parse_model(SectionView& m) {
    ModelSpec spec;
    spec.kind = model_kind_from_name(m.str("kind", "two_body"));

    spec.pair_gradient.kind = grad_kernel_from_name(m.str("pair_kernel", "none"));
    spec.pair_gradient.amplitude = m.num("pair_amplitude", 1.0);
    spec.pair_gradient.width = m.num("pair_width_length", 1.0);

    spec.cs.lambda = m.num("cs_lambda_rate", 1.0);
    spec.cs.R = m.num("cs_radius_length", 1.0);
    spec.cs.beta = m.num("cs_beta", 1.0);
    spec.cs.sign = int(m.integer("cs_sign", -1));

    spec.topo.K.kind = rank_kernel_from_name(m.str("topo_kernel", "clamped_linear"));
    spec.topo.K.amplitude = m.num("topo_amplitude", 1.0);
    spec.topo.sign = int(m.integer("topo_sign", -1));

    spec.chem.eta = m.num("chem_eta", 0.0);
    spec.chem.kappa = m.num("chem_kappa_rate", 0.0);
    spec.chem.D = m.num("chem_diffusion", 1.0);
    const double chi_r = m.num("chem_chi_radius_length", 0.25);
    spec.chem.chi.radius = chi_r; // normalized once the dimension is known

    const std::string aw = m.str("agent_weights", "uniform");
    if (aw == "uniform") spec.agent.weights = AgentWeights::Uniform;
    else if (aw == "two_groups") spec.agent.weights = AgentWeights::TwoGroups;
    else throw ValidationError("config: [model] agent_weights: unknown '" + aw + "'");
    spec.agent.group_coupling = m.num("agent_group_coupling", 1.0);
    spec.agent.confidence = m.num("agent_confidence", 1.0);

    const std::string ef = m.str("ext_force", "none");
    if (ef == "none") spec.ext_force.kind = ExtForceKind::None;
    else if (ef == "linear_trap") spec.ext_force.kind = ExtForceKind::LinearTrap;
    else if (ef == "constant") spec.ext_force.kind = ExtForceKind::Constant;
    else throw ValidationError("config: [model] ext_force: unknown '" + ef + "'");
    spec.ext_force.amplitude = m.num("ext_amplitude", 0.0);

    spec.friction = m.flag("friction", false);
    spec.mass_scale_eps = m.num("mass_scale_eps", 1.0);
    return spec;
}

Box parse_box(SectionView& b) {
    Box box;
    box.dim = int(b.integer("dim", 1));
    const std::string bd = b.str("boundary", "free");
    if (bd == "free") box.boundary = Boundary::Free;
    else if (bd == "periodic") box.boundary = Boundary::Periodic;
    else throw ValidationError("config: [box] boundary: unknown '" + bd + "'");
    auto lo = b.num_list("lo_length");
    auto hi = b.num_list("hi_length");
    if (lo.empty()) lo.assign(box.dim, -1.0);
    if (hi.empty()) hi.assign(box.dim, 1.0);
    if (lo.size() == 1) lo.assign(box.dim, lo[0]);
    if (hi.size() == 1) hi.assign(box.dim, hi[0]);
    if (int(lo.size()) != box.dim || int(hi.size()) != box.dim)
        throw ValidationError("config: [box] lo/hi length lists must match dim");
    for (int c = 0; c < box.dim; ++c) {
        box.lo[c] = lo[c];
        box.hi[c] = hi[c];
    }
    box.validate();
    return box;
}

InitialLaw parse_law(SectionView& p) {
    InitialLaw law;
    const std::string lk = p.str("law", "gaussian");
    if (lk == "gaussian") law.kind = InitialLaw::Kind::Gaussian;
    else if (lk == "uniform_box") law.kind = InitialLaw::Kind::UniformBox;
    else if (lk == "two_cluster") law.kind = InitialLaw::Kind::TwoCluster;
    else throw ValidationError("config: [particles] law: unknown '" + lk + "'");
    const auto xm = p.num_list("x_mean_length");
    const auto vm = p.num_list("v_mean_speed");
    for (std::size_t c = 0; c < xm.size() && c < 3; ++c) law.x_mean[c] = xm[c];
    for (std::size_t c = 0; c < vm.size() && c < 3; ++c) law.v_mean[c] = vm[c];
    law.x_sigma = p.num("x_sigma_length", 1.0);
    law.v_sigma = p.num("v_sigma_speed", 1.0);
    law.cluster_sep = p.num("cluster_sep_length", 2.0);
    return law;
}

} // namespace

ExperimentConfig parse_config(const std::string& text) {
    const auto sections = tokenize(text);
    static const std::set<std::string> known = {
        "experiment", "model",      "box",       "integrator", "particles",
        "replicas",   "snapshots",  "phase_grid", "hydro",     "rate_study",
        "eps_sweep",  "ks_limit"};
    for (const auto& [name, _] : sections)
        if (!known.count(name))
            throw ValidationError("config: unknown section [" + name + "]");

    ExperimentConfig cfg;

    auto ex = view(sections, "experiment");
    if (!ex.kv) throw ValidationError("config: missing [experiment] section");
    if (!ex.has("kind")) throw ValidationError("config: [experiment] requires 'kind'");
    cfg.experiment = experiment_kind_from(ex.raw("kind"));
    cfg.output_dir = ex.str("output_dir", "out");
    cfg.workers = int(ex.integer("workers", 0));
    ex.finish();

    auto mo = view(sections, "model");
    if (!mo.kv) throw ValidationError("config: missing [model] section");
    cfg.model = parse_model(mo);
    mo.finish();

    auto bx = view(sections, "box");
    if (!bx.kv) throw ValidationError("config: missing [box] section");
    const Box box = parse_box(bx);
    bx.finish();
    cfg.model.pair_gradient.dim = box.dim;
    cfg.model.chem.chi = Bump::make(cfg.model.chem.chi.radius, box.dim);

    auto in = view(sections, "integrator");
    if (!in.kv) throw ValidationError("config: missing [integrator] section");
    const std::string sc = in.str("scheme", "rk4");
    if (sc == "rk4") cfg.integrator.scheme = Scheme::RK4;
    else if (sc == "semi_implicit_euler")
        cfg.integrator.scheme = Scheme::SemiImplicitEuler;
    else throw ValidationError("config: [integrator] scheme: unknown '" + sc + "'");
    cfg.integrator.dt = in.require_num("dt_time");
    cfg.integrator.t_final = in.require_num("t_final_time");
    cfg.integrator.chem_substeps = int(in.integer("chem_substeps", 1));
    cfg.integrator.chem_nodes = int(in.integer("chem_nodes", 64));
    cfg.integrator.box = box;
    in.finish();

    auto pa = view(sections, "particles");
    if (pa.kv) {
        cfg.plan.n_particles = int(pa.integer("n", 16));
        cfg.plan.dim = box.dim;
        cfg.plan.law = parse_law(pa);
        pa.finish();
    }

    auto re = view(sections, "replicas");
    if (!re.kv) throw ValidationError("config: missing [replicas] section");
    cfg.plan.replicas = int(re.integer("count", 1));
    if (!re.has("seed"))
        throw ValidationError("config: [replicas] requires an explicit 'seed'");
    cfg.plan.seed = std::uint64_t(re.integer("seed", 0));
    re.finish();

    auto sn = view(sections, "snapshots");
    if (sn.kv) {
        cfg.snapshot_times = sn.num_list("times_time");
        sn.finish();
    }
    if (cfg.snapshot_times.empty())
        cfg.snapshot_times = {cfg.integrator.t_final};

    auto ph = view(sections, "phase_grid");
    if (ph.kv) {
        cfg.has_phase_grid = true;
        cfg.phase_grid.nx = int(ph.integer("nx", 64));
        cfg.phase_grid.nv = int(ph.integer("nv", 64));
        cfg.phase_grid.xmin = box.lo[0];
        cfg.phase_grid.xmax = box.hi[0];
        cfg.phase_grid.vmin = ph.num("vmin_speed", -1.0);
        cfg.phase_grid.vmax = ph.num("vmax_speed", 1.0);
        ph.finish();
    }

    auto hy = view(sections, "hydro");
    if (hy.kv) {
        cfg.has_hydro = true;
        cfg.hydro.nx = int(hy.integer("nx", 128));
        cfg.hydro.eps = hy.num("eps", 1.0);
        cfg.hydro.eps_p = hy.num("eps_p", 0.0);
        hy.finish();
    }

    auto ra = view(sections, "rate_study");
    if (ra.kv) {
        cfg.has_rate = true;
        for (double n : ra.num_list("n_values")) cfg.rate.n_values.push_back(int(n));
        cfg.rate.j = int(ra.integer("j", 1));
        cfg.rate.directions = int(ra.integer("directions", 256));
        cfg.rate.t = ra.num("t_time", 1.0);
        cfg.rate.subtract_noise_floor = ra.flag("subtract_noise_floor", true);
        ra.finish();
    }

    auto es = view(sections, "eps_sweep");
    if (es.kv) {
        cfg.eps_sweep_values = es.num_list("values");
        es.finish();
    }

    auto ks = view(sections, "ks_limit");
    if (ks.kv) {
        cfg.ks_eps_values = ks.num_list("eps_values");
        ks.finish();
    }

    cfg.validate();
    return cfg;
}

void ExperimentConfig::validate() const {
    model.validate();
    integrator.validate();
    plan.validate();
    if (output_dir.empty()) throw ValidationError("config: output_dir must be set");
    if (workers < 0) throw ValidationError("config: workers must be >= 0");
    for (double t : snapshot_times)
        if (t < 0.0 || t > integrator.t_final + 1e-12)
            throw ValidationError("config: snapshot times must lie in [0, t_final]");

    const bool needs_phase = experiment == ExperimentKind::Vlasov ||
                             experiment == ExperimentKind::ComparePV ||
                             experiment == ExperimentKind::CompareVE ||
                             experiment == ExperimentKind::RateStudy ||
                             experiment == ExperimentKind::EpsSweep;
    if (needs_phase && !has_phase_grid)
        throw ValidationError("config: experiment '" + to_string(experiment) +
                              "' requires a [phase_grid] section");
    if (has_phase_grid) phase_grid.validate();

    const bool needs_hydro = experiment == ExperimentKind::Euler ||
                             experiment == ExperimentKind::KellerSegel ||
                             experiment == ExperimentKind::CompareVE ||
                             experiment == ExperimentKind::EpsSweep ||
                             experiment == ExperimentKind::KsLimit;
    if (needs_hydro && !has_hydro)
        throw ValidationError("config: experiment '" + to_string(experiment) +
                              "' requires a [hydro] section");

    if (experiment == ExperimentKind::RateStudy) {
        if (!has_rate || rate.n_values.empty())
            throw ValidationError("config: rate_study requires [rate_study] n_values");
        for (int n : rate.n_values)
            if (n < 2) throw ValidationError("config: rate_study N values must be >= 2");
        if (rate.j != 1 && rate.j != 2)
            throw ValidationError("config: rate_study j must be 1 or 2");
    }
    if (experiment == ExperimentKind::EpsSweep && eps_sweep_values.empty())
        throw ValidationError("config: eps_sweep requires [eps_sweep] values");
    if (experiment == ExperimentKind::KsLimit) {
        if (ks_eps_values.empty())
            throw ValidationError("config: ks_limit requires [ks_limit] eps_values");
        for (double e : ks_eps_values)
            if (!(e > 0.0))
                throw ValidationError("config: ks_limit eps values must be > 0");
    }
    if (experiment == ExperimentKind::KellerSegel ||
        experiment == ExperimentKind::KsLimit) {
        if (model.kind != ModelKind::Chemotaxis)
            throw ValidationError("config: keller_segel experiments need a chemotaxis model");
        if (!(model.chem.kappa > 0.0))
            throw ValidationError("config: keller_segel needs chem_kappa_rate > 0");
    }
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("config: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string canonical_config_text(const std::string& text) {
    std::istringstream in(text);
    std::string line, out;
    while (std::getline(in, line)) {
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            out += line;
            out += '\n';
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            out += line;
            out += '\n';
            continue;
        }
        out += trim(line.substr(0, eq));
        out += '=';
        out += trim(line.substr(eq + 1));
        out += '\n';
    }
    return out;
}

std::uint64_t config_hash(const std::string& text) {
    const std::string canon = canonical_config_text(text);
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : canon) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

} // namespace mfl
