#pragma once

#include "meanfield/hydro.hpp"
#include "meanfield/model.hpp"
#include "meanfield/phase.hpp"
#include "meanfield/sim.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace mfl {

enum class ExperimentKind {
    Particles,
    Vlasov,
    Euler,
    KellerSegel,
    ComparePV,
    CompareVE,
    RateStudy,
    EpsSweep,
    KsLimit,
};

std::string to_string(ExperimentKind k);
ExperimentKind experiment_kind_from(const std::string& s);

struct RateStudyConfig {
    std::vector<int> n_values;
    int j = 1;
    int directions = 256;
    double t = 1.0;
    bool subtract_noise_floor = true;
};

struct HydroConfig {
    int nx = 128;
    double eps = 1.0;
    double eps_p = 0.0;
};

struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::Particles;
    std::string output_dir = "out";
    int workers = 0; // 0 = machine parallelism

    ModelSpec model;
    IntegratorConfig integrator;
    ReplicaPlan plan;
    std::vector<double> snapshot_times;

    PhaseGrid phase_grid;
    bool has_phase_grid = false;

    HydroConfig hydro;
    bool has_hydro = false;

    RateStudyConfig rate;
    bool has_rate = false;

    std::vector<double> eps_sweep_values;
    std::vector<double> ks_eps_values;

    void validate() const;
};

// Strict INI: [section] headers, key = value lines, '#'/';' comments.
// Unknown sections or keys are rejected.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

// FNV-1a over the canonicalized config text (comments/blank lines stripped,
// whitespace collapsed) so formatting-only edits do not change the hash.
std::uint64_t config_hash(const std::string& text);
std::string canonical_config_text(const std::string& text);

} // namespace mfl
