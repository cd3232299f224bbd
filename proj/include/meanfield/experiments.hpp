#pragma once

#include "meanfield/config.hpp"
#include "meanfield/transport.hpp"

#include <string>
#include <vector>

namespace mfl {

// Wrapped (periodic) Gaussian on a cell-centered grid, unit mass.
std::vector<double> periodic_gaussian(int nx, double xmin, double xmax, double mean,
                                      double sigma);

// Product Gaussian phase density from the initial law, renormalized.
PhaseDensity law_phase_density(const PhaseGrid& grid, const InitialLaw& law);

struct VeCompareResult {
    double mu_rel = 0.0;       // time-averaged L1(mu_v - mu_e) / L1(mu)
    double q_rel = 0.0;        // same for momentum
    double combined = 0.0;     // (|dmu| + |dq|) / (|mu| + |q|)
    std::vector<double> times; // sample times
    std::vector<double> mu_err, q_err;
};

// Marches the monokinetic Vlasov data and the matched Euler state side by
// side; sigma_v comes from plan.law.v_sigma.
VeCompareResult run_compare_ve(const ExperimentConfig& cfg, double eps_p);

struct PvCompareResult {
    std::vector<double> times;
    std::vector<double> w2; // first-marginal distance at each snapshot
    std::string estimator;
};

PvCompareResult run_compare_pv(const ExperimentConfig& cfg);

struct RateStudyResult {
    RateFitResult fit;
    std::vector<int> n_values;
    std::vector<double> raw_distance, noise_floor, corrected;
};

RateStudyResult run_rate_study(const ExperimentConfig& cfg);

struct EpsSweepResult {
    std::vector<double> eps_p;      // deduplicated, ascending
    std::vector<double> mismatch;   // combined relative mismatch per eps_p
    double best_eps_p = 0.0;        // argmin
    bool interior_optimum = false;  // argmin away from both sweep endpoints
    std::vector<std::string> warnings;
};

EpsSweepResult run_eps_sweep(const ExperimentConfig& cfg);

struct KsLimitResult {
    std::vector<double> eps;      // ascending
    std::vector<double> l1_error; // density distance to the KS solution at t_final
};

KsLimitResult run_ks_limit(const ExperimentConfig& cfg);

// Full run: executes cfg.experiment and writes snapshots (CSV), summary.json
// and manifest.json into cfg.output_dir. config_text feeds the manifest hash.
// Returns the list of files written (relative to output_dir).
std::vector<std::string> run_experiment(const ExperimentConfig& cfg,
                                        const std::string& config_text);

// CSV plumbing shared by the emitters and the round-trip tests. Numbers are
// rendered with %.17g so parse + re-emit is byte-identical.
std::string format_g17(double x);
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};
std::string emit_csv(const CsvTable& table);
CsvTable parse_csv(const std::string& text);

} // namespace mfl
