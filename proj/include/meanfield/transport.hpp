#pragma once

#include "meanfield/phase.hpp"
#include "meanfield/sim.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace mfl {

// Weighted point cloud in R^m representing a probability measure.
struct DiscreteMeasure {
    int dim = 1;
    std::vector<double> points;  // n*dim
    std::vector<double> weights; // n, nonnegative, sum 1

    int size() const { return int(weights.size()); }
    double coord(int i, int c) const { return points[std::size_t(i) * dim + c]; }
    void validate() const;
    // merge atoms closer than tol in every coordinate (zero-distance axiom)
    DiscreteMeasure merged(double tol = 1e-12) const;
    DiscreteMeasure scaled(double s) const;
};

// Exact Wasserstein distances. 1d inputs use the quantile coupling; higher
// dimensions run an exact min-cost-flow on the dense cost matrix (supports
// up to `exact_limit` atoms per side).
inline constexpr int kExactAtomLimit = 4000;

double w1(const DiscreteMeasure& a, const DiscreteMeasure& b);
double w2(const DiscreteMeasure& a, const DiscreteMeasure& b);

// Independent LP oracle (min-cost flow on the dense bipartite graph),
// exact for any dimension including 1d. cost_power is 1 or 2.
double wasserstein_flow(const DiscreteMeasure& a, const DiscreteMeasure& b,
                        int cost_power);

struct SlicedResult {
    double value = 0.0; // sqrt(mean of squared 1d distances)
    double ci = 0.0;    // 95% CI half-width on value
    int directions = 0;
};

// Monte-Carlo sliced W2 estimate (lower bounds the exact W2).
SlicedResult sliced_w2(const DiscreteMeasure& a, const DiscreteMeasure& b,
                       int directions = 256, std::uint64_t seed = 0);

// Pools the first j particles of each replica snapshot into an equal-weight
// measure on R^(2 d j). Exchangeable model kinds only.
DiscreteMeasure extract_marginal(const std::vector<Snapshot>& replicas, int dim,
                                 int n_particles, int j,
                                 ModelKind kind = ModelKind::TwoBody);

// Quantization of a phase density for distance evaluation.
enum class QuantizationMode { GridAtoms, Sampled };
DiscreteMeasure vlasov_reference_measure(const PhaseDensity& rho, int n,
                                         std::uint64_t seed,
                                         QuantizationMode mode = QuantizationMode::GridAtoms);

// Product power (rho)^(x j) of a quantized reference, by sampling j-tuples.
DiscreteMeasure product_reference(const PhaseDensity& rho, int j, int n,
                                  std::uint64_t seed);

struct ChaosError {
    double distance = 0.0;
    double ci = 0.0;
    std::string estimator;
};

// W2 between the pooled j-marginal and (rho_ref)^(x j); sliced for j = 2 or
// large supports, exact otherwise.
ChaosError chaos_error(const std::vector<Snapshot>& replicas, int dim, int n_particles,
                       const PhaseDensity& rho_ref, int j, std::uint64_t seed = 0);

struct RateFitResult {
    double alpha_hat = 0.0; // -slope of log distance vs log N
    double c_hat = 0.0;     // exp(intercept)
    double residual = 0.0;  // rms residual in log space
    double slope_stderr = 0.0;
    std::vector<std::pair<double, double>> pairs;
};

RateFitResult fit_rate(const std::vector<std::pair<double, double>>& pairs);

} // namespace mfl
