#include "meanfield/transport.hpp"

#include "meanfield/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace mfl {

void DiscreteMeasure::validate() const {
    if (dim < 1) throw ValidationError("measure: dim must be >= 1");
    if (weights.empty()) throw ValidationError("measure: empty support");
    if (points.size() != weights.size() * std::size_t(dim))
        throw ValidationError("measure: points/weights size mismatch");
    double sum = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) throw ValidationError("measure: negative weight");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw ValidationError("measure: weights must sum to 1 (within 1e-12)");
    for (double p : points)
        if (!std::isfinite(p)) throw ValidationError("measure: non-finite support point");
}

DiscreteMeasure DiscreteMeasure::merged(double tol) const {
    DiscreteMeasure out;
    out.dim = dim;
    std::vector<bool> used(size(), false);
    for (int i = 0; i < size(); ++i) {
        if (used[i]) continue;
        double w = weights[i];
        for (int k = i + 1; k < size(); ++k) {
            if (used[k]) continue;
            bool close = true;
            for (int c = 0; c < dim; ++c)
                if (std::abs(coord(i, c) - coord(k, c)) > tol) { close = false; break; }
            if (close) {
                w += weights[k];
                used[k] = true;
            }
        }
        for (int c = 0; c < dim; ++c) out.points.push_back(coord(i, c));
        out.weights.push_back(w);
    }
    return out;
}

DiscreteMeasure DiscreteMeasure::scaled(double s) const {
    DiscreteMeasure out = *this;
    for (double& p : out.points) p *= s;
    return out;
}

namespace {

// Quantile coupling sweep, optimal in 1d for both |x-y| and |x-y|^2 costs.
std::pair<double, double> quantile_costs(const DiscreteMeasure& a,
                                         const DiscreteMeasure& b) {
    std::vector<int> ia(a.size()), ib(b.size());
    std::iota(ia.begin(), ia.end(), 0);
    std::iota(ib.begin(), ib.end(), 0);
    std::sort(ia.begin(), ia.end(), [&](int p, int q) { return a.points[p] < a.points[q]; });
    std::sort(ib.begin(), ib.end(), [&](int p, int q) { return b.points[p] < b.points[q]; });
    double cost1 = 0.0, cost2 = 0.0;
    std::size_t p = 0, q = 0;
    double ra = a.weights[ia[0]], rb = b.weights[ib[0]];
    while (p < ia.size() && q < ib.size()) {
        const double h = std::min(ra, rb);
        const double d = a.points[ia[p]] - b.points[ib[q]];
        cost1 += h * std::abs(d);
        cost2 += h * d * d;
        ra -= h;
        rb -= h;
        if (ra <= 1e-17) {
            if (++p < ia.size()) ra = a.weights[ia[p]];
        }
        if (rb <= 1e-17) {
            if (++q < ib.size()) rb = b.weights[ib[q]];
        }
    }
    return {cost1, cost2};
}

void check_compatible(const DiscreteMeasure& a, const DiscreteMeasure& b) {
    a.validate();
    b.validate();
    if (a.dim != b.dim) throw ValidationError("wasserstein: dimension mismatch");
}

double pair_cost(const DiscreteMeasure& a, const DiscreteMeasure& b, int i, int j,
                 int power) {
    double s = 0.0;
    for (int c = 0; c < a.dim; ++c) {
        const double d = a.coord(i, c) - b.coord(j, c);
        s += d * d;
    }
    return power == 2 ? s : std::sqrt(s);
}

} // namespace

// Exact optimal transport by successive shortest augmenting paths with
// Johnson potentials (dense bipartite graph). Independent of the quantile
// route; serves as the LP oracle in tests.
double wasserstein_flow(const DiscreteMeasure& a, const DiscreteMeasure& b,
                        int cost_power) {
    check_compatible(a, b);
    if (cost_power != 1 && cost_power != 2)
        throw ValidationError("wasserstein: cost power must be 1 or 2");
    const int n = a.size(), m = b.size();
    if (n > kExactAtomLimit || m > kExactAtomLimit)
        throw ValidationError("wasserstein: support too large for the exact solver");

    std::vector<double> supply(a.weights), demand(b.weights);
    std::vector<std::vector<double>> flow(n, std::vector<double>(m, 0.0));
    std::vector<double> pot(n + m, 0.0); // node potentials
    const double inf = std::numeric_limits<double>::infinity();
    const double eps = 1e-15;

    double remaining = 1.0;
    while (remaining > 1e-12) {
        // multi-source Dijkstra over the residual graph
        std::vector<double> dist(n + m, inf);
        std::vector<int> parent(n + m, -1);
        std::vector<bool> done(n + m, false);
        for (int i = 0; i < n; ++i)
            if (supply[i] > eps) dist[i] = 0.0;
        while (true) {
            int best = -1;
            double bd = inf;
            for (int k = 0; k < n + m; ++k)
                if (!done[k] && dist[k] < bd) { bd = dist[k]; best = k; }
            if (best < 0) break;
            done[best] = true;
            if (best < n) {
                const int i = best;
                for (int j = 0; j < m; ++j) {
                    if (done[n + j]) continue;
                    const double rc = pair_cost(a, b, i, j, cost_power) +
                                      pot[i] - pot[n + j];
                    if (dist[i] + rc < dist[n + j] - 1e-18) {
                        dist[n + j] = dist[i] + std::max(rc, 0.0);
                        parent[n + j] = i;
                    }
                }
            } else {
                const int j = best - n;
                for (int i = 0; i < n; ++i) {
                    if (done[i] || flow[i][j] <= eps) continue;
                    const double rc = -pair_cost(a, b, i, j, cost_power) +
                                      pot[n + j] - pot[i];
                    if (dist[n + j] + rc < dist[i] - 1e-18) {
                        dist[i] = dist[n + j] + std::max(rc, 0.0);
                        parent[i] = n + j;
                    }
                }
            }
        }
        // closest sink with demand
        int target = -1;
        double bd = inf;
        for (int j = 0; j < m; ++j)
            if (demand[j] > eps && dist[n + j] < bd) { bd = dist[n + j]; target = j; }
        if (target < 0) throw NumericalError("wasserstein: no augmenting path");

        // bottleneck along the path
        double delta = demand[target];
        int node = n + target;
        while (parent[node] >= 0) {
            const int prev = parent[node];
            if (node >= n) {
                // arrived at sink via forward arc: no flow bound
            } else {
                delta = std::min(delta, flow[node][prev - n]);
            }
            node = prev;
        }
        delta = std::min(delta, supply[node]);

        // apply
        int cur = n + target;
        while (parent[cur] >= 0) {
            const int prev = parent[cur];
            if (cur >= n) flow[prev][cur - n] += delta;
            else flow[cur][prev - n] -= delta;
            cur = prev;
        }
        supply[cur] -= delta;
        demand[target] -= delta;
        remaining -= delta;

        const double dmax = bd;
        for (int k = 0; k < n + m; ++k)
            pot[k] += std::isfinite(dist[k]) ? dist[k] : dmax;
    }

    double cost = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j)
            if (flow[i][j] > 0.0)
                cost += flow[i][j] * pair_cost(a, b, i, j, cost_power);
    return cost_power == 2 ? std::sqrt(cost) : cost;
}

double w1(const DiscreteMeasure& a, const DiscreteMeasure& b) {
    check_compatible(a, b);
    if (a.dim == 1) return quantile_costs(a, b).first;
    return wasserstein_flow(a, b, 1);
}

double w2(const DiscreteMeasure& a, const DiscreteMeasure& b) {
    check_compatible(a, b);
    if (a.dim == 1) return std::sqrt(quantile_costs(a, b).second);
    return wasserstein_flow(a, b, 2);
}

SlicedResult sliced_w2(const DiscreteMeasure& a, const DiscreteMeasure& b,
                       int directions, std::uint64_t seed) {
    check_compatible(a, b);
    if (directions < 1) throw ValidationError("sliced w2: need at least one direction");
    const CounterRng rng{seed, 0x51edULL};
    double sum = 0.0, sumsq = 0.0;
    DiscreteMeasure pa, pb;
    pa.dim = pb.dim = 1;
    pa.weights = a.weights;
    pb.weights = b.weights;
    pa.points.resize(a.size());
    pb.points.resize(b.size());
    for (int k = 0; k < directions; ++k) {
        std::vector<double> theta(a.dim);
        double nrm = 0.0;
        for (int c = 0; c < a.dim; ++c) {
            theta[c] = rng.normal(std::uint64_t(k) * 8 + c);
            nrm += theta[c] * theta[c];
        }
        nrm = std::sqrt(std::max(nrm, 1e-300));
        for (int i = 0; i < a.size(); ++i) {
            double s = 0.0;
            for (int c = 0; c < a.dim; ++c) s += theta[c] * a.coord(i, c);
            pa.points[i] = s / nrm;
        }
        for (int i = 0; i < b.size(); ++i) {
            double s = 0.0;
            for (int c = 0; c < b.dim; ++c) s += theta[c] * b.coord(i, c);
            pb.points[i] = s / nrm;
        }
        const double d2 = quantile_costs(pa, pb).second;
        sum += d2;
        sumsq += d2 * d2;
    }
    SlicedResult r;
    r.directions = directions;
    const double mean = sum / directions;
    r.value = std::sqrt(std::max(mean, 0.0));
    const double var = std::max(0.0, sumsq / directions - mean * mean);
    const double ci_sq = 1.96 * std::sqrt(var / directions);
    r.ci = r.value > 1e-300 ? ci_sq / (2.0 * r.value) : std::sqrt(ci_sq);
    return r;
}

DiscreteMeasure extract_marginal(const std::vector<Snapshot>& replicas, int dim,
                                 int n_particles, int j, ModelKind kind) {
    if (kind == ModelKind::MultiAgent)
        throw ValidationError(
            "extract_marginal: multi-agent laws are not exchangeable; "
            "marginals are index-specific");
    if (j < 1 || j > n_particles)
        throw ValidationError("extract_marginal: order j must satisfy 1 <= j <= N");
    if (replicas.empty()) throw ValidationError("extract_marginal: no replicas");
    DiscreteMeasure out;
    out.dim = 2 * dim * j;
    const double w = 1.0 / double(replicas.size());
    for (const Snapshot& s : replicas) {
        for (int p = 0; p < j; ++p)
            for (int c = 0; c < dim; ++c)
                out.points.push_back(s.x[p * dim + c]);
        for (int p = 0; p < j; ++p)
            for (int c = 0; c < dim; ++c)
                out.points.push_back(s.v[p * dim + c]);
        out.weights.push_back(w);
    }
    return out;
}

namespace {

std::vector<double> cell_cdf(const PhaseDensity& rho) {
    std::vector<double> cdf(rho.rho.size());
    double acc = 0.0;
    for (std::size_t k = 0; k < rho.rho.size(); ++k) {
        acc += std::max(rho.rho[k], 0.0);
        cdf[k] = acc;
    }
    if (!(acc > 0.0)) throw NumericalError("reference measure: empty density");
    for (double& c : cdf) c /= acc;
    return cdf;
}

std::pair<double, double> cell_center(const PhaseDensity& rho, std::size_t flat) {
    const int i = int(flat / rho.grid.nv);
    const int j = int(flat % rho.grid.nv);
    return {rho.grid.x(i), rho.grid.v(j)};
}

} // namespace

DiscreteMeasure vlasov_reference_measure(const PhaseDensity& rho, int n,
                                         std::uint64_t seed, QuantizationMode mode) {
    DiscreteMeasure out;
    out.dim = 2;
    if (mode == QuantizationMode::GridAtoms) {
        double total = 0.0;
        for (double v : rho.rho) total += std::max(v, 0.0);
        for (std::size_t k = 0; k < rho.rho.size(); ++k) {
            if (!(rho.rho[k] > 0.0)) continue;
            const auto [x, v] = cell_center(rho, k);
            out.points.push_back(x);
            out.points.push_back(v);
            out.weights.push_back(rho.rho[k] / total);
        }
        if (out.weights.empty())
            throw NumericalError("reference measure: empty density");
        return out;
    }
    const auto cdf = cell_cdf(rho);
    const CounterRng rng{seed, 0x7ef5ULL};
    const double w = 1.0 / double(n);
    for (int k = 0; k < n; ++k) {
        const double u = rng.uniform01(k);
        const std::size_t cell =
            std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin();
        const auto [x, v] = cell_center(rho, std::min(cell, cdf.size() - 1));
        out.points.push_back(x);
        out.points.push_back(v);
        out.weights.push_back(w);
    }
    return out;
}

DiscreteMeasure product_reference(const PhaseDensity& rho, int j, int n,
                                  std::uint64_t seed) {
    if (j < 1) throw ValidationError("product reference: j must be >= 1");
    const auto cdf = cell_cdf(rho);
    const CounterRng rng{seed, 0x9a0dULL};
    DiscreteMeasure out;
    out.dim = 2 * j;
    const double w = 1.0 / double(n);
    for (int k = 0; k < n; ++k) {
        std::vector<double> xs(j), vs(j);
        for (int f = 0; f < j; ++f) {
            const double u = rng.uniform01(std::uint64_t(k) * j + f);
            const std::size_t cell =
                std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin();
            const auto [x, v] = cell_center(rho, std::min(cell, cdf.size() - 1));
            xs[f] = x;
            vs[f] = v;
        }
        for (double x : xs) out.points.push_back(x);
        for (double v : vs) out.points.push_back(v);
        out.weights.push_back(w);
    }
    return out;
}

ChaosError chaos_error(const std::vector<Snapshot>& replicas, int dim, int n_particles,
                       const PhaseDensity& rho_ref, int j, std::uint64_t seed) {
    if (j != 1 && j != 2)
        throw ValidationError("chaos_error: j must be 1 or 2");
    if (dim != 1)
        throw ValidationError("chaos_error: gridded references are 1d in space");
    const DiscreteMeasure marg = extract_marginal(replicas, dim, n_particles, j);
    ChaosError out;
    if (j == 1) {
        const DiscreteMeasure ref =
            vlasov_reference_measure(rho_ref, 0, seed, QuantizationMode::GridAtoms);
        if (marg.size() <= 400 && ref.size() <= 400) {
            out.distance = w2(marg, ref);
            out.estimator = "exact";
        } else {
            const SlicedResult s = sliced_w2(marg, ref, 256, seed);
            out.distance = s.value;
            out.ci = s.ci;
            out.estimator = "sliced_w2";
        }
        return out;
    }
    const int nref = std::max(2000, marg.size());
    const DiscreteMeasure ref = product_reference(rho_ref, 2, nref, seed);
    const SlicedResult s = sliced_w2(marg, ref, 256, seed);
    out.distance = s.value;
    out.ci = s.ci;
    out.estimator = "sliced_w2";
    return out;
}

RateFitResult fit_rate(const std::vector<std::pair<double, double>>& pairs) {
    if (pairs.size() < 2)
        throw ValidationError("fit_rate: need at least two (N, distance) pairs");
    for (const auto& [n, d] : pairs) {
        if (!(n > 0.0)) throw ValidationError("fit_rate: N must be positive");
        if (!(d > 0.0)) throw ValidationError("fit_rate: distances must be positive");
    }
    const int k = int(pairs.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const auto& [n, d] : pairs) {
        const double lx = std::log(n), ly = std::log(d);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double denom = k * sxx - sx * sx;
    if (std::abs(denom) < 1e-30) throw ValidationError("fit_rate: degenerate abscissae");
    const double slope = (k * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / k;
    double ss = 0.0;
    for (const auto& [n, d] : pairs) {
        const double r = std::log(d) - (intercept + slope * std::log(n));
        ss += r * r;
    }
    RateFitResult out;
    out.alpha_hat = -slope;
    out.c_hat = std::exp(intercept);
    out.residual = std::sqrt(ss / k);
    if (k > 2) {
        const double var = ss / (k - 2) / (sxx - sx * sx / k);
        out.slope_stderr = std::sqrt(std::max(var, 0.0));
    }
    out.pairs = pairs;
    return out;
}

} // namespace mfl
