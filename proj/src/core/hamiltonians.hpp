#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "noise.hpp"
#include "statevector.hpp"

namespace gmelab {

// A set of floor(n/2) disjoint qubit pairs, plus a leftover qubit when n
// is odd. One group g of the matching ensemble.
struct PairPartition {
    std::vector<std::pair<int, int>> pairs;
    std::optional<int> leftover;
};

struct SpectrumEntry {
    int k = 0;            // Hamming weight
    double eigenvalue = 0.0;
    double multiplicity = 0.0;  // binomial(n, k)
};

struct BoundsReport {
    double hl_value = 0.0;  // <H_L>
    double lower = 0.0;     // = hl_value
    double upper = 0.0;     // = (n/2) * hl_value
    double global = 0.0;    // exact global infidelity
};

double global_infidelity_exact(const PureState& target,
                               const ProductParams& params);

// Shot estimate of the global infidelity: 1 - count(0...0)/S, optionally
// under the sampling-level noise model.
double global_infidelity_sampled(const PureState& target,
                                 const ProductParams& params, long long shots,
                                 RngStream& rng,
                                 const NoiseModel* noise = nullptr);

// 1 - P(bit i = 0 and bit j = 0) of the ansatz state.
double local_infidelity_exact(const PureState& target,
                              const ProductParams& params, int i, int j);

// Mean of local_infidelity_exact over all n(n-1)/2 unordered pairs.
double expected_hl_exact(const PureState& target, const ProductParams& params);

BoundsReport infidelity_bounds(const PureState& target,
                               const ProductParams& params);

// Uniform over all (near-)perfect matchings: shuffle 0..n-1, pair
// consecutive entries; the odd element out is the leftover.
PairPartition sample_partition(int n, RngStream& rng);

// All (n-1)!! perfect matchings (even n) or near-perfect matchings with
// one leftover (odd n). Test/check machinery; factorially large.
std::vector<PairPartition> enumerate_partitions(int n);

// Mean of the pair local infidelities of g on the exact distribution.
double xg_exact(const PureState& target, const ProductParams& params,
                const PairPartition& g);

// Pair-marginal mean extracted from one shared full-register ShotRecord.
double xg_from_record(const ShotRecord& record, const PairPartition& g);

// One shared S-shot sample of the ansatz distribution, marginalized per
// pair of g.
double xg_estimate(const PureState& target, const ProductParams& params,
                   const PairPartition& g, long long shots, RngStream& rng,
                   const NoiseModel* noise = nullptr);

// MSE bound 2/n + ((n-1)/((n-2)(n-3)) - 2/n) <H_L>^2; defined for n >= 4.
double xg_mse_bound(int n, double hl_value);

// Closed-form spectrum of H_L, indexed by Hamming weight k = 0..n.
std::vector<SpectrumEntry> hl_spectrum(int n);

// Explicitly assembled 2^n diagonal of H_L from the projector sum
// definition; independent route used by spectrum checks (n <= ~20).
std::vector<double> hl_diagonal_assembled(int n);

// (1 - lambda) <H_L> + lambda <H_G>, exact.
double interpolated_cost_exact(const PureState& target,
                               const ProductParams& params, double lambda);

// Sampled variant: one S-shot record evaluates both terms.
double interpolated_cost_sampled(const PureState& target,
                                 const ProductParams& params, double lambda,
                                 long long shots, RngStream& rng,
                                 const NoiseModel* noise = nullptr);

}  // namespace gmelab
