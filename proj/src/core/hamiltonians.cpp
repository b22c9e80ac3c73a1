#include "hamiltonians.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace gmelab {

namespace {

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

double pair_zero_prob(const std::vector<double>& probs, int i, int j) {
    const std::uint64_t mask =
        (std::uint64_t(1) << i) | (std::uint64_t(1) << j);
    double s = 0.0;
    for (std::size_t k = 0; k < probs.size(); ++k) {
        if ((k & mask) == 0) s += probs[k];
    }
    return s;
}

std::vector<double> ansatz_probabilities(const PureState& target,
                                         const ProductParams& params) {
    return probabilities(apply_product_unitary_dagger(target, params));
}

void enumerate_matchings_rec(std::vector<int>& unused,
                             std::vector<std::pair<int, int>>& current,
                             std::vector<PairPartition>& out,
                             const std::optional<int>& leftover) {
    if (unused.empty()) {
        PairPartition g;
        g.pairs = current;
        g.leftover = leftover;
        out.push_back(std::move(g));
        return;
    }
    const int first = unused.front();
    for (std::size_t idx = 1; idx < unused.size(); ++idx) {
        const int partner = unused[idx];
        std::vector<int> rest;
        rest.reserve(unused.size() - 2);
        for (std::size_t t = 1; t < unused.size(); ++t) {
            if (t != idx) rest.push_back(unused[t]);
        }
        current.emplace_back(first, partner);
        enumerate_matchings_rec(rest, current, out, leftover);
        current.pop_back();
    }
}

}  // namespace

double global_infidelity_exact(const PureState& target,
                               const ProductParams& params) {
    return 1.0 - fidelity_exact(target, params);
}

double global_infidelity_sampled(const PureState& target,
                                 const ProductParams& params, long long shots,
                                 RngStream& rng, const NoiseModel* noise) {
    double p0;
    if (noise == nullptr || noise->is_trivial()) {
        p0 = fidelity_exact(target, params);
    } else {
        const std::vector<double> corrupted =
            corrupt_distribution(ansatz_probabilities(target, params), *noise);
        p0 = corrupted[0];
    }
    const long long hits = count_zero_outcomes(p0, shots, rng);
    return 1.0 - static_cast<double>(hits) / static_cast<double>(shots);
}

double local_infidelity_exact(const PureState& target,
                              const ProductParams& params, int i, int j) {
    require(i != j, "local infidelity needs two distinct qubits");
    require(i >= 0 && j >= 0 && i < target.n && j < target.n,
            "qubit index out of range");
    return 1.0 - pair_zero_prob(ansatz_probabilities(target, params), i, j);
}

double expected_hl_exact(const PureState& target,
                         const ProductParams& params) {
    const int n = target.n;
    require(n >= 2, "<H_L> needs n >= 2");
    const std::vector<double> probs = ansatz_probabilities(target, params);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            sum += 1.0 - pair_zero_prob(probs, i, j);
        }
    }
    return sum / (0.5 * n * (n - 1));
}

BoundsReport infidelity_bounds(const PureState& target,
                               const ProductParams& params) {
    BoundsReport r;
    r.hl_value = expected_hl_exact(target, params);
    r.lower = r.hl_value;
    r.upper = 0.5 * target.n * r.hl_value;
    r.global = global_infidelity_exact(target, params);
    return r;
}

PairPartition sample_partition(int n, RngStream& rng) {
    require(n >= 2, "partition needs n >= 2");
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    for (int k = n - 1; k > 0; --k) {
        const int pick = static_cast<int>(rng.uniform_int(std::uint64_t(k) + 1));
        std::swap(order[std::size_t(k)], order[std::size_t(pick)]);
    }
    PairPartition g;
    for (int k = 0; k + 1 < n; k += 2) {
        g.pairs.emplace_back(order[std::size_t(k)], order[std::size_t(k) + 1]);
    }
    if (n % 2 == 1) g.leftover = order.back();
    return g;
}

std::vector<PairPartition> enumerate_partitions(int n) {
    require(n >= 2, "partition needs n >= 2");
    std::vector<PairPartition> out;
    std::vector<std::pair<int, int>> current;
    if (n % 2 == 0) {
        std::vector<int> all(static_cast<std::size_t>(n));
        std::iota(all.begin(), all.end(), 0);
        enumerate_matchings_rec(all, current, out, std::nullopt);
    } else {
        for (int leftover = 0; leftover < n; ++leftover) {
            std::vector<int> rest;
            for (int q = 0; q < n; ++q) {
                if (q != leftover) rest.push_back(q);
            }
            enumerate_matchings_rec(rest, current, out, leftover);
        }
    }
    return out;
}

double xg_exact(const PureState& target, const ProductParams& params,
                const PairPartition& g) {
    require(!g.pairs.empty(), "empty partition");
    const std::vector<double> probs = ansatz_probabilities(target, params);
    double sum = 0.0;
    for (const auto& [i, j] : g.pairs) {
        sum += 1.0 - pair_zero_prob(probs, i, j);
    }
    return sum / static_cast<double>(g.pairs.size());
}

double xg_from_record(const ShotRecord& record, const PairPartition& g) {
    require(!g.pairs.empty(), "empty partition");
    require(record.total > 0, "empty shot record");
    double sum = 0.0;
    for (const auto& [i, j] : g.pairs) {
        const std::uint64_t mask =
            (std::uint64_t(1) << i) | (std::uint64_t(1) << j);
        long long hits = 0;
        for (const auto& [outcome, count] : record.counts) {
            if ((outcome & mask) == 0) hits += count;
        }
        sum += 1.0 -
               static_cast<double>(hits) / static_cast<double>(record.total);
    }
    return sum / static_cast<double>(g.pairs.size());
}

double xg_estimate(const PureState& target, const ProductParams& params,
                   const PairPartition& g, long long shots, RngStream& rng,
                   const NoiseModel* noise) {
    std::vector<double> probs = ansatz_probabilities(target, params);
    if (noise != nullptr && !noise->is_trivial()) {
        probs = corrupt_distribution(probs, *noise);
    }
    const ShotRecord record = sample_shots(probs, shots, rng);
    return xg_from_record(record, g);
}

double xg_mse_bound(int n, double hl_value) {
    require(n >= 4, "MSE bound needs n >= 4");
    const double slope =
        static_cast<double>(n - 1) / ((n - 2) * (n - 3)) - 2.0 / n;
    return 2.0 / n + slope * hl_value * hl_value;
}

std::vector<SpectrumEntry> hl_spectrum(int n) {
    require(n >= 2, "spectrum needs n >= 2");
    std::vector<SpectrumEntry> out;
    out.reserve(std::size_t(n) + 1);
    double binom = 1.0;
    for (int k = 0; k <= n; ++k) {
        SpectrumEntry e;
        e.k = k;
        const double zeros = n - k;
        e.eigenvalue =
            k >= n - 1 ? 1.0 : 1.0 - zeros * (zeros - 1.0) / (n * (n - 1.0));
        e.multiplicity = binom;
        out.push_back(e);
        binom = binom * (n - k) / (k + 1.0);
    }
    return out;
}

std::vector<double> hl_diagonal_assembled(int n) {
    require(n >= 2 && n <= 20, "assembled diagonal limited to 2 <= n <= 20");
    const std::size_t dim = std::size_t(1) << n;
    std::vector<double> diag(dim, 1.0);
    const double w = 2.0 / (n * (n - 1.0));
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const std::uint64_t mask =
                (std::uint64_t(1) << i) | (std::uint64_t(1) << j);
            for (std::size_t x = 0; x < dim; ++x) {
                if ((x & mask) == 0) diag[x] -= w;
            }
        }
    }
    return diag;
}

double interpolated_cost_exact(const PureState& target,
                               const ProductParams& params, double lambda) {
    require(lambda >= 0.0 && lambda <= 1.0, "lambda out of [0,1]");
    double cost = 0.0;
    if (lambda < 1.0) cost += (1.0 - lambda) * expected_hl_exact(target, params);
    if (lambda > 0.0) cost += lambda * global_infidelity_exact(target, params);
    return cost;
}

double interpolated_cost_sampled(const PureState& target,
                                 const ProductParams& params, double lambda,
                                 long long shots, RngStream& rng,
                                 const NoiseModel* noise) {
    require(lambda >= 0.0 && lambda <= 1.0, "lambda out of [0,1]");
    std::vector<double> probs = ansatz_probabilities(target, params);
    if (noise != nullptr && !noise->is_trivial()) {
        probs = corrupt_distribution(probs, *noise);
    }
    const ShotRecord record = sample_shots(probs, shots, rng);
    const int n = target.n;
    double hl = 0.0;
    int pairs = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const std::uint64_t mask =
                (std::uint64_t(1) << i) | (std::uint64_t(1) << j);
            long long hits = 0;
            for (const auto& [outcome, count] : record.counts) {
                if ((outcome & mask) == 0) hits += count;
            }
            hl += 1.0 - static_cast<double>(hits) /
                            static_cast<double>(record.total);
            ++pairs;
        }
    }
    hl /= pairs;
    const auto it = record.counts.find(0);
    const long long zero_hits = it == record.counts.end() ? 0 : it->second;
    const double global =
        1.0 - static_cast<double>(zero_hits) /
                  static_cast<double>(record.total);
    return (1.0 - lambda) * hl + lambda * global;
}

}  // namespace gmelab
