#pragma once

#include <vector>

namespace gmelab {

// Simplified parametric noise model applied at the sampling level: with
// probability `depolarizing` a shot is replaced by a uniform n-bit
// outcome; independently, each qubit's readout flips 0->1 with p01 and
// 1->0 with p10.
struct NoiseModel {
    double depolarizing = 0.0;
    std::vector<double> p01;  // P(read 1 | true 0), per qubit
    std::vector<double> p10;  // P(read 0 | true 1), per qubit

    static NoiseModel uniform(int n, double depolarizing, double p01,
                              double p10);
    // Artifact defaults for the 7-qubit noise study.
    static NoiseModel study_default(int n);

    int qubits() const { return static_cast<int>(p01.size()); }
    bool is_trivial() const;
    void validate(int n) const;
};

struct MitigatedDistribution {
    std::vector<double> raw;      // quasi-probabilities, may dip below 0
    std::vector<double> clipped;  // clipped to [0,inf) and renormalized
};

// (1 - p_d) (C_1 x ... x C_n) p + p_d * uniform, via n per-qubit
// contractions in O(n 2^n).
std::vector<double> corrupt_distribution(const std::vector<double>& probs,
                                         const NoiseModel& model);

// Per-qubit confusion-matrix inversion of an empirical distribution.
// Only readout error is inverted; depolarizing noise is left in place.
MitigatedDistribution mitigate_readout(const std::vector<double>& empirical,
                                       const NoiseModel& model);

}  // namespace gmelab
