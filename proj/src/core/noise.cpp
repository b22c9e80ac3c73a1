#include "noise.hpp"

#include <cmath>
#include <stdexcept>

namespace gmelab {

namespace {

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

int qubits_for(std::size_t dim) {
    int n = 0;
    while ((std::size_t(1) << n) < dim) ++n;
    return n;
}

// Applies the 2x2 matrix ((m00, m01), (m10, m11)) on qubit j of a
// distribution, in place.
void apply_qubit_matrix(std::vector<double>& p, int j, double m00, double m01,
                        double m10, double m11) {
    const std::size_t bit = std::size_t(1) << j;
    for (std::size_t base = 0; base < p.size(); base += 2 * bit) {
        for (std::size_t k = base; k < base + bit; ++k) {
            const double a0 = p[k];
            const double a1 = p[k + bit];
            p[k] = m00 * a0 + m01 * a1;
            p[k + bit] = m10 * a0 + m11 * a1;
        }
    }
}

}  // namespace

NoiseModel NoiseModel::uniform(int n, double depolarizing, double p01,
                               double p10) {
    NoiseModel m;
    m.depolarizing = depolarizing;
    m.p01.assign(std::size_t(n), p01);
    m.p10.assign(std::size_t(n), p10);
    m.validate(n);
    return m;
}

NoiseModel NoiseModel::study_default(int n) {
    return uniform(n, 0.02, 0.015, 0.015);
}

bool NoiseModel::is_trivial() const {
    if (depolarizing != 0.0) return false;
    for (double v : p01)
        if (v != 0.0) return false;
    for (double v : p10)
        if (v != 0.0) return false;
    return true;
}

void NoiseModel::validate(int n) const {
    require(static_cast<int>(p01.size()) == n &&
                static_cast<int>(p10.size()) == n,
            "noise model qubit count mismatch");
    require(depolarizing >= 0.0 && depolarizing <= 1.0,
            "depolarizing probability out of [0,1]");
    for (int j = 0; j < n; ++j) {
        require(p01[j] >= 0.0 && p01[j] <= 1.0 && p10[j] >= 0.0 &&
                    p10[j] <= 1.0,
                "readout probability out of [0,1]");
    }
}

std::vector<double> corrupt_distribution(const std::vector<double>& probs,
                                         const NoiseModel& model) {
    const int n = qubits_for(probs.size());
    model.validate(n);
    std::vector<double> out = probs;
    for (int j = 0; j < n; ++j) {
        // Confusion matrix C_j, columns indexed by the true outcome.
        apply_qubit_matrix(out, j, 1.0 - model.p01[j], model.p10[j],
                           model.p01[j], 1.0 - model.p10[j]);
    }
    if (model.depolarizing > 0.0) {
        const double u = model.depolarizing / static_cast<double>(out.size());
        for (double& v : out) v = (1.0 - model.depolarizing) * v + u;
    }
    return out;
}

MitigatedDistribution mitigate_readout(const std::vector<double>& empirical,
                                       const NoiseModel& model) {
    const int n = qubits_for(empirical.size());
    model.validate(n);
    MitigatedDistribution out;
    out.raw = empirical;
    for (int j = 0; j < n; ++j) {
        const double det = 1.0 - model.p01[j] - model.p10[j];
        if (std::abs(det) <= 1e-6) {
            throw std::invalid_argument(
                "singular readout confusion matrix: |1 - p01 - p10| <= 1e-6");
        }
        const double inv = 1.0 / det;
        apply_qubit_matrix(out.raw, j, (1.0 - model.p10[j]) * inv,
                           -model.p10[j] * inv, -model.p01[j] * inv,
                           (1.0 - model.p01[j]) * inv);
    }
    out.clipped = out.raw;
    double total = 0.0;
    for (double& v : out.clipped) {
        if (v < 0.0) v = 0.0;
        total += v;
    }
    if (total > 0.0) {
        for (double& v : out.clipped) v /= total;
    }
    return out;
}

}  // namespace gmelab
