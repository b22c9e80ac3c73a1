#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "core/gme.hpp"
#include "core/hamiltonians.hpp"
#include "core/noise.hpp"
#include "core/statevector.hpp"

using namespace gmelab;

TEST_CASE("trivial model is the identity map") {
    const NoiseModel none = NoiseModel::uniform(3, 0.0, 0.0, 0.0);
    CHECK(none.is_trivial());
    const std::vector<double> p = {0.4, 0.1, 0.2, 0.05, 0.05, 0.1, 0.05, 0.05};
    const std::vector<double> q = corrupt_distribution(p, none);
    for (std::size_t k = 0; k < p.size(); ++k) CHECK(q[k] == doctest::Approx(p[k]));
    const MitigatedDistribution m = mitigate_readout(p, none);
    for (std::size_t k = 0; k < p.size(); ++k) {
        CHECK(m.clipped[k] == doctest::Approx(p[k]));
    }
}

TEST_CASE("full depolarizing maps everything to uniform") {
    const NoiseModel full = NoiseModel::uniform(2, 1.0, 0.0, 0.0);
    const std::vector<double> p = {1.0, 0.0, 0.0, 0.0};
    for (const double v : corrupt_distribution(p, full)) {
        CHECK(v == doctest::Approx(0.25));
    }
}

TEST_CASE("single-qubit confusion matrix acts as expected") {
    const NoiseModel m = NoiseModel::uniform(1, 0.0, 0.1, 0.0);
    const std::vector<double> q = corrupt_distribution({1.0, 0.0}, m);
    CHECK(q[0] == doctest::Approx(0.9));
    CHECK(q[1] == doctest::Approx(0.1));
}

TEST_CASE("corrupt preserves the total probability") {
    RngStream rng(4, 0);
    for (int n = 1; n <= 6; ++n) {
        const NoiseModel m = NoiseModel::uniform(n, 0.03, 0.02, 0.04);
        const PureState st = haar_random_state(n, rng);
        const std::vector<double> q = corrupt_distribution(probabilities(st), m);
        double total = 0.0;
        for (const double v : q) {
            CHECK(v >= -1e-15);
            total += v;
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("mitigation inverts readout corruption exactly") {
    RngStream rng(8, 0);
    for (int n = 1; n <= 8; ++n) {
        const NoiseModel m = NoiseModel::uniform(n, 0.0, 0.02, 0.03);
        const std::vector<double> p = probabilities(haar_random_state(n, rng));
        const MitigatedDistribution back =
            mitigate_readout(corrupt_distribution(p, m), m);
        for (std::size_t k = 0; k < p.size(); ++k) {
            CHECK(std::abs(back.clipped[k] - p[k]) < 1e-10);
        }
    }
}

TEST_CASE("GHZ distribution round-trips through symmetric readout error") {
    const PureState ghz = make_named_state(StateFamily::Ghz, 3);
    const NoiseModel m = NoiseModel::uniform(3, 0.0, 0.02, 0.02);
    const std::vector<double> p = probabilities(ghz);
    const MitigatedDistribution back =
        mitigate_readout(corrupt_distribution(p, m), m);
    for (std::size_t k = 0; k < p.size(); ++k) {
        CHECK(std::abs(back.raw[k] - p[k]) < 1e-10);
        CHECK(std::abs(back.clipped[k] - p[k]) < 1e-10);
    }
}

TEST_CASE("singular confusion matrices are rejected") {
    const NoiseModel singular = NoiseModel::uniform(2, 0.0, 0.5, 0.5);
    const std::vector<double> p = {0.25, 0.25, 0.25, 0.25};
    CHECK_THROWS_AS(mitigate_readout(p, singular), std::invalid_argument);
}

TEST_CASE("clipped distribution is a distribution even when raw dips negative") {
    // Strong asymmetric readout error on a sharp empirical distribution
    // produces negative quasi-probabilities after inversion.
    const NoiseModel m = NoiseModel::uniform(1, 0.0, 0.0, 0.2);
    const MitigatedDistribution out = mitigate_readout({0.1, 0.9}, m);
    CHECK(out.raw[0] < 0.0);
    double total = 0.0;
    for (const double v : out.clipped) {
        CHECK(v >= 0.0);
        total += v;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("mitigation helps the noisy GHZ estimate on average") {
    const int n = 4;
    const PureState ghz = make_named_state(StateFamily::Ghz, n);
    const NoiseModel m = NoiseModel::uniform(n, 0.02, 0.015, 0.015);
    const std::vector<double> noisy =
        corrupt_distribution(probabilities(ghz), m);
    double mean_raw = 0.0, mean_mitigated = 0.0;
    const int trials = 100;
    RngStream rng(77, 0);
    for (int t = 0; t < trials; ++t) {
        const ShotRecord rec = sample_shots(noisy, 2048, rng);
        std::vector<double> empirical(noisy.size(), 0.0);
        for (const auto& [outcome, count] : rec.counts) {
            empirical[outcome] = static_cast<double>(count) / rec.total;
        }
        mean_raw += (1.0 - empirical[0]) / trials;
        mean_mitigated +=
            (1.0 - mitigate_readout(empirical, m).clipped[0]) / trials;
    }
    // Exact infidelity at identity params is 0.5; readout error biases the
    // raw estimate upward and mitigation removes that bias.
    CHECK(mean_raw >= mean_mitigated);
}

TEST_CASE("model validation") {
    CHECK_THROWS_AS(NoiseModel::uniform(2, -0.1, 0.0, 0.0).validate(2),
                    std::invalid_argument);
    CHECK_THROWS_AS(NoiseModel::uniform(2, 0.0, 1.5, 0.0).validate(2),
                    std::invalid_argument);
    CHECK_THROWS_AS(NoiseModel::uniform(2, 0.0, 0.01, 0.01).validate(3),
                    std::invalid_argument);
    const NoiseModel d = NoiseModel::study_default(7);
    CHECK(d.depolarizing == doctest::Approx(0.02));
    CHECK(d.p01[3] == doctest::Approx(0.015));
    CHECK(d.p10[6] == doctest::Approx(0.015));
}
