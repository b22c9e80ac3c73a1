#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>

#include "core/statevector.hpp"

using namespace gmelab;

TEST_CASE("from_amplitudes normalizes and rejects the zero vector") {
    PureState st = PureState::from_amplitudes(1, {cplx(3.0, 0.0), cplx(0.0, 4.0)});
    CHECK(std::abs(st.amp[0] - cplx(0.6, 0.0)) < 1e-15);
    CHECK(std::abs(st.amp[1] - cplx(0.0, 0.8)) < 1e-15);
    CHECK_THROWS_AS(PureState::from_amplitudes(1, {cplx(0, 0), cplx(0, 0)}),
                    std::invalid_argument);
    CHECK_THROWS_AS(PureState::from_amplitudes(2, {cplx(1, 0), cplx(0, 0)}),
                    std::invalid_argument);
}

TEST_CASE("unitary_from_params builds a unitary with the given first column") {
    const cplx z0(0.3, -0.2), z1(-0.8, 0.45);
    const Unitary2 u = unitary_from_params(z0, z1);
    const double nm = std::sqrt(std::norm(z0) + std::norm(z1));
    CHECK(std::abs(u.u00 - z0 / nm) < 1e-14);
    CHECK(std::abs(u.u10 - z1 / nm) < 1e-14);
    // Columns orthonormal.
    CHECK(std::abs(std::norm(u.u00) + std::norm(u.u10) - 1.0) < 1e-12);
    CHECK(std::abs(std::norm(u.u01) + std::norm(u.u11) - 1.0) < 1e-12);
    CHECK(std::abs(std::conj(u.u00) * u.u01 + std::conj(u.u10) * u.u11) < 1e-12);

    CHECK_THROWS_AS(unitary_from_params(cplx(0, 0), cplx(0, 0)),
                    std::invalid_argument);
}

TEST_CASE("identity params act trivially and random applications preserve norm") {
    RngStream rng(42, 0);
    const PureState st = haar_random_state(4, rng);
    const PureState same =
        apply_product_unitary_dagger(st, ProductParams::identity(4));
    for (std::size_t k = 0; k < st.dim(); ++k) {
        CHECK(std::abs(same.amp[k] - st.amp[k]) < 1e-14);
    }
    const ProductParams params = ProductParams::random(4, rng);
    const PureState rotated = apply_product_unitary_dagger(st, params);
    double nm = 0.0;
    for (const cplx& a : rotated.amp) nm += std::norm(a);
    CHECK(nm == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("product_state inverts under its own dagger") {
    RngStream rng(7, 3);
    const ProductParams params = ProductParams::random(5, rng);
    const PureState phi = product_state(params);
    // U^dagger U |0..0> = |0..0>, so the rotated product state has all its
    // weight on index 0.
    const PureState back = apply_product_unitary_dagger(phi, params);
    CHECK(std::norm(back.amp[0]) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fidelity_exact(phi, params) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("fidelity agrees with the zero-outcome probability of the rotated state") {
    RngStream rng(11, 0);
    const PureState target = haar_random_state(4, rng);
    const ProductParams params = ProductParams::random(4, rng);
    const PureState rotated = apply_product_unitary_dagger(target, params);
    CHECK(fidelity_exact(target, params) ==
          doctest::Approx(std::norm(rotated.amp[0])).epsilon(1e-12));
}

TEST_CASE("sample_shots returns a valid multiset and respects the distribution") {
    const std::vector<double> probs = {0.5, 0.25, 0.125, 0.125};
    RngStream rng(1, 0);
    const ShotRecord rec = sample_shots(probs, 100000, rng);
    CHECK(rec.n == 2);
    long long total = 0;
    for (const auto& [outcome, count] : rec.counts) {
        CHECK(outcome < 4);
        total += count;
    }
    CHECK(total == rec.total);
    CHECK(static_cast<double>(rec.counts.at(0)) / 100000.0 ==
          doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("count_zero_outcomes consumes the same draws as sample_shots") {
    const std::vector<double> probs = {0.37, 0.23, 0.2, 0.2};
    RngStream rng_a(9, 5);
    RngStream rng_b(9, 5);
    const ShotRecord rec = sample_shots(probs, 5000, rng_a);
    const long long zeros = count_zero_outcomes(0.37, 5000, rng_b);
    CHECK(zeros == rec.counts.at(0));
    // Both consumed one uniform per shot: the next draws coincide.
    CHECK(rng_a.uniform() == rng_b.uniform());
}

TEST_CASE("haar states are normalized and seeded deterministically") {
    RngStream a(123, 1), b(123, 1), c(123, 2);
    const PureState s1 = haar_random_state(3, a);
    const PureState s2 = haar_random_state(3, b);
    const PureState s3 = haar_random_state(3, c);
    double nm = 0.0, diff12 = 0.0, diff13 = 0.0;
    for (std::size_t k = 0; k < s1.dim(); ++k) {
        nm += std::norm(s1.amp[k]);
        diff12 += std::abs(s1.amp[k] - s2.amp[k]);
        diff13 += std::abs(s1.amp[k] - s3.amp[k]);
    }
    CHECK(nm == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(diff12 == 0.0);
    CHECK(diff13 > 1e-3);
}

TEST_CASE("identity params encode |0...0>") {
    const PureState phi = product_state(ProductParams::identity(3));
    CHECK(std::abs(phi.amp[0] - cplx(1.0, 0.0)) < 1e-15);
    for (std::size_t k = 1; k < phi.dim(); ++k) CHECK(std::abs(phi.amp[k]) == 0.0);
}
