#include "checks.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <vector>

#include "gme.hpp"
#include "hamiltonians.hpp"
#include "statevector.hpp"

namespace gmelab {

namespace {

std::string format_detail(const char* fmt, double a, double b) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), fmt, a, b);
    return buf;
}

}  // namespace

CheckReport check_bounds(int n, int samples, std::uint64_t seed,
                         double tolerance) {
    CheckReport rep;
    double worst_lower = -1.0;
    double worst_upper = -1.0;
    for (int i = 0; i < samples; ++i) {
        RngStream rng(seed, 2 * std::uint64_t(i));
        const PureState state = haar_random_state(n, rng);
        RngStream prng(seed, 2 * std::uint64_t(i) + 1);
        const ProductParams params = ProductParams::random(n, prng);
        const BoundsReport b = infidelity_bounds(state, params);
        worst_lower = std::max(worst_lower, b.lower - b.global);
        worst_upper = std::max(worst_upper, b.global - b.upper);
    }
    // Tightness at a product optimum: encode random params as the target.
    RngStream prng(seed, 0xF00D);
    const ProductParams opt = ProductParams::random(n, prng);
    const PureState product = product_state(opt);
    const BoundsReport tight = infidelity_bounds(product, opt);
    const double tight_worst = std::max(
        {std::abs(tight.lower), std::abs(tight.upper), std::abs(tight.global)});
    worst_lower = std::max(worst_lower, tight_worst);

    rep.margin1 = worst_lower;
    rep.margin2 = worst_upper;
    rep.pass = worst_lower <= tolerance && worst_upper <= tolerance;
    rep.detail = format_detail(
        "worst lower violation %.3e, worst upper violation %.3e", rep.margin1,
        rep.margin2);
    return rep;
}

CheckReport check_estimator(int n, int instances, std::uint64_t seed) {
    CheckReport rep;
    const std::vector<PairPartition> groups = enumerate_partitions(n);
    double worst_bias = 0.0;
    double worst_excess = -1.0;
    for (int i = 0; i < instances; ++i) {
        RngStream rng(seed, 2 * std::uint64_t(i));
        const PureState state = haar_random_state(n, rng);
        RngStream prng(seed, 2 * std::uint64_t(i) + 1);
        const ProductParams params = ProductParams::random(n, prng);
        const double hl = expected_hl_exact(state, params);

        double mean = 0.0;
        double sq = 0.0;
        for (const PairPartition& g : groups) {
            const double x = xg_exact(state, params, g);
            mean += x;
            sq += x * x;
        }
        mean /= static_cast<double>(groups.size());
        const double var = sq / static_cast<double>(groups.size()) - mean * mean;
        worst_bias = std::max(worst_bias, std::abs(mean - hl));
        worst_excess = std::max(worst_excess, var - xg_mse_bound(n, hl));
    }
    rep.margin1 = worst_bias;
    rep.margin2 = worst_excess;
    rep.pass = worst_bias < 1e-12 && worst_excess <= 1e-12;
    rep.detail = format_detail("worst |mean - <H_L>| %.3e, worst var excess %.3e",
                               rep.margin1, rep.margin2);
    return rep;
}

CheckReport check_spectrum(int n) {
    CheckReport rep;
    const std::vector<SpectrumEntry> spectrum = hl_spectrum(n);
    double worst = 0.0;
    if (n <= 20) {
        const std::vector<double> diag = hl_diagonal_assembled(n);
        for (std::size_t x = 0; x < diag.size(); ++x) {
            const int k = std::popcount(x);
            worst = std::max(worst,
                             std::abs(diag[x] - spectrum[std::size_t(k)].eigenvalue));
        }
    }
    double mult_sum = 0.0;
    for (const SpectrumEntry& e : spectrum) mult_sum += e.multiplicity;
    const double mult_defect =
        std::abs(mult_sum - std::ldexp(1.0, n));
    rep.margin1 = worst;
    rep.margin2 = mult_defect;
    rep.pass = worst <= 1e-12 && mult_defect == 0.0 &&
               spectrum.front().eigenvalue == 0.0 &&
               std::abs(spectrum[1].eigenvalue - 2.0 / n) <= 1e-15 &&
               spectrum.back().eigenvalue == 1.0;
    rep.detail = format_detail(
        "worst eigenvalue mismatch %.3e, multiplicity defect %.3e", rep.margin1,
        rep.margin2);
    return rep;
}

}  // namespace gmelab
