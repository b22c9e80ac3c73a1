#pragma once

#include <cstdint>
#include <string>

namespace gmelab {

// Machine-readable result of one property suite.
struct CheckReport {
    bool pass = false;
    double margin1 = 0.0;
    double margin2 = 0.0;
    std::string detail;
};

// Sandwich property <H_L> <= I <= (n/2) <H_L> on random (Haar state,
// random params) pairs, plus zero-coincidence at a product optimum.
// margin1/margin2: worst lower/upper violations (<= 0 means satisfied).
CheckReport check_bounds(int n, int samples, std::uint64_t seed,
                         double tolerance = 1e-9);

// Exhaustive matching enumeration with exact marginals: unbiasedness of
// X_g and its variance against the MSE bound, over random instances.
// margin1: worst |mean(X_g) - <H_L>|; margin2: worst variance excess.
CheckReport check_estimator(int n, int instances, std::uint64_t seed);

// Closed-form spectrum against the explicitly assembled diagonal of H_L.
// margin1: worst eigenvalue mismatch; margin2: multiplicity-sum defect.
CheckReport check_spectrum(int n);

}  // namespace gmelab
