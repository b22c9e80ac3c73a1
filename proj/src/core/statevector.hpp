#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <vector>

#include "rng.hpp"

namespace gmelab {

using cplx = std::complex<double>;

// Dense n-qubit pure state. Basis convention: bit j of the amplitude
// index is the computational-basis outcome of qubit j, with qubit 0 the
// least significant bit. Amplitudes are kept normalized.
struct PureState {
    int n = 0;
    std::vector<cplx> amp;

    static PureState zero(int n);
    // Normalizes the input (tolerates drift up to 1e-8, rejects ~zero norm).
    static PureState from_amplitudes(int n, std::vector<cplx> amplitudes);

    std::size_t dim() const { return amp.size(); }
};

// Per-qubit complex 2-vectors (z0_j, z1_j): the 2n-component complex
// parameter vector of the product ansatz. Entry j lives at components
// 2j and 2j+1. Normalization happens inside unitary construction.
struct ProductParams {
    int n = 0;
    std::vector<cplx> z;

    static ProductParams identity(int n);
    // iid standard complex Gaussian components.
    static ProductParams random(int n, RngStream& rng);

    cplx z0(int j) const { return z[2 * std::size_t(j)]; }
    cplx z1(int j) const { return z[2 * std::size_t(j) + 1]; }
};

struct Unitary2 {
    cplx u00, u01, u10, u11;
};

// Multiset of measured n-bit outcomes.
struct ShotRecord {
    int n = 0;
    long long total = 0;
    std::map<std::uint64_t, long long> counts;
};

// Single-qubit unitary whose first column is (z0, z1) normalized; second
// column completed as (-conj(z1), conj(z0)) / norm. Throws on a
// (near-)zero parameter vector.
Unitary2 unitary_from_params(cplx z0, cplx z1);

// U^dagger(theta) |state>, one single-qubit pass per qubit, O(n 2^n).
PureState apply_product_unitary_dagger(const PureState& state,
                                       const ProductParams& params);

// The product state U(theta)|0...0> = tensor_j U_j|0>, built by Kronecker
// doubling in O(2^n).
PureState product_state(const ProductParams& params);

std::vector<double> probabilities(const PureState& state);

// |<0...0| U^dagger(theta) |target>|^2 = |<target|product_state>|^2.
double fidelity_exact(const PureState& target, const ProductParams& params);

// Multinomial sample of S full-register shots via inverse CDF; one
// uniform draw per shot, outcomes walked in index order.
ShotRecord sample_shots(const std::vector<double>& probs, long long shots,
                        RngStream& rng);

// Number of shots whose outcome is basis index 0. Consumes exactly the
// same rng draws as sample_shots and agrees with its count of outcome 0
// (index 0 owns the CDF cell [0, p0)).
long long count_zero_outcomes(double p0, long long shots, RngStream& rng);

PureState haar_random_state(int n, RngStream& rng);

}  // namespace gmelab
