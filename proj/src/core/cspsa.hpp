#pragma once

#include <string_view>
#include <utility>
#include <vector>

#include "statevector.hpp"

namespace gmelab {

// Gain schedule a_k = a/(k+1+A)^s, c_k = b/(k+1)^r, with k counted from 0.
struct GainSet {
    double a = 3.0;
    double b = 0.1;
    double A = 0.0;
    double s = 0.602;
    double r = 0.101;

    void validate() const;
};

// "standard" or "asymptotic".
GainSet preset_gains(std::string_view name);

std::pair<double, double> gains_at(const GainSet& gains, int k);

// iid uniform components from {+1, -1, +i, -i}.
std::vector<cplx> sample_perturbation(int dim, RngStream& rng);

// Two-point complex stochastic gradient: component i is
// (f_plus - f_minus) / (2 c_k conj(delta_i)).
//
// Note on the conjugation: with unit-modulus perturbations this equals
// multiplying the central difference by delta_i. Dividing by delta_i
// instead (the other sign of the conjugation) yields an estimator whose
// mean is d f / d theta rather than the Wirtinger descent direction
// d f / d theta*, and the update theta - a g then diverges even on
// quadratics; see the unit tests for both facts.
std::vector<cplx> gradient_estimate(double f_plus, double f_minus, double c_k,
                                    const std::vector<cplx>& delta);

// theta - a_k * grad, with a per-qubit degeneracy guard: any qubit whose
// updated 2-vector falls below norm 1e-12 keeps its previous value.
ProductParams step(const ProductParams& params, const std::vector<cplx>& grad,
                   double a_k);

}  // namespace gmelab
