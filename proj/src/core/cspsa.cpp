#include "cspsa.hpp"

#include <cmath>
#include <stdexcept>

namespace gmelab {

namespace {

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

void GainSet::validate() const {
    require(a > 0.0 && b > 0.0, "gain numerators must be positive");
    require(s > 0.0 && s <= 1.0 && r > 0.0 && r <= 1.0,
            "gain exponents must lie in (0,1]");
    require(A >= 0.0, "stability offset must be nonnegative");
}

GainSet preset_gains(std::string_view name) {
    if (name == "standard") {
        return GainSet{3.0, 0.1, 0.0, 0.602, 0.101};
    }
    if (name == "asymptotic") {
        return GainSet{3.0, 0.1, 0.0, 1.0, 0.166};
    }
    throw std::invalid_argument("unknown gain preset (use standard|asymptotic)");
}

std::pair<double, double> gains_at(const GainSet& gains, int k) {
    require(k >= 0, "iteration index must be >= 0");
    const double a_k = gains.a / std::pow(k + 1.0 + gains.A, gains.s);
    const double c_k = gains.b / std::pow(k + 1.0, gains.r);
    return {a_k, c_k};
}

std::vector<cplx> sample_perturbation(int dim, RngStream& rng) {
    require(dim >= 1, "perturbation dimension must be >= 1");
    static const cplx symbols[4] = {cplx(1, 0), cplx(-1, 0), cplx(0, 1),
                                    cplx(0, -1)};
    std::vector<cplx> delta(static_cast<std::size_t>(dim));
    for (cplx& d : delta) d = symbols[rng.uniform_int(4)];
    return delta;
}

std::vector<cplx> gradient_estimate(double f_plus, double f_minus, double c_k,
                                    const std::vector<cplx>& delta) {
    require(c_k > 0.0, "perturbation magnitude must be positive");
    const double diff = (f_plus - f_minus) / (2.0 * c_k);
    std::vector<cplx> grad(delta.size());
    for (std::size_t i = 0; i < delta.size(); ++i) {
        // 1/conj(delta) = delta for |delta| = 1.
        grad[i] = diff * delta[i];
    }
    return grad;
}

ProductParams step(const ProductParams& params, const std::vector<cplx>& grad,
                   double a_k) {
    require(grad.size() == params.z.size(), "gradient dimension mismatch");
    ProductParams out = params;
    for (int j = 0; j < params.n; ++j) {
        const std::size_t base = 2 * std::size_t(j);
        const cplx w0 = params.z[base] - a_k * grad[base];
        const cplx w1 = params.z[base + 1] - a_k * grad[base + 1];
        if (std::norm(w0) + std::norm(w1) < 1e-24) {
            continue;  // degenerate update, keep previous values
        }
        out.z[base] = w0;
        out.z[base + 1] = w1;
    }
    return out;
}

}  // namespace gmelab
