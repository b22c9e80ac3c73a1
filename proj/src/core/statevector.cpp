#include "statevector.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gmelab {

namespace {

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

double norm_sq(const std::vector<cplx>& v) {
    double s = 0.0;
    for (const cplx& a : v) s += std::norm(a);
    return s;
}

}  // namespace

PureState PureState::zero(int n) {
    require(n >= 1, "qubit count must be >= 1");
    PureState st;
    st.n = n;
    st.amp.assign(std::size_t(1) << n, cplx(0.0, 0.0));
    st.amp[0] = 1.0;
    return st;
}

PureState PureState::from_amplitudes(int n, std::vector<cplx> amplitudes) {
    require(n >= 1, "qubit count must be >= 1");
    require(amplitudes.size() == (std::size_t(1) << n),
            "amplitude vector length must be 2^n");
    const double ns = norm_sq(amplitudes);
    require(ns > 1e-300, "cannot normalize a zero state");
    const double inv = 1.0 / std::sqrt(ns);
    if (std::abs(ns - 1.0) > 0.0) {
        for (cplx& a : amplitudes) a *= inv;
    }
    PureState st;
    st.n = n;
    st.amp = std::move(amplitudes);
    return st;
}

ProductParams ProductParams::identity(int n) {
    require(n >= 1, "qubit count must be >= 1");
    ProductParams p;
    p.n = n;
    p.z.assign(2 * std::size_t(n), cplx(0.0, 0.0));
    for (int j = 0; j < n; ++j) p.z[2 * std::size_t(j)] = 1.0;
    return p;
}

ProductParams ProductParams::random(int n, RngStream& rng) {
    require(n >= 1, "qubit count must be >= 1");
    ProductParams p;
    p.n = n;
    p.z.resize(2 * std::size_t(n));
    for (cplx& c : p.z) {
        const double re = rng.normal();
        const double im = rng.normal();
        c = cplx(re, im);
    }
    return p;
}

Unitary2 unitary_from_params(cplx z0, cplx z1) {
    const double ns = std::norm(z0) + std::norm(z1);
    if (ns <= 1e-300) {
        throw std::invalid_argument("degenerate ansatz parameters: (z0, z1) ~ 0");
    }
    const double inv = 1.0 / std::sqrt(ns);
    Unitary2 u;
    u.u00 = z0 * inv;
    u.u10 = z1 * inv;
    u.u01 = -std::conj(z1) * inv;
    u.u11 = std::conj(z0) * inv;
    return u;
}

PureState apply_product_unitary_dagger(const PureState& state,
                                       const ProductParams& params) {
    require(params.n == state.n, "state/params qubit count mismatch");
    PureState out = state;
    const std::size_t dim = out.dim();
    for (int j = 0; j < state.n; ++j) {
        const Unitary2 u = unitary_from_params(params.z0(j), params.z1(j));
        // Rows of U^dagger.
        const cplx d00 = std::conj(u.u00), d01 = std::conj(u.u10);
        const cplx d10 = std::conj(u.u01), d11 = std::conj(u.u11);
        const std::size_t bit = std::size_t(1) << j;
        // Hand-rolled complex arithmetic: the std::complex operator* is an
        // order of magnitude slower here (its NaN handling defeats
        // vectorization of the butterfly).
        const double r00 = d00.real(), i00 = d00.imag();
        const double r01 = d01.real(), i01 = d01.imag();
        const double r10 = d10.real(), i10 = d10.imag();
        const double r11 = d11.real(), i11 = d11.imag();
        for (std::size_t base = 0; base < dim; base += 2 * bit) {
            for (std::size_t k = base; k < base + bit; ++k) {
                const double a0r = out.amp[k].real(), a0i = out.amp[k].imag();
                const double a1r = out.amp[k + bit].real();
                const double a1i = out.amp[k + bit].imag();
                out.amp[k] = cplx(r00 * a0r - i00 * a0i + r01 * a1r - i01 * a1i,
                                  r00 * a0i + i00 * a0r + r01 * a1i + i01 * a1r);
                out.amp[k + bit] =
                    cplx(r10 * a0r - i10 * a0i + r11 * a1r - i11 * a1i,
                         r10 * a0i + i10 * a0r + r11 * a1i + i11 * a1r);
            }
        }
    }
    return out;
}

PureState product_state(const ProductParams& params) {
    PureState st;
    st.n = params.n;
    st.amp.assign(std::size_t(1) << params.n, cplx(0.0, 0.0));
    st.amp[0] = 1.0;
    std::size_t filled = 1;
    for (int j = 0; j < params.n; ++j) {
        const Unitary2 u = unitary_from_params(params.z0(j), params.z1(j));
        const double r0 = u.u00.real(), i0 = u.u00.imag();
        const double r1 = u.u10.real(), i1 = u.u10.imag();
        for (std::size_t k = 0; k < filled; ++k) {
            const double ar = st.amp[k].real(), ai = st.amp[k].imag();
            st.amp[k] = cplx(ar * r0 - ai * i0, ar * i0 + ai * r0);
            st.amp[k + filled] = cplx(ar * r1 - ai * i1, ar * i1 + ai * r1);
        }
        filled <<= 1;
    }
    return st;
}

std::vector<double> probabilities(const PureState& state) {
    std::vector<double> p(state.dim());
    for (std::size_t k = 0; k < p.size(); ++k) p[k] = std::norm(state.amp[k]);
    return p;
}

double fidelity_exact(const PureState& target, const ProductParams& params) {
    require(params.n == target.n, "state/params qubit count mismatch");
    const PureState phi = product_state(params);
    double re = 0.0, im = 0.0;
    for (std::size_t k = 0; k < phi.dim(); ++k) {
        const double tr = target.amp[k].real(), ti = target.amp[k].imag();
        const double pr = phi.amp[k].real(), pi = phi.amp[k].imag();
        re += tr * pr + ti * pi;
        im += tr * pi - ti * pr;
    }
    return re * re + im * im;
}

ShotRecord sample_shots(const std::vector<double>& probs, long long shots,
                        RngStream& rng) {
    require(shots >= 1, "shot count must be >= 1");
    double total = 0.0;
    for (double p : probs) {
        require(p >= -1e-12, "negative probability");
        total += p;
    }
    require(std::abs(total - 1.0) <= 1e-8, "probabilities must sum to 1");
    std::vector<double> cdf(probs.size());
    double acc = 0.0;
    for (std::size_t k = 0; k < probs.size(); ++k) {
        acc += probs[k] / total;
        cdf[k] = acc;
    }
    cdf.back() = 1.0;

    int n = 0;
    while ((std::size_t(1) << n) < probs.size()) ++n;
    ShotRecord rec;
    rec.n = n;
    rec.total = shots;
    for (long long s = 0; s < shots; ++s) {
        const double u = rng.uniform();
        const auto it = std::lower_bound(cdf.begin(), cdf.end(), u,
                                         [](double c, double v) { return c <= v; });
        const std::uint64_t outcome =
            static_cast<std::uint64_t>(it - cdf.begin());
        ++rec.counts[outcome];
    }
    return rec;
}

long long count_zero_outcomes(double p0, long long shots, RngStream& rng) {
    require(shots >= 1, "shot count must be >= 1");
    long long hits = 0;
    for (long long s = 0; s < shots; ++s) {
        if (rng.uniform() < p0) ++hits;
    }
    return hits;
}

PureState haar_random_state(int n, RngStream& rng) {
    require(n >= 1, "qubit count must be >= 1");
    std::vector<cplx> amp(std::size_t(1) << n);
    for (cplx& a : amp) {
        const double re = rng.normal();
        const double im = rng.normal();
        a = cplx(re, im);
    }
    return PureState::from_amplitudes(n, std::move(amp));
}

}  // namespace gmelab
