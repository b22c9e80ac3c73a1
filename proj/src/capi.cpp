// extern "C" surface over the C++ core. Handles are heap-allocated core
// objects; exceptions are translated to gme_status codes at the boundary.

#include "gme/gme.h"

#include <cstdio>
#include <cstring>
#include <new>
#include <optional>
#include <stdexcept>
#include <string>

#include "core/checks.hpp"
#include "core/cspsa.hpp"
#include "core/gme.hpp"
#include "core/hamiltonians.hpp"
#include "core/noise.hpp"
#include "core/statevector.hpp"

using gmelab::cplx;

struct gme_state {
    gmelab::PureState value;
};
struct gme_params {
    gmelab::ProductParams value;
};
struct gme_noise_model {
    gmelab::NoiseModel value;
};
struct gme_trace {
    gmelab::RunTrace value;
};
struct gme_estimate {
    gmelab::GmeEstimate value;
    // Lazily wrapped trace views handed out by gme_estimate_trace.
    mutable std::vector<gme_trace> views;
};

namespace {

gme_status classify_error(const std::exception& e) {
    const std::string msg = e.what();
    if (msg.find("mismatch") != std::string::npos &&
        msg.find("confusion") == std::string::npos) {
        return GME_ERR_DIMENSION_MISMATCH;
    }
    if (msg.find("degenerate") != std::string::npos) {
        return GME_ERR_DEGENERATE_PARAMS;
    }
    if (msg.find("singular") != std::string::npos) {
        return GME_ERR_SINGULAR_CONFUSION;
    }
    if (msg.find("unknown") != std::string::npos) {
        return GME_ERR_UNKNOWN_NAME;
    }
    return GME_ERR_INVALID_ARGUMENT;
}

template <typename Fn>
gme_status guarded(Fn&& fn) {
    try {
        fn();
        return GME_OK;
    } catch (const std::invalid_argument& e) {
        return classify_error(e);
    } catch (const std::bad_alloc&) {
        return GME_ERR_INTERNAL;
    } catch (const std::exception& e) {
        return classify_error(e);
    } catch (...) {
        return GME_ERR_INTERNAL;
    }
}

gmelab::GainSet to_core(const gme_gains& g) {
    return gmelab::GainSet{g.a, g.b, g.A, g.s, g.r};
}

gmelab::VqaConfig to_core(const gme_run_config& c,
                          const gme_noise_model* noise) {
    gmelab::VqaConfig cfg;
    cfg.iters_local = c.iters_local;
    cfg.iters_global = c.iters_global;
    cfg.shots_local = c.shots_local;
    cfg.shots_global = c.shots_global;
    cfg.gains_local = to_core(c.gains_local);
    cfg.gains_global = to_core(c.gains_global);
    cfg.repetitions = c.repetitions;
    cfg.seed = c.seed;
    cfg.stream = c.stream;
    cfg.bp_threshold = c.bp_threshold;
    cfg.mitigate_final = c.mitigate_final != 0;
    cfg.global_counter_continues = c.global_counter_continues != 0;
    cfg.jobs = c.jobs;
    if (noise != nullptr) cfg.noise = noise->value;
    return cfg;
}

void fill_report(const gmelab::CheckReport& in, gme_check_report* out) {
    out->pass = in.pass ? 1 : 0;
    out->margin1 = in.margin1;
    out->margin2 = in.margin2;
    std::snprintf(out->detail, sizeof(out->detail), "%s", in.detail.c_str());
}

void require_c(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

extern "C" {

const char* gme_status_message(gme_status status) {
    switch (status) {
        case GME_OK: return "ok";
        case GME_ERR_INVALID_ARGUMENT: return "invalid argument";
        case GME_ERR_DIMENSION_MISMATCH: return "dimension mismatch";
        case GME_ERR_DEGENERATE_PARAMS: return "degenerate ansatz parameters";
        case GME_ERR_SINGULAR_CONFUSION: return "singular confusion matrix";
        case GME_ERR_UNKNOWN_NAME: return "unknown name";
        case GME_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

void gme_run_config_defaults(gme_run_config* config) {
    const gmelab::VqaConfig def;
    config->iters_local = def.iters_local;
    config->iters_global = def.iters_global;
    config->shots_local = def.shots_local;
    config->shots_global = def.shots_global;
    const gmelab::GainSet g = def.gains_global;
    config->gains_local = gme_gains{g.a, g.b, g.A, g.s, g.r};
    config->gains_global = gme_gains{g.a, g.b, g.A, g.s, g.r};
    config->repetitions = def.repetitions;
    config->seed = 0;
    config->stream = 0;
    config->bp_threshold = def.bp_threshold;
    config->mitigate_final = 1;
    config->global_counter_continues = 0;
    config->jobs = 1;
}

gme_status gme_preset_gains(const char* name, gme_gains* out) {
    return guarded([&] {
        require_c(name != nullptr && out != nullptr, "null argument");
        const gmelab::GainSet g = gmelab::preset_gains(name);
        *out = gme_gains{g.a, g.b, g.A, g.s, g.r};
    });
}

gme_status gme_state_named(const char* family, int n, double s,
                           gme_state** out) {
    return guarded([&] {
        require_c(family != nullptr && out != nullptr, "null argument");
        const gmelab::StateFamily fam = gmelab::parse_family(family);
        std::optional<double> weight;
        if (fam == gmelab::StateFamily::GhzW ||
            fam == gmelab::StateFamily::WWtilde) {
            weight = s;
        }
        *out = new gme_state{gmelab::make_named_state(fam, n, weight)};
    });
}

gme_status gme_state_haar(int n, uint64_t seed, uint64_t stream,
                          gme_state** out) {
    return guarded([&] {
        require_c(out != nullptr, "null argument");
        gmelab::RngStream rng(seed, stream);
        *out = new gme_state{gmelab::haar_random_state(n, rng)};
    });
}

gme_status gme_state_from_amplitudes(int n, const double* re_im,
                                     gme_state** out) {
    return guarded([&] {
        require_c(re_im != nullptr && out != nullptr, "null argument");
        require_c(n >= 1 && n <= 30, "qubit count out of range");
        std::vector<cplx> amp(std::size_t(1) << n);
        for (std::size_t k = 0; k < amp.size(); ++k) {
            amp[k] = cplx(re_im[2 * k], re_im[2 * k + 1]);
        }
        *out = new gme_state{gmelab::PureState::from_amplitudes(n, std::move(amp))};
    });
}

int gme_state_qubits(const gme_state* state) {
    return state == nullptr ? 0 : state->value.n;
}

gme_status gme_state_amplitudes(const gme_state* state, double* re_im) {
    return guarded([&] {
        require_c(state != nullptr && re_im != nullptr, "null argument");
        for (std::size_t k = 0; k < state->value.dim(); ++k) {
            re_im[2 * k] = state->value.amp[k].real();
            re_im[2 * k + 1] = state->value.amp[k].imag();
        }
    });
}

void gme_state_free(gme_state* state) { delete state; }

gme_status gme_params_identity(int n, gme_params** out) {
    return guarded([&] {
        require_c(out != nullptr, "null argument");
        *out = new gme_params{gmelab::ProductParams::identity(n)};
    });
}

gme_status gme_params_random(int n, uint64_t seed, uint64_t stream,
                             gme_params** out) {
    return guarded([&] {
        require_c(out != nullptr, "null argument");
        gmelab::RngStream rng(seed, stream);
        *out = new gme_params{gmelab::ProductParams::random(n, rng)};
    });
}

gme_status gme_params_from_components(int n, const double* re_im,
                                      gme_params** out) {
    return guarded([&] {
        require_c(re_im != nullptr && out != nullptr, "null argument");
        require_c(n >= 1, "qubit count must be >= 1");
        gmelab::ProductParams p;
        p.n = n;
        p.z.resize(2 * std::size_t(n));
        for (std::size_t c = 0; c < p.z.size(); ++c) {
            p.z[c] = cplx(re_im[2 * c], re_im[2 * c + 1]);
        }
        *out = new gme_params{std::move(p)};
    });
}

void gme_params_free(gme_params* params) { delete params; }

gme_status gme_fidelity(const gme_state* state, const gme_params* params,
                        double* out) {
    return guarded([&] {
        require_c(state != nullptr && params != nullptr && out != nullptr,
                  "null argument");
        *out = gmelab::fidelity_exact(state->value, params->value);
    });
}

gme_status gme_global_infidelity(const gme_state* state,
                                 const gme_params* params, double* out) {
    return guarded([&] {
        require_c(state != nullptr && params != nullptr && out != nullptr,
                  "null argument");
        *out = gmelab::global_infidelity_exact(state->value, params->value);
    });
}

gme_status gme_local_infidelity(const gme_state* state,
                                const gme_params* params, int i, int j,
                                double* out) {
    return guarded([&] {
        require_c(state != nullptr && params != nullptr && out != nullptr,
                  "null argument");
        *out = gmelab::local_infidelity_exact(state->value, params->value, i, j);
    });
}

gme_status gme_expected_hl(const gme_state* state, const gme_params* params,
                           double* out) {
    return guarded([&] {
        require_c(state != nullptr && params != nullptr && out != nullptr,
                  "null argument");
        *out = gmelab::expected_hl_exact(state->value, params->value);
    });
}

gme_status gme_bounds(const gme_state* state, const gme_params* params,
                      double out[4]) {
    return guarded([&] {
        require_c(state != nullptr && params != nullptr && out != nullptr,
                  "null argument");
        const gmelab::BoundsReport b =
            gmelab::infidelity_bounds(state->value, params->value);
        out[0] = b.hl_value;
        out[1] = b.lower;
        out[2] = b.upper;
        out[3] = b.global;
    });
}

gme_status gme_interpolated_cost(const gme_state* state,
                                 const gme_params* params, double lambda,
                                 double* out) {
    return guarded([&] {
        require_c(state != nullptr && params != nullptr && out != nullptr,
                  "null argument");
        *out = gmelab::interpolated_cost_exact(state->value, params->value,
                                               lambda);
    });
}

gme_status gme_hl_spectrum(int n, double* eigenvalues, double* multiplicities) {
    return guarded([&] {
        require_c(eigenvalues != nullptr && multiplicities != nullptr,
                  "null argument");
        const std::vector<gmelab::SpectrumEntry> spec = gmelab::hl_spectrum(n);
        for (const gmelab::SpectrumEntry& e : spec) {
            eigenvalues[e.k] = e.eigenvalue;
            multiplicities[e.k] = e.multiplicity;
        }
    });
}

gme_status gme_xg_mse_bound(int n, double hl_value, double* out) {
    return guarded([&] {
        require_c(out != nullptr, "null argument");
        *out = gmelab::xg_mse_bound(n, hl_value);
    });
}

gme_status gme_noise_create(int n, double depolarizing, const double* p01,
                            const double* p10, gme_noise_model** out) {
    return guarded([&] {
        require_c(p01 != nullptr && p10 != nullptr && out != nullptr,
                  "null argument");
        require_c(n >= 1, "qubit count must be >= 1");
        gmelab::NoiseModel m;
        m.depolarizing = depolarizing;
        m.p01.assign(p01, p01 + n);
        m.p10.assign(p10, p10 + n);
        m.validate(n);
        *out = new gme_noise_model{std::move(m)};
    });
}

void gme_noise_free(gme_noise_model* model) { delete model; }

gme_status gme_noise_corrupt(const gme_noise_model* model, int n,
                             const double* probs_in, double* probs_out) {
    return guarded([&] {
        require_c(model != nullptr && probs_in != nullptr &&
                      probs_out != nullptr,
                  "null argument");
        const std::size_t dim = std::size_t(1) << n;
        const std::vector<double> in(probs_in, probs_in + dim);
        const std::vector<double> result =
            gmelab::corrupt_distribution(in, model->value);
        std::memcpy(probs_out, result.data(), dim * sizeof(double));
    });
}

gme_status gme_noise_mitigate(const gme_noise_model* model, int n,
                              const double* probs_in, double* raw_out,
                              double* clipped_out) {
    return guarded([&] {
        require_c(model != nullptr && probs_in != nullptr, "null argument");
        const std::size_t dim = std::size_t(1) << n;
        const std::vector<double> in(probs_in, probs_in + dim);
        const gmelab::MitigatedDistribution result =
            gmelab::mitigate_readout(in, model->value);
        if (raw_out != nullptr) {
            std::memcpy(raw_out, result.raw.data(), dim * sizeof(double));
        }
        if (clipped_out != nullptr) {
            std::memcpy(clipped_out, result.clipped.data(),
                        dim * sizeof(double));
        }
    });
}

gme_status gme_run_vdge(const gme_state* state, const gme_run_config* config,
                        const gme_noise_model* noise, gme_trace** out) {
    return guarded([&] {
        require_c(state != nullptr && config != nullptr && out != nullptr,
                  "null argument");
        const gmelab::VqaConfig cfg = to_core(*config, noise);
        gmelab::RngStream rng(cfg.seed, cfg.stream);
        *out = new gme_trace{gmelab::run_vdge(state->value, cfg, rng)};
    });
}

gme_status gme_run_ivdge(const gme_state* state, const gme_run_config* config,
                         const gme_noise_model* noise, gme_trace** out) {
    return guarded([&] {
        require_c(state != nullptr && config != nullptr && out != nullptr,
                  "null argument");
        const gmelab::VqaConfig cfg = to_core(*config, noise);
        gmelab::RngStream rng(cfg.seed, cfg.stream);
        *out = new gme_trace{gmelab::run_ivdge(state->value, cfg, rng)};
    });
}

int gme_trace_length(const gme_trace* trace) {
    return trace == nullptr ? 0 : static_cast<int>(trace->value.rows.size());
}

gme_status gme_trace_row_at(const gme_trace* trace, int index,
                            gme_trace_row* out) {
    return guarded([&] {
        require_c(trace != nullptr && out != nullptr, "null argument");
        require_c(index >= 0 &&
                      index < static_cast<int>(trace->value.rows.size()),
                  "trace index out of range");
        const gmelab::TraceRow& row = trace->value.rows[std::size_t(index)];
        out->iteration = row.iteration;
        out->stage = static_cast<int>(row.stage);
        out->cost_sampled = row.cost_sampled;
        out->infidelity_exact = row.infidelity_exact;
        out->cum_shots = row.cum_shots;
    });
}

double gme_trace_final_estimate(const gme_trace* trace) {
    return trace == nullptr ? -1.0 : trace->value.final_estimate;
}

void gme_trace_free(gme_trace* trace) { delete trace; }

gme_status gme_best_of(const gme_state* state, int use_ivdge,
                       const gme_run_config* config,
                       const gme_noise_model* noise, gme_estimate** out) {
    return guarded([&] {
        require_c(state != nullptr && config != nullptr && out != nullptr,
                  "null argument");
        const gmelab::VqaConfig cfg = to_core(*config, noise);
        auto* est = new gme_estimate;
        est->value =
            gmelab::best_of_repetitions(state->value, cfg, use_ivdge != 0);
        est->views.resize(est->value.traces.size());
        for (std::size_t rep = 0; rep < est->value.traces.size(); ++rep) {
            est->views[rep].value = est->value.traces[rep];
        }
        *out = est;
    });
}

double gme_estimate_value(const gme_estimate* estimate) {
    return estimate == nullptr ? -1.0 : estimate->value.value;
}

int gme_estimate_best_rep(const gme_estimate* estimate) {
    return estimate == nullptr ? -1 : estimate->value.best_rep;
}

int gme_estimate_bp_flag(const gme_estimate* estimate) {
    return estimate != nullptr && estimate->value.bp_flag ? 1 : 0;
}

int gme_estimate_rep_count(const gme_estimate* estimate) {
    return estimate == nullptr
               ? 0
               : static_cast<int>(estimate->value.traces.size());
}

const gme_trace* gme_estimate_trace(const gme_estimate* estimate, int rep) {
    if (estimate == nullptr || rep < 0 ||
        rep >= static_cast<int>(estimate->views.size())) {
        return nullptr;
    }
    return &estimate->views[std::size_t(rep)];
}

void gme_estimate_free(gme_estimate* estimate) { delete estimate; }

gme_status gme_classify_bp(double estimate, double threshold, int* trapped) {
    return guarded([&] {
        require_c(trapped != nullptr, "null argument");
        require_c(estimate >= 0.0 && estimate <= 1.0 + 1e-12,
                  "estimate out of [0,1]");
        *trapped = gmelab::classify_bp(estimate, threshold) ? 1 : 0;
    });
}

gme_status gme_exact_product(const gme_state* state, int restarts, int hops,
                             uint64_t seed, double* out) {
    return guarded([&] {
        require_c(state != nullptr && out != nullptr, "null argument");
        *out = gmelab::exact_gme_product(state->value, restarts, hops, seed);
    });
}

gme_status gme_exact_symmetric(const char* family, int n, double s,
                               int restarts, uint64_t seed, double* out) {
    return guarded([&] {
        require_c(family != nullptr && out != nullptr, "null argument");
        gmelab::SymmetricFamily fam;
        const std::string name = family;
        if (name == "GHZW" || name == "ghzw") {
            fam = gmelab::SymmetricFamily::GhzW;
        } else if (name == "WWtilde" || name == "wwtilde") {
            fam = gmelab::SymmetricFamily::WWtilde;
        } else {
            throw std::invalid_argument("unknown symmetric family");
        }
        *out = gmelab::exact_gme_symmetric(fam, n, s, restarts, seed);
    });
}

gme_status gme_check_bounds(int n, int samples, uint64_t seed,
                            gme_check_report* out) {
    return guarded([&] {
        require_c(out != nullptr, "null argument");
        require_c(samples >= 1, "sample count must be >= 1");
        fill_report(gmelab::check_bounds(n, samples, seed), out);
    });
}

gme_status gme_check_estimator(int n, int instances, uint64_t seed,
                               gme_check_report* out) {
    return guarded([&] {
        require_c(out != nullptr, "null argument");
        require_c(instances >= 1, "instance count must be >= 1");
        fill_report(gmelab::check_estimator(n, instances, seed), out);
    });
}

gme_status gme_check_spectrum(int n, gme_check_report* out) {
    return guarded([&] {
        require_c(out != nullptr, "null argument");
        fill_report(gmelab::check_spectrum(n), out);
    });
}

}  // extern "C"
