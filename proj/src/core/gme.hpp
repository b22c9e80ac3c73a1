#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "cspsa.hpp"
#include "hamiltonians.hpp"
#include "noise.hpp"
#include "statevector.hpp"

namespace gmelab {

enum class Stage { Local = 0, Global = 1 };

enum class StateFamily { Ghz, W, Wtilde, GhzW, WWtilde };
StateFamily parse_family(std::string_view name);
const char* family_name(StateFamily family);

enum class SymmetricFamily { GhzW, WWtilde };

struct VqaConfig {
    int iters_local = 80;
    int iters_global = 295;
    long long shots_local = 512;
    long long shots_global = 8192;
    GainSet gains_local = preset_gains("asymptotic");
    GainSet gains_global = preset_gains("asymptotic");
    int repetitions = 5;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    std::optional<NoiseModel> noise;
    double bp_threshold = 0.9;
    // Noisy runs estimate the final GME from a readout-mitigated sample
    // taken at the final parameters; exact diagnostics are used otherwise.
    bool mitigate_final = true;
    // When true, the global stage's gain-schedule counter continues from
    // iters_local instead of restarting at 0.
    bool global_counter_continues = false;
    int jobs = 1;

    void validate() const;
};

struct TraceRow {
    int iteration = 0;
    Stage stage = Stage::Global;
    double cost_sampled = 0.0;
    double infidelity_exact = 0.0;
    long long cum_shots = 0;
};

struct RunTrace {
    std::vector<TraceRow> rows;
    ProductParams final_params;
    double final_estimate = 0.0;
};

struct GmeEstimate {
    double value = 0.0;
    int best_rep = 0;
    bool bp_flag = false;
    std::vector<RunTrace> traces;
};

// Plain VDGE: random initial parameters, iters_global CSPSA iterations on
// the sampled global infidelity.
RunTrace run_vdge(const PureState& target, const VqaConfig& config,
                  RngStream& rng);

// iVDGE: a local warm-up stage (one random pair partition and one shared
// perturbation per iteration, per-pair marginal gradients) handing its
// parameters to the global VDGE loop.
RunTrace run_ivdge(const PureState& target, const VqaConfig& config,
                   RngStream& rng);

// repetitions independent runs with derived rng streams; the estimate is
// the minimum of the per-repetition finals. Deterministic regardless of
// config.jobs.
GmeEstimate best_of_repetitions(const PureState& target,
                                const VqaConfig& config, bool improved);

// Exact GME oracle: multistart basin hopping over per-qubit Bloch angles
// (theta_i, phi_i), Nelder-Mead simplex as the inner minimizer.
double exact_gme_product(const PureState& target, int restarts = 20,
                         int hops = 5, std::uint64_t seed = 0,
                         int max_qubits = 12);

// Symmetric-ansatz oracle for GHZ/W superpositions: closed-form overlap
// with |Phi>^(x n), two angles only, grid scan plus refinement.
double exact_gme_symmetric(SymmetricFamily family, int n, double s,
                           int restarts = 20, std::uint64_t seed = 0);

PureState make_named_state(StateFamily family, int n,
                           std::optional<double> s = std::nullopt);

// Barren-plateau classification: trapped iff estimate > threshold.
bool classify_bp(double estimate, double threshold = 0.9);

}  // namespace gmelab
