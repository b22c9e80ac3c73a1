#include "gme.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace gmelab {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

const NoiseModel* active_noise(const VqaConfig& cfg) {
    if (cfg.noise.has_value() && !cfg.noise->is_trivial()) {
        return &*cfg.noise;
    }
    return nullptr;
}

ProductParams perturbed(const ProductParams& params,
                        const std::vector<cplx>& delta, double c,
                        double sign) {
    ProductParams out = params;
    for (std::size_t i = 0; i < out.z.size(); ++i) {
        out.z[i] += sign * c * delta[i];
    }
    return out;
}

// The cost is invariant to per-qubit rescaling of the parameters, so the
// iterates are free to drift to large norms, where a fixed c_k perturbation
// becomes relatively tiny and the optimization freezes. Renormalizing the
// updated 2-vectors after each step keeps the encoded state identical while
// pinning the perturbation scale. Qubits with a zero gradient (the unpaired
// leftover of an odd local stage) are left bitwise untouched.
void renormalize_updated(ProductParams& params, const std::vector<cplx>& grad) {
    for (int q = 0; q < params.n; ++q) {
        const std::size_t b = 2 * std::size_t(q);
        if (grad[b] == cplx(0.0, 0.0) && grad[b + 1] == cplx(0.0, 0.0)) {
            continue;
        }
        const double nm =
            std::sqrt(std::norm(params.z[b]) + std::norm(params.z[b + 1]));
        if (nm > 1e-300) {
            params.z[b] /= nm;
            params.z[b + 1] /= nm;
        }
    }
}

double pair_zero_freq(const ShotRecord& record, int i, int j) {
    const std::uint64_t mask =
        (std::uint64_t(1) << i) | (std::uint64_t(1) << j);
    long long hits = 0;
    for (const auto& [outcome, count] : record.counts) {
        if ((outcome & mask) == 0) hits += count;
    }
    return static_cast<double>(hits) / static_cast<double>(record.total);
}

std::vector<double> sampled_distribution(const PureState& target,
                                         const ProductParams& params,
                                         const NoiseModel* noise) {
    std::vector<double> probs =
        probabilities(apply_product_unitary_dagger(target, params));
    if (noise != nullptr) probs = corrupt_distribution(probs, *noise);
    return probs;
}

double final_estimate(const PureState& target, const ProductParams& params,
                      const VqaConfig& cfg, RngStream& rng) {
    const NoiseModel* noise = active_noise(cfg);
    if (noise == nullptr) {
        return global_infidelity_exact(target, params);
    }
    const long long shots =
        cfg.shots_global > 0 ? cfg.shots_global : cfg.shots_local;
    const ShotRecord record =
        sample_shots(sampled_distribution(target, params, noise), shots, rng);
    std::vector<double> empirical(target.dim(), 0.0);
    for (const auto& [outcome, count] : record.counts) {
        empirical[outcome] =
            static_cast<double>(count) / static_cast<double>(record.total);
    }
    if (!cfg.mitigate_final) {
        return 1.0 - empirical[0];
    }
    const MitigatedDistribution mitigated =
        mitigate_readout(empirical, *noise);
    return 1.0 - mitigated.clipped[0];
}

void run_local_stage(const PureState& target, const VqaConfig& cfg,
                     ProductParams& params, RngStream& rng, RunTrace& trace,
                     long long& cum_shots) {
    const int n = target.n;
    const NoiseModel* noise = active_noise(cfg);
    for (int k = 0; k < cfg.iters_local; ++k) {
        const auto [a_k, c_k] = gains_at(cfg.gains_local, k);
        const PairPartition group = sample_partition(n, rng);
        const std::vector<cplx> delta = sample_perturbation(2 * n, rng);
        const ProductParams plus = perturbed(params, delta, c_k, +1.0);
        const ProductParams minus = perturbed(params, delta, c_k, -1.0);
        const ShotRecord rec_plus = sample_shots(
            sampled_distribution(target, plus, noise), cfg.shots_local, rng);
        const ShotRecord rec_minus = sample_shots(
            sampled_distribution(target, minus, noise), cfg.shots_local, rng);

        std::vector<cplx> grad(2 * std::size_t(n), cplx(0.0, 0.0));
        double cost = 0.0;
        for (const auto& [i, j] : group.pairs) {
            const double f_plus = 1.0 - pair_zero_freq(rec_plus, i, j);
            const double f_minus = 1.0 - pair_zero_freq(rec_minus, i, j);
            const double diff = (f_plus - f_minus) / (2.0 * c_k);
            for (const int q : {i, j}) {
                const std::size_t base = 2 * std::size_t(q);
                grad[base] = diff * delta[base];
                grad[base + 1] = diff * delta[base + 1];
            }
            cost += 0.5 * (f_plus + f_minus);
        }
        cost /= static_cast<double>(group.pairs.size());
        params = step(params, grad, a_k);
        renormalize_updated(params, grad);
        cum_shots += 2 * cfg.shots_local;

        TraceRow row;
        row.iteration = k;
        row.stage = Stage::Local;
        row.cost_sampled = cost;
        row.infidelity_exact = global_infidelity_exact(target, params);
        row.cum_shots = cum_shots;
        trace.rows.push_back(row);
    }
}

void run_global_stage(const PureState& target, const VqaConfig& cfg,
                      ProductParams& params, RngStream& rng, RunTrace& trace,
                      long long& cum_shots, int row_offset) {
    const int n = target.n;
    const NoiseModel* noise = active_noise(cfg);
    for (int k = 0; k < cfg.iters_global; ++k) {
        const int schedule_k =
            cfg.global_counter_continues ? k + cfg.iters_local : k;
        const auto [a_k, c_k] = gains_at(cfg.gains_global, schedule_k);
        const std::vector<cplx> delta = sample_perturbation(2 * n, rng);
        const ProductParams plus = perturbed(params, delta, c_k, +1.0);
        const ProductParams minus = perturbed(params, delta, c_k, -1.0);
        const double f_plus = global_infidelity_sampled(
            target, plus, cfg.shots_global, rng, noise);
        const double f_minus = global_infidelity_sampled(
            target, minus, cfg.shots_global, rng, noise);
        const std::vector<cplx> grad =
            gradient_estimate(f_plus, f_minus, c_k, delta);
        params = step(params, grad, a_k);
        renormalize_updated(params, grad);
        cum_shots += 2 * cfg.shots_global;

        TraceRow row;
        row.iteration = row_offset + k;
        row.stage = Stage::Global;
        row.cost_sampled = 0.5 * (f_plus + f_minus);
        row.infidelity_exact = global_infidelity_exact(target, params);
        row.cum_shots = cum_shots;
        trace.rows.push_back(row);
    }
}

}  // namespace

void VqaConfig::validate() const {
    require(iters_local >= 0 && iters_global >= 0, "negative iteration count");
    require(iters_local + iters_global >= 1, "no iterations configured");
    require(iters_local == 0 || shots_local >= 1,
            "local stage needs shots_local >= 1");
    require(iters_global == 0 || shots_global >= 1,
            "global stage needs shots_global >= 1");
    require(repetitions >= 1, "repetitions must be >= 1");
    require(bp_threshold > 0.0 && bp_threshold < 1.0,
            "bp threshold must lie in (0,1)");
    require(jobs >= 1, "jobs must be >= 1");
    gains_local.validate();
    gains_global.validate();
}

StateFamily parse_family(std::string_view name) {
    if (name == "GHZ" || name == "ghz") return StateFamily::Ghz;
    if (name == "W" || name == "w") return StateFamily::W;
    if (name == "Wtilde" || name == "wtilde") return StateFamily::Wtilde;
    if (name == "GHZW" || name == "ghzw") return StateFamily::GhzW;
    if (name == "WWtilde" || name == "wwtilde") return StateFamily::WWtilde;
    throw std::invalid_argument(
        "unknown state family (use GHZ|W|Wtilde|GHZW|WWtilde)");
}

const char* family_name(StateFamily family) {
    switch (family) {
        case StateFamily::Ghz: return "GHZ";
        case StateFamily::W: return "W";
        case StateFamily::Wtilde: return "Wtilde";
        case StateFamily::GhzW: return "GHZW";
        case StateFamily::WWtilde: return "WWtilde";
    }
    return "?";
}

PureState make_named_state(StateFamily family, int n,
                           std::optional<double> s) {
    require(n >= 2, "named states need n >= 2");
    const std::size_t dim = std::size_t(1) << n;
    std::vector<cplx> amp(dim, cplx(0.0, 0.0));
    const auto add_ghz = [&](double w) {
        amp[0] += w / std::sqrt(2.0);
        amp[dim - 1] += w / std::sqrt(2.0);
    };
    const auto add_w = [&](double w) {
        for (int j = 0; j < n; ++j) {
            amp[std::size_t(1) << j] += w / std::sqrt(double(n));
        }
    };
    const auto add_wtilde = [&](double w) {
        for (int j = 0; j < n; ++j) {
            amp[(dim - 1) ^ (std::size_t(1) << j)] += w / std::sqrt(double(n));
        }
    };
    switch (family) {
        case StateFamily::Ghz:
            add_ghz(1.0);
            break;
        case StateFamily::W:
            add_w(1.0);
            break;
        case StateFamily::Wtilde:
            add_wtilde(1.0);
            break;
        case StateFamily::GhzW: {
            require(s.has_value(), "GHZW needs the superposition weight s");
            require(*s >= 0.0 && *s <= 1.0, "s out of [0,1]");
            add_ghz(std::sqrt(*s));
            add_w(std::sqrt(1.0 - *s));
            break;
        }
        case StateFamily::WWtilde: {
            require(s.has_value(), "WWtilde needs the superposition weight s");
            require(*s >= 0.0 && *s <= 1.0, "s out of [0,1]");
            add_w(std::sqrt(*s));
            add_wtilde(std::sqrt(1.0 - *s));
            break;
        }
    }
    // from_amplitudes renormalizes, which also covers the n = 2 case
    // where W and Wtilde coincide and the superposition is not unit norm.
    return PureState::from_amplitudes(n, std::move(amp));
}

RunTrace run_vdge(const PureState& target, const VqaConfig& config,
                  RngStream& rng) {
    config.validate();
    require(config.iters_global >= 1, "VDGE needs iters_global >= 1");
    RunTrace trace;
    ProductParams params = ProductParams::random(target.n, rng);
    long long cum_shots = 0;
    run_global_stage(target, config, params, rng, trace, cum_shots, 0);
    trace.final_params = params;
    trace.final_estimate = final_estimate(target, params, config, rng);
    return trace;
}

RunTrace run_ivdge(const PureState& target, const VqaConfig& config,
                   RngStream& rng) {
    config.validate();
    require(config.iters_local >= 1, "iVDGE needs iters_local >= 1");
    require(target.n >= 2, "iVDGE needs n >= 2");
    RunTrace trace;
    ProductParams params = ProductParams::random(target.n, rng);
    long long cum_shots = 0;
    run_local_stage(target, config, params, rng, trace, cum_shots);
    run_global_stage(target, config, params, rng, trace, cum_shots,
                     config.iters_local);
    trace.final_params = params;
    trace.final_estimate = final_estimate(target, params, config, rng);
    return trace;
}

GmeEstimate best_of_repetitions(const PureState& target,
                                const VqaConfig& config, bool improved) {
    config.validate();
    const int reps = config.repetitions;
    std::vector<RunTrace> traces(static_cast<std::size_t>(reps));

    const auto run_rep = [&](int rep) {
        RngStream rng(config.seed, substream(config.stream, std::uint64_t(rep)));
        traces[std::size_t(rep)] = improved ? run_ivdge(target, config, rng)
                                            : run_vdge(target, config, rng);
    };

    const int workers = std::min(config.jobs, reps);
    if (workers <= 1) {
        for (int rep = 0; rep < reps; ++rep) run_rep(rep);
    } else {
        std::atomic<int> next{0};
        std::exception_ptr error;
        std::mutex error_mutex;
        std::vector<std::thread> pool;
        pool.reserve(std::size_t(workers));
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&]() {
                for (;;) {
                    const int rep = next.fetch_add(1);
                    if (rep >= reps) return;
                    try {
                        run_rep(rep);
                    } catch (...) {
                        std::lock_guard<std::mutex> lock(error_mutex);
                        if (!error) error = std::current_exception();
                        return;
                    }
                }
            });
        }
        for (std::thread& t : pool) t.join();
        if (error) std::rethrow_exception(error);
    }

    GmeEstimate est;
    est.traces = std::move(traces);
    est.best_rep = 0;
    est.value = est.traces[0].final_estimate;
    for (int rep = 1; rep < reps; ++rep) {
        const double v = est.traces[std::size_t(rep)].final_estimate;
        if (v < est.value) {
            est.value = v;
            est.best_rep = rep;
        }
    }
    est.bp_flag = classify_bp(est.value, config.bp_threshold);
    return est;
}

bool classify_bp(double estimate, double threshold) {
    return estimate > threshold;
}

// ---------------------------------------------------------------------
// Exact oracles.

namespace {

struct SimplexResult {
    std::vector<double> x;
    double value = 0.0;
};

// Standard Nelder-Mead (reflection 1, expansion 2, contraction 0.5,
// shrink 0.5) with an absolute spread stopping rule.
SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                          const std::vector<double>& x0, double initial_step,
                          double ftol, int max_iters) {
    const std::size_t d = x0.size();
    std::vector<std::vector<double>> xs(d + 1, x0);
    for (std::size_t i = 0; i < d; ++i) xs[i + 1][i] += initial_step;
    std::vector<double> fs(d + 1);
    for (std::size_t i = 0; i <= d; ++i) fs[i] = f(xs[i]);

    std::vector<std::size_t> order(d + 1);
    for (int iter = 0; iter < max_iters; ++iter) {
        for (std::size_t i = 0; i <= d; ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });
        const std::size_t best = order[0];
        const std::size_t worst = order[d];
        const std::size_t second_worst = order[d - 1];
        if (fs[worst] - fs[best] < ftol) break;

        std::vector<double> centroid(d, 0.0);
        for (std::size_t i = 0; i <= d; ++i) {
            if (i == worst) continue;
            for (std::size_t c = 0; c < d; ++c) centroid[c] += xs[i][c];
        }
        for (double& c : centroid) c /= static_cast<double>(d);

        const auto blend = [&](double t) {
            std::vector<double> x(d);
            for (std::size_t c = 0; c < d; ++c) {
                x[c] = centroid[c] + t * (centroid[c] - xs[worst][c]);
            }
            return x;
        };

        std::vector<double> xr = blend(1.0);
        const double fr = f(xr);
        if (fr < fs[best]) {
            std::vector<double> xe = blend(2.0);
            const double fe = f(xe);
            if (fe < fr) {
                xs[worst] = std::move(xe);
                fs[worst] = fe;
            } else {
                xs[worst] = std::move(xr);
                fs[worst] = fr;
            }
        } else if (fr < fs[second_worst]) {
            xs[worst] = std::move(xr);
            fs[worst] = fr;
        } else {
            std::vector<double> xc = blend(fr < fs[worst] ? 0.5 : -0.5);
            const double fc = f(xc);
            if (fc < std::min(fr, fs[worst])) {
                xs[worst] = std::move(xc);
                fs[worst] = fc;
            } else {
                for (std::size_t i = 0; i <= d; ++i) {
                    if (i == best) continue;
                    for (std::size_t c = 0; c < d; ++c) {
                        xs[i][c] = xs[best][c] + 0.5 * (xs[i][c] - xs[best][c]);
                    }
                    fs[i] = f(xs[i]);
                }
            }
        }
    }

    SimplexResult res;
    std::size_t best = 0;
    for (std::size_t i = 1; i <= d; ++i) {
        if (fs[i] < fs[best]) best = i;
    }
    res.x = xs[best];
    res.value = fs[best];
    return res;
}

// Multistart basin hopping around Nelder-Mead.
double basin_hopping(const std::function<double(const std::vector<double>&)>& f,
                     std::size_t dim, int restarts, int hops, RngStream& rng,
                     int max_iters) {
    double global_best = std::numeric_limits<double>::infinity();
    for (int r = 0; r < restarts; ++r) {
        std::vector<double> x0(dim);
        for (std::size_t c = 0; c < dim; ++c) {
            x0[c] = c < dim / 2 ? rng.uniform() * kPi
                                : rng.uniform() * 2.0 * kPi;
        }
        SimplexResult best = nelder_mead(f, x0, 0.35, 1e-13, max_iters);
        for (int h = 0; h < hops; ++h) {
            std::vector<double> xh = best.x;
            for (double& c : xh) c += 0.4 * rng.normal();
            const SimplexResult cand = nelder_mead(f, xh, 0.2, 1e-13, max_iters);
            if (cand.value < best.value) best = cand;
        }
        global_best = std::min(global_best, best.value);
    }
    return global_best;
}

}  // namespace

double exact_gme_product(const PureState& target, int restarts, int hops,
                         std::uint64_t seed, int max_qubits) {
    require(restarts >= 1 && hops >= 0, "invalid oracle configuration");
    require(target.n <= max_qubits, "oracle qubit guard exceeded");
    const int n = target.n;
    // Angles: x[0..n) = theta_i in [0, pi], x[n..2n) = phi_i.
    const auto cost = [&](const std::vector<double>& x) {
        ProductParams p;
        p.n = n;
        p.z.resize(2 * std::size_t(n));
        for (int j = 0; j < n; ++j) {
            const double th = x[std::size_t(j)];
            const double ph = x[std::size_t(n + j)];
            p.z[2 * std::size_t(j)] = cplx(std::cos(th), 0.0);
            p.z[2 * std::size_t(j) + 1] =
                std::sin(th) * cplx(std::cos(ph), std::sin(ph));
        }
        // Guard against the simplex wandering onto a degenerate point.
        for (int j = 0; j < n; ++j) {
            if (std::norm(p.z0(j)) + std::norm(p.z1(j)) < 1e-30) return 1.0;
        }
        return 1.0 - fidelity_exact(target, p);
    };
    RngStream rng(seed, 0x0bac1e);
    return basin_hopping(cost, 2 * std::size_t(n), restarts, hops, rng,
                         350 * 2 * n);
}

double exact_gme_symmetric(SymmetricFamily family, int n, double s,
                           int restarts, std::uint64_t seed) {
    require(n >= 2, "symmetric oracle needs n >= 2");
    require(s >= 0.0 && s <= 1.0, "s out of [0,1]");
    require(restarts >= 1, "restarts must be >= 1");
    // <W|Wtilde> = 1 for n = 2 (the two states coincide), 0 otherwise.
    const double cross = (family == SymmetricFamily::WWtilde && n == 2) ? 1.0
                                                                        : 0.0;
    const double norm = std::sqrt(1.0 + 2.0 * std::sqrt(s * (1.0 - s)) * cross);

    const auto overlap_sq = [&](double theta, double phi) {
        const double c = std::cos(theta);
        const double t = std::sin(theta);
        const cplx e_phi(std::cos(phi), std::sin(phi));
        const cplx w_part =
            std::sqrt(double(n)) * std::pow(c, n - 1) * t * e_phi;
        cplx overlap;
        if (family == SymmetricFamily::GhzW) {
            const cplx ghz_part =
                (std::pow(c, n) + std::pow(e_phi * t, n)) / std::sqrt(2.0);
            overlap = std::sqrt(s) * ghz_part + std::sqrt(1.0 - s) * w_part;
        } else {
            const cplx wt_part = std::sqrt(double(n)) * c *
                                 std::pow(e_phi * t, n - 1);
            overlap = std::sqrt(s) * w_part + std::sqrt(1.0 - s) * wt_part;
        }
        overlap /= norm;
        return std::norm(overlap);
    };
    const auto cost_xy = [&](const std::vector<double>& x) {
        return 1.0 - overlap_sq(x[0], x[1]);
    };

    // Coarse grid scan, then simplex refinement from the best cells plus
    // random restarts.
    double best = std::numeric_limits<double>::infinity();
    std::vector<std::pair<double, std::pair<double, double>>> cells;
    const int grid = 96;
    for (int a = 0; a <= grid; ++a) {
        for (int b = 0; b < grid; ++b) {
            const double theta = kPi * a / grid;
            const double phi = 2.0 * kPi * b / grid;
            cells.push_back({1.0 - overlap_sq(theta, phi), {theta, phi}});
        }
    }
    std::sort(cells.begin(), cells.end(),
              [](const auto& lhs, const auto& rhs) {
                  return lhs.first < rhs.first;
              });
    for (int c = 0; c < 6 && c < static_cast<int>(cells.size()); ++c) {
        const SimplexResult r = nelder_mead(
            cost_xy, {cells[std::size_t(c)].second.first,
                      cells[std::size_t(c)].second.second},
            0.05, 1e-14, 2000);
        best = std::min(best, r.value);
    }
    RngStream rng(seed, 0x5e1f);
    for (int r = 0; r < restarts; ++r) {
        const std::vector<double> x0{rng.uniform() * kPi,
                                     rng.uniform() * 2.0 * kPi};
        best = std::min(best, nelder_mead(cost_xy, x0, 0.3, 1e-14, 2000).value);
    }
    return best;
}

}  // namespace gmelab
