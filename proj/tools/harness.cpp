#include "harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace harness {

namespace {

void check(gme_status status, const std::string& what) {
    if (status != GME_OK) {
        throw std::runtime_error(what + ": " + gme_status_message(status));
    }
}

struct StateDeleter {
    void operator()(gme_state* p) const { gme_state_free(p); }
};
struct NoiseDeleter {
    void operator()(gme_noise_model* p) const { gme_noise_free(p); }
};
struct TraceDeleter {
    void operator()(gme_trace* p) const { gme_trace_free(p); }
};
struct EstimateDeleter {
    void operator()(gme_estimate* p) const { gme_estimate_free(p); }
};

using StatePtr = std::unique_ptr<gme_state, StateDeleter>;
using NoisePtr = std::unique_ptr<gme_noise_model, NoiseDeleter>;
using TracePtr = std::unique_ptr<gme_trace, TraceDeleter>;
using EstimatePtr = std::unique_ptr<gme_estimate, EstimateDeleter>;

StatePtr named_state(const std::string& family, int n, double s) {
    gme_state* raw = nullptr;
    check(gme_state_named(family.c_str(), n, s, &raw), "state " + family);
    return StatePtr(raw);
}

NoisePtr load_noise(const RunOptions& opt) {
    if (opt.noise_file.empty()) return nullptr;
    const NoiseSpec spec = parse_noise_file(opt.noise_file, opt.n);
    gme_noise_model* raw = nullptr;
    check(gme_noise_create(opt.n, spec.depolarizing, spec.p01.data(),
                           spec.p10.data(), &raw),
          "noise model");
    return NoisePtr(raw);
}

gme_gains preset(const std::string& name, double A) {
    gme_gains g;
    check(gme_preset_gains(name.c_str(), &g), "gain preset " + name);
    if (A >= 0.0) g.A = A;
    return g;
}

// Common run configuration; gain_A overrides the global-stage stability
// constant only (the local warm-up keeps A = 0).
gme_run_config make_config(const RunOptions& opt, double gain_A) {
    gme_run_config cfg;
    gme_run_config_defaults(&cfg);
    cfg.iters_local = opt.iters_local;
    cfg.iters_global = opt.iters_global;
    cfg.shots_local = opt.shots_local;
    cfg.shots_global = opt.shots_global;
    cfg.gains_local = preset(opt.gains, -1.0);
    cfg.gains_global = preset(opt.gains, gain_A);
    cfg.repetitions = opt.reps;
    cfg.seed = opt.seed;
    cfg.jobs = 1;
    return cfg;
}

// Iteration count giving VDGE the same total shot budget as the matched
// iVDGE protocol (two evaluations per iteration on both sides).
int matched_vdge_iters(const RunOptions& opt) {
    const long long local_budget = 1LL * opt.iters_local * opt.shots_local;
    const long long extra =
        (local_budget + opt.shots_global / 2) / opt.shots_global;
    return opt.iters_global + static_cast<int>(extra);
}

std::string derived_path(const std::string& base, const std::string& suffix) {
    const std::string ext = ".csv";
    if (base.size() > ext.size() &&
        base.compare(base.size() - ext.size(), ext.size(), ext) == 0) {
        return base.substr(0, base.size() - ext.size()) + suffix + ext;
    }
    return base + suffix + ext;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file " + path);
    return out;
}

double require_positive_ensemble(const RunOptions& opt, int fallback) {
    return opt.ensemble > 0 ? opt.ensemble : fallback;
}

// Per-row |E - estimate| curves of the best repetition, on the
// cumulative-shot axis; all members share the same axis.
struct ErrorCurves {
    std::vector<double> axis;
    std::vector<std::vector<double>> per_row;  // [row][member]
};

void accumulate_curve(ErrorCurves& curves, const gme_trace* trace,
                      double exact, int member, int ensemble) {
    const int len = gme_trace_length(trace);
    if (curves.axis.empty()) {
        curves.axis.resize(std::size_t(len));
        curves.per_row.assign(std::size_t(len),
                              std::vector<double>(static_cast<std::size_t>(ensemble)));
    }
    for (int r = 0; r < len; ++r) {
        gme_trace_row row;
        check(gme_trace_row_at(trace, r, &row), "trace row");
        curves.axis[std::size_t(r)] = static_cast<double>(row.cum_shots);
        curves.per_row[std::size_t(r)][std::size_t(member)] =
            std::abs(exact - row.infidelity_exact);
    }
}

std::vector<SummaryRow> summarize_curves(const ErrorCurves& curves) {
    std::vector<SummaryRow> rows;
    rows.reserve(curves.axis.size());
    for (std::size_t r = 0; r < curves.axis.size(); ++r) {
        const Quartiles q = quartiles(curves.per_row[r]);
        rows.push_back({curves.axis[r], q.median, q.q1, q.q3, 0.0});
    }
    return rows;
}

}  // namespace

Quartiles quartiles(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("quartiles of empty set");
    std::sort(values.begin(), values.end());
    const auto at = [&](double q) {
        const double pos = q * static_cast<double>(values.size() - 1);
        const std::size_t lo = static_cast<std::size_t>(pos);
        const double frac = pos - static_cast<double>(lo);
        if (lo + 1 >= values.size()) return values.back();
        return values[lo] * (1.0 - frac) + values[lo + 1] * frac;
    };
    return Quartiles{at(0.25), at(0.5), at(0.75)};
}

std::string fmt(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", value);
    return buf;
}

void write_summary_csv(const std::string& path,
                       const std::vector<SummaryRow>& rows, bool with_bp) {
    std::ofstream out = open_out(path);
    out << "x,median,q1,q3" << (with_bp ? ",bp_pct" : "") << "\n";
    for (const SummaryRow& r : rows) {
        out << fmt(r.x) << ',' << fmt(r.median) << ',' << fmt(r.q1) << ','
            << fmt(r.q3);
        if (with_bp) out << ',' << fmt(r.bp_pct);
        out << "\n";
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

void write_trace_csv(const std::string& path, const gme_trace* trace) {
    std::ofstream out = open_out(path);
    out << "iteration,stage,cost_sampled,infidelity_exact,cum_shots\n";
    const int len = gme_trace_length(trace);
    for (int i = 0; i < len; ++i) {
        gme_trace_row row;
        check(gme_trace_row_at(trace, i, &row), "trace row");
        out << row.iteration << ',' << (row.stage == 0 ? "local" : "global")
            << ',' << fmt(row.cost_sampled) << ',' << fmt(row.infidelity_exact)
            << ',' << row.cum_shots << "\n";
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::uint64_t member_stream(int m) {
    return (static_cast<std::uint64_t>(m) + 1) << 32;
}

void parallel_for(int count, int jobs, const std::function<void(int)>& fn) {
    if (jobs <= 1 || count <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    const int workers = std::min(jobs, count);
    std::vector<std::thread> pool;
    pool.reserve(std::size_t(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    fn(i);
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

NoiseSpec parse_noise_file(const std::string& path, int n) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open noise file " + path);
    NoiseSpec spec;
    spec.p01.assign(std::size_t(n), 0.0);
    spec.p10.assign(std::size_t(n), 0.0);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::runtime_error("noise file line " + std::to_string(lineno) +
                                     ": expected key=value");
        }
        std::string key = line.substr(first, eq - first);
        key.erase(key.find_last_not_of(" \t") + 1);
        const double value = std::stod(line.substr(eq + 1));
        if (key == "depolarizing") {
            spec.depolarizing = value;
        } else if (key == "p01") {
            std::fill(spec.p01.begin(), spec.p01.end(), value);
        } else if (key == "p10") {
            std::fill(spec.p10.begin(), spec.p10.end(), value);
        } else if (key.rfind("p01_", 0) == 0 || key.rfind("p10_", 0) == 0) {
            const int qubit = std::stoi(key.substr(4));
            if (qubit < 0 || qubit >= n) {
                throw std::runtime_error("noise file: qubit index out of range in " +
                                         key);
            }
            (key[1] == '0' && key[2] == '1' ? spec.p01 : spec.p10)
                [std::size_t(qubit)] = value;
        } else {
            throw std::runtime_error("noise file: unknown key " + key);
        }
    }
    return spec;
}

int cmd_single(const RunOptions& opt, bool improved) {
    if (opt.out.empty()) throw std::runtime_error("--out is required");
    StatePtr state = named_state(opt.family, opt.n, opt.s);
    NoisePtr noise = load_noise(opt);
    gme_run_config cfg = make_config(opt, opt.gain_A);
    cfg.jobs = opt.jobs;
    gme_estimate* raw = nullptr;
    check(gme_best_of(state.get(), improved ? 1 : 0, &cfg, noise.get(), &raw),
          "optimization run");
    EstimatePtr est(raw);
    const int best = gme_estimate_best_rep(est.get());
    write_trace_csv(opt.out, gme_estimate_trace(est.get(), best));
    std::printf("estimate %s (best repetition %d of %d, bp %s)\n",
                fmt(gme_estimate_value(est.get())).c_str(), best, opt.reps,
                gme_estimate_bp_flag(est.get()) ? "yes" : "no");
    return 0;
}

int cmd_random_benchmark(const RunOptions& opt) {
    if (opt.out.empty()) throw std::runtime_error("--out is required");
    const int ensemble = static_cast<int>(require_positive_ensemble(opt, 20));
    double gain_A = opt.gain_A;
    if (gain_A < 0.0) {
        // Stability constants used by the small-n benchmark protocol.
        gain_A = opt.n == 3 ? 32.0 : opt.n == 4 ? 16.0 : opt.n == 5 ? 8.0 : 4.0;
    }

    RunOptions vdge_opt = opt;
    vdge_opt.iters_local = 0;
    vdge_opt.iters_global = matched_vdge_iters(opt);

    std::vector<double> exact(static_cast<std::size_t>(ensemble));
    std::vector<EstimatePtr> ivdge_est(static_cast<std::size_t>(ensemble));
    std::vector<EstimatePtr> vdge_est(static_cast<std::size_t>(ensemble));

    parallel_for(ensemble, opt.jobs, [&](int m) {
        gme_state* sraw = nullptr;
        check(gme_state_haar(opt.n, opt.seed, member_stream(m), &sraw),
              "haar state");
        StatePtr state(sraw);
        check(gme_exact_product(state.get(), 20, 5,
                                opt.seed + std::uint64_t(m), &exact[std::size_t(m)]),
              "exact oracle");
        for (int method = 0; method < 2; ++method) {
            const bool improved = method == 0;
            gme_run_config cfg = make_config(improved ? opt : vdge_opt, gain_A);
            cfg.stream = member_stream(m) + (improved ? 1 : 64);
            gme_estimate* eraw = nullptr;
            check(gme_best_of(state.get(), improved ? 1 : 0, &cfg, nullptr,
                              &eraw),
                  "optimization run");
            (improved ? ivdge_est : vdge_est)[std::size_t(m)].reset(eraw);
        }
    });

    ErrorCurves ivdge_curves, vdge_curves;
    for (int m = 0; m < ensemble; ++m) {
        const auto best_trace = [](const EstimatePtr& est) {
            return gme_estimate_trace(est.get(), gme_estimate_best_rep(est.get()));
        };
        accumulate_curve(ivdge_curves, best_trace(ivdge_est[std::size_t(m)]),
                         exact[std::size_t(m)], m, ensemble);
        accumulate_curve(vdge_curves, best_trace(vdge_est[std::size_t(m)]),
                         exact[std::size_t(m)], m, ensemble);
    }
    write_summary_csv(derived_path(opt.out, "_ivdge"),
                      summarize_curves(ivdge_curves), false);
    write_summary_csv(derived_path(opt.out, "_vdge"),
                      summarize_curves(vdge_curves), false);

    const Quartiles qi = quartiles(ivdge_curves.per_row.back());
    const Quartiles qv = quartiles(vdge_curves.per_row.back());
    std::printf("final median |E - estimate|: ivdge %s, vdge %s\n",
                fmt(qi.median).c_str(), fmt(qv.median).c_str());
    return 0;
}

int cmd_sweep_s(const RunOptions& opt, std::vector<double> grid) {
    if (opt.out.empty()) throw std::runtime_error("--out is required");
    if (opt.family != "GHZW" && opt.family != "WWtilde") {
        throw std::runtime_error("sweep-s requires --family GHZW or WWtilde");
    }
    if (grid.empty()) grid = {0.0, 0.25, 0.5, 0.75, 1.0};
    const int ensemble = static_cast<int>(require_positive_ensemble(opt, 10));
    const double gain_A = opt.gain_A < 0.0 ? 4.0 : opt.gain_A;
    const int points = static_cast<int>(grid.size());

    std::vector<double> oracle(grid.size());
    for (std::size_t si = 0; si < grid.size(); ++si) {
        check(gme_exact_symmetric(opt.family.c_str(), opt.n, grid[si], 24,
                                  opt.seed, &oracle[si]),
              "symmetric oracle");
    }

    std::vector<std::vector<double>> ivdge_final(
        grid.size(), std::vector<double>(static_cast<std::size_t>(ensemble)));
    std::vector<std::vector<double>> vdge_final = ivdge_final;

    RunOptions vdge_opt = opt;
    vdge_opt.iters_local = 0;
    vdge_opt.iters_global = matched_vdge_iters(opt);

    parallel_for(points * ensemble, opt.jobs, [&](int task) {
        const int si = task / ensemble;
        const int m = task % ensemble;
        StatePtr state = named_state(opt.family, opt.n, grid[std::size_t(si)]);
        for (int method = 0; method < 2; ++method) {
            const bool improved = method == 0;
            gme_run_config cfg = make_config(improved ? opt : vdge_opt, gain_A);
            cfg.stream = member_stream(task) + (improved ? 1 : 64);
            gme_estimate* eraw = nullptr;
            check(gme_best_of(state.get(), improved ? 1 : 0, &cfg, nullptr,
                              &eraw),
                  "optimization run");
            EstimatePtr est(eraw);
            (improved ? ivdge_final : vdge_final)[std::size_t(si)]
                [std::size_t(m)] = gme_estimate_value(est.get());
        }
    });

    std::vector<SummaryRow> ivdge_rows, vdge_rows, oracle_rows;
    for (std::size_t si = 0; si < grid.size(); ++si) {
        const Quartiles qi = quartiles(ivdge_final[si]);
        const Quartiles qv = quartiles(vdge_final[si]);
        ivdge_rows.push_back({grid[si], qi.median, qi.q1, qi.q3, 0.0});
        vdge_rows.push_back({grid[si], qv.median, qv.q1, qv.q3, 0.0});
        oracle_rows.push_back({grid[si], oracle[si], oracle[si], oracle[si], 0.0});
    }
    write_summary_csv(derived_path(opt.out, "_ivdge"), ivdge_rows, false);
    write_summary_csv(derived_path(opt.out, "_vdge"), vdge_rows, false);
    write_summary_csv(derived_path(opt.out, "_oracle"), oracle_rows, false);

    for (std::size_t si = 0; si < grid.size(); ++si) {
        std::printf("s=%s oracle %s ivdge median %s vdge median %s\n",
                    fmt(grid[si]).c_str(), fmt(oracle_rows[si].median).c_str(),
                    fmt(ivdge_rows[si].median).c_str(),
                    fmt(vdge_rows[si].median).c_str());
    }
    return 0;
}

int cmd_noise_study(const RunOptions& opt) {
    if (opt.out.empty()) throw std::runtime_error("--out is required");
    const int n = opt.n;
    const int ensemble = static_cast<int>(require_positive_ensemble(opt, 100));
    const double gain_A = opt.gain_A < 0.0 ? 8.0 : opt.gain_A;

    NoisePtr noise = load_noise(opt);
    if (!noise) {
        const std::vector<double> p01(static_cast<std::size_t>(n), 0.015);
        const std::vector<double> p10(static_cast<std::size_t>(n), 0.015);
        gme_noise_model* raw = nullptr;
        check(gme_noise_create(n, 0.02, p01.data(), p10.data(), &raw),
              "noise model");
        noise.reset(raw);
    }
    StatePtr state = named_state("GHZ", n, 0.0);

    struct VdgeRow {
        long long shots;
    };
    struct IvdgeRow {
        long long shots_local;
        long long shots_global;
        int iters_global;
    };
    // Shot-budget rows; each iVDGE row spends exactly the total budget of
    // the VDGE row with the same global shot count (200 iterations).
    const std::vector<VdgeRow> vdge_rows = {{8192}, {4096}, {2048}, {1024},
                                            {512},  {256},  {130}};
    const std::vector<IvdgeRow> ivdge_rows = {
        {512, 8192, 195}, {512, 4096, 190}, {512, 2048, 180}, {512, 1024, 160},
        {256, 512, 160},  {128, 256, 160},  {64, 128, 160}};

    const int vdge_tasks = static_cast<int>(vdge_rows.size()) * ensemble;
    const int ivdge_tasks = static_cast<int>(ivdge_rows.size()) * ensemble;

    std::vector<std::vector<double>> vdge_final(
        vdge_rows.size(), std::vector<double>(static_cast<std::size_t>(ensemble)));
    std::vector<std::vector<double>> ivdge_final(
        ivdge_rows.size(), std::vector<double>(static_cast<std::size_t>(ensemble)));

    parallel_for(vdge_tasks + ivdge_tasks, opt.jobs, [&](int task) {
        gme_run_config cfg = make_config(opt, gain_A);
        cfg.repetitions = 1;
        const bool improved = task >= vdge_tasks;
        const int local = improved ? task - vdge_tasks : task;
        const int row = local / ensemble;
        const int m = local % ensemble;
        cfg.stream = member_stream(task);
        gme_trace* traw = nullptr;
        if (improved) {
            const IvdgeRow& r = ivdge_rows[std::size_t(row)];
            cfg.iters_local = 80;
            cfg.iters_global = r.iters_global;
            cfg.shots_local = r.shots_local;
            cfg.shots_global = r.shots_global;
            check(gme_run_ivdge(state.get(), &cfg, noise.get(), &traw),
                  "ivdge run");
        } else {
            cfg.iters_local = 0;
            cfg.iters_global = 200;
            cfg.shots_global = vdge_rows[std::size_t(row)].shots;
            check(gme_run_vdge(state.get(), &cfg, noise.get(), &traw),
                  "vdge run");
        }
        TracePtr trace(traw);
        (improved ? ivdge_final : vdge_final)[std::size_t(row)]
            [std::size_t(m)] = gme_trace_final_estimate(trace.get());
    });

    const auto summarize = [&](const std::vector<std::vector<double>>& finals,
                               const std::function<double(int)>& axis) {
        std::vector<SummaryRow> rows;
        for (std::size_t r = 0; r < finals.size(); ++r) {
            const Quartiles q = quartiles(finals[r]);
            int trapped = 0;
            for (const double v : finals[r]) {
                int flag = 0;
                check(gme_classify_bp(std::min(v, 1.0), 0.9, &flag), "bp");
                trapped += flag;
            }
            rows.push_back({axis(static_cast<int>(r)), q.median, q.q1, q.q3,
                            100.0 * trapped / ensemble});
        }
        return rows;
    };
    const std::vector<SummaryRow> vrows = summarize(vdge_final, [&](int r) {
        return static_cast<double>(vdge_rows[std::size_t(r)].shots);
    });
    const std::vector<SummaryRow> irows = summarize(ivdge_final, [&](int r) {
        return static_cast<double>(ivdge_rows[std::size_t(r)].shots_global);
    });
    write_summary_csv(derived_path(opt.out, "_vdge"), vrows, true);
    write_summary_csv(derived_path(opt.out, "_ivdge"), irows, true);

    std::printf("top row: vdge bp %s%% median %s | ivdge bp %s%% median %s\n",
                fmt(vrows.front().bp_pct).c_str(),
                fmt(vrows.front().median).c_str(),
                fmt(irows.front().bp_pct).c_str(),
                fmt(irows.front().median).c_str());
    return 0;
}

int cmd_exact_gme(const RunOptions& opt) {
    const bool symmetric = opt.family == "GHZW" || opt.family == "WWtilde";
    double value = 0.0;
    if (opt.n <= 12) {
        StatePtr state = named_state(opt.family, opt.n, opt.s);
        check(gme_exact_product(state.get(), 20, 5, opt.seed, &value),
              "exact oracle");
    } else if (symmetric) {
        check(gme_exact_symmetric(opt.family.c_str(), opt.n, opt.s, 24,
                                  opt.seed, &value),
              "symmetric oracle");
    } else {
        throw std::runtime_error(
            "exact-gme beyond 12 qubits needs a symmetric family");
    }
    std::printf("%s\n", fmt(value).c_str());
    return 0;
}

namespace {

int report_check(const char* name, const gme_check_report& rep) {
    std::printf("%s: %s (%s)\n", name, rep.pass ? "pass" : "FAIL", rep.detail);
    return rep.pass ? 0 : 1;
}

}  // namespace

int cmd_bounds_check(const RunOptions& opt) {
    const int samples = opt.ensemble > 0 ? opt.ensemble : 1000;
    int rc = 0;
    const int lo = opt.n > 0 ? opt.n : 2;
    const int hi = opt.n > 0 ? opt.n : 8;
    for (int n = lo; n <= hi; ++n) {
        gme_check_report rep;
        check(gme_check_bounds(n, samples, opt.seed, &rep), "bounds check");
        char name[32];
        std::snprintf(name, sizeof(name), "bounds n=%d", n);
        rc |= report_check(name, rep);
    }
    return rc;
}

int cmd_estimator_check(const RunOptions& opt) {
    const int instances = opt.ensemble > 0 ? opt.ensemble : 200;
    const int n = opt.n > 0 ? opt.n : 4;
    gme_check_report rep;
    check(gme_check_estimator(n, instances, opt.seed, &rep), "estimator check");
    char name[32];
    std::snprintf(name, sizeof(name), "estimator n=%d", n);
    return report_check(name, rep);
}

int cmd_spectrum_check(const RunOptions& opt) {
    const int n = opt.n > 0 ? opt.n : 4;
    std::vector<double> eig(std::size_t(n) + 1), mult(std::size_t(n) + 1);
    check(gme_hl_spectrum(n, eig.data(), mult.data()), "spectrum");
    std::printf("k,eigenvalue,multiplicity\n");
    for (int k = 0; k <= n; ++k) {
        std::printf("%d,%s,%s\n", k, fmt(eig[std::size_t(k)]).c_str(),
                    fmt(mult[std::size_t(k)]).c_str());
    }
    gme_check_report rep;
    check(gme_check_spectrum(n, &rep), "spectrum check");
    char name[32];
    std::snprintf(name, sizeof(name), "spectrum n=%d", n);
    return report_check(name, rep);
}

}  // namespace harness
