// Experiment orchestration on top of the public C API: ensemble runners,
// summary statistics, CSV emission, noise-file parsing. The CLI is a thin
// flag-parsing layer over these entry points.
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "gme/gme.h"

namespace harness {

// Options shared by all subcommands; each runner reads the subset it needs.
struct RunOptions {
    int n = 0;
    std::string family = "GHZ";
    double s = 0.5;
    std::uint64_t seed = 0;
    long long shots_local = 512;
    long long shots_global = 8192;
    int iters_local = 80;
    int iters_global = 295;
    int reps = 5;
    int ensemble = 0;  // 0: per-experiment default
    std::string gains = "asymptotic";
    double gain_A = -1.0;  // < 0: per-experiment default
    std::string noise_file;
    int jobs = 1;
    std::string out;
};

struct Quartiles {
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
};

// Linear-interpolation quantiles on a copy of the data (q in [0,1],
// position q*(n-1)).
Quartiles quartiles(std::vector<double> values);

// One float with 12 significant digits, the CSV number format.
std::string fmt(double value);

struct SummaryRow {
    double x = 0.0;
    double median = 0.0;
    double q1 = 0.0;
    double q3 = 0.0;
    double bp_pct = 0.0;
};

void write_summary_csv(const std::string& path,
                       const std::vector<SummaryRow>& rows, bool with_bp);
void write_trace_csv(const std::string& path, const gme_trace* trace);

// Non-overlapping rng stream for ensemble member m; repetitions inside a
// member consume stream offsets below the next member's base.
std::uint64_t member_stream(int m);

// Runs fn(0..count-1) on up to `jobs` threads. Each call must be an
// isolated computation writing only to its own slot; the schedule cannot
// influence results.
void parallel_for(int count, int jobs, const std::function<void(int)>& fn);

struct NoiseSpec {
    double depolarizing = 0.0;
    std::vector<double> p01;
    std::vector<double> p10;
};

// Flat key=value file: depolarizing, p01, p10 (uniform), plus optional
// per-qubit overrides p01_<j> / p10_<j>. Lines starting with # ignored.
NoiseSpec parse_noise_file(const std::string& path, int n);

int cmd_single(const RunOptions& opt, bool improved);
int cmd_random_benchmark(const RunOptions& opt);
int cmd_sweep_s(const RunOptions& opt, std::vector<double> grid);
int cmd_noise_study(const RunOptions& opt);
int cmd_exact_gme(const RunOptions& opt);
int cmd_bounds_check(const RunOptions& opt);
int cmd_estimator_check(const RunOptions& opt);
int cmd_spectrum_check(const RunOptions& opt);

}  // namespace harness
