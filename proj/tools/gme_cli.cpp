// Command-line front end: one subcommand per experiment, all running
// through the shared-library C API via the harness layer.

#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "harness.hpp"

namespace {

void add_common_flags(CLI::App* cmd, harness::RunOptions& opt,
                      bool* seed_given) {
    cmd->add_option("--n", opt.n, "number of qubits");
    cmd->add_option("--family", opt.family,
                    "state family: GHZ | W | Wtilde | GHZW | WWtilde");
    cmd->add_option("--seed", opt.seed, "rng seed")
        ->each([seed_given](const std::string&) { *seed_given = true; });
    cmd->add_option("--shots-local", opt.shots_local,
                    "shots per local-stage evaluation");
    cmd->add_option("--shots-global", opt.shots_global,
                    "shots per global-stage evaluation");
    cmd->add_option("--iters-local", opt.iters_local,
                    "local warm-up iterations");
    cmd->add_option("--iters-global", opt.iters_global,
                    "global-stage iterations");
    cmd->add_option("--reps", opt.reps, "repetitions for best-of selection");
    cmd->add_option("--ensemble", opt.ensemble, "ensemble size");
    cmd->add_option("--gains", opt.gains, "gain preset: standard | asymptotic")
        ->check(CLI::IsMember({"standard", "asymptotic"}));
    cmd->add_option("--gain-A", opt.gain_A,
                    "stability constant A of the global-stage gain schedule");
    cmd->add_option("--noise-file", opt.noise_file,
                    "key=value noise model file");
    cmd->add_option("--jobs", opt.jobs, "worker threads")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--out", opt.out, "output CSV path (or stem)");
}

void resolve_seed(bool seed_given, bool required, harness::RunOptions& opt) {
    if (seed_given) return;
    if (const char* env = std::getenv("GME_LAB_SEED")) {
        opt.seed = std::strtoull(env, nullptr, 10);
        return;
    }
    if (required) {
        throw std::runtime_error(
            "--seed is required (or set GME_LAB_SEED) for this subcommand");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Geometric measure of entanglement lab"};
    app.require_subcommand(1);

    harness::RunOptions opt;
    bool seed_given = false;
    std::vector<double> s_grid;
    double s_value = 0.5;

    CLI::App* vdge = app.add_subcommand("vdge", "single VDGE optimization");
    CLI::App* ivdge = app.add_subcommand("ivdge", "single iVDGE optimization");
    CLI::App* sweep = app.add_subcommand(
        "sweep-s", "GHZ/W superposition sweep over the weight s");
    CLI::App* noise = app.add_subcommand(
        "noise-study", "noisy GHZ barren-plateau study over shot budgets");
    CLI::App* bench = app.add_subcommand(
        "random-benchmark", "Haar-random states: error vs cumulative shots");
    CLI::App* bounds = app.add_subcommand("bounds-check",
                                          "infidelity sandwich property suite");
    CLI::App* estimator =
        app.add_subcommand("estimator-check", "matching estimator suite");
    CLI::App* spectrum =
        app.add_subcommand("spectrum-check", "local-Hamiltonian spectrum suite");
    CLI::App* exact =
        app.add_subcommand("exact-gme", "classical oracle value of a named state");

    for (CLI::App* cmd : {vdge, ivdge, sweep, noise, bench, bounds, estimator,
                          spectrum, exact}) {
        add_common_flags(cmd, opt, &seed_given);
    }
    for (CLI::App* cmd : {vdge, ivdge, exact}) {
        cmd->add_option("--s", s_value, "superposition weight");
    }
    sweep->add_option("--s", s_grid,
                      "weight grid (repeatable; default 0,0.25,0.5,0.75,1)");
    for (CLI::App* cmd : {vdge, ivdge, sweep, bench, exact}) {
        cmd->get_option("--n")->required();
    }

    CLI11_PARSE(app, argc, argv);

    try {
        if (noise->parsed() && opt.n == 0) opt.n = 7;
        const bool stochastic = vdge->parsed() || ivdge->parsed() ||
                                sweep->parsed() || noise->parsed() ||
                                bench->parsed();
        resolve_seed(seed_given, stochastic, opt);
        opt.s = s_value;

        if (vdge->parsed()) return harness::cmd_single(opt, false);
        if (ivdge->parsed()) return harness::cmd_single(opt, true);
        if (sweep->parsed()) return harness::cmd_sweep_s(opt, s_grid);
        if (noise->parsed()) return harness::cmd_noise_study(opt);
        if (bench->parsed()) return harness::cmd_random_benchmark(opt);
        if (bounds->parsed()) return harness::cmd_bounds_check(opt);
        if (estimator->parsed()) return harness::cmd_estimator_check(opt);
        if (spectrum->parsed()) return harness::cmd_spectrum_check(opt);
        if (exact->parsed()) return harness::cmd_exact_gme(opt);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
