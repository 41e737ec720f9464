#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <ostream>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "qpt/config.hpp"
#include "qpt/csv.hpp"
#include "qpt/errors.hpp"
#include "qpt/metrics.hpp"
#include "qpt/oracles.hpp"
#include "qpt/reduced_forms.hpp"
#include "qpt/sweep.hpp"
#include "qpt/tables.hpp"

// Command execution: each run_* function performs one command, writes its
// data files under the output directory, logs a short human-readable
// summary, and returns the process exit code. Invalid inputs and I/O
// problems surface as ValidationError / IoError for the entry point to map;
// failed numeric checks return exit_check_failed directly.

namespace qpt {

inline constexpr int exit_ok = 0;
inline constexpr int exit_invalid = 1;
inline constexpr int exit_check_failed = 2;
inline constexpr int exit_io = 3;

namespace detail {

inline void ensure_directory(const std::string& out_dir) {
    if (out_dir.empty()) throw ValidationError("run: output directory must not be empty");
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("run: cannot create output directory " + out_dir + ": " + ec.message());
}

inline std::string output_path(const std::string& out_dir, const char* name) {
    return (std::filesystem::path(out_dir) / name).string();
}

// Engine-independent uniform draw on [0, 1): 53 random mantissa bits, so
// identical seeds give identical streams on every platform.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_in(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

// Standard normal via Box-Muller on the portable uniform stream.
inline double normal01(std::mt19937_64& rng) {
    const double u1 = 1.0 - uniform01(rng);  // (0, 1]: keeps the log finite
    const double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

inline std::string short_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

} // namespace detail

// Simulate one trajectory and emit per-sample populations, fidelity, and
// coherence series. Column layout is fixed: t, f_1..f_N, F, C_l1_site,
// C_reoc_site, TAC_l1_site, TAC_reoc_site, C_l1_exciton, C_reoc_exciton,
// and for three-site networks the pair columns C12, C23, C13.
inline int run_evolve(const EvolveConfig& cfg, const std::string& out_dir, std::ostream& log) {
    detail::ensure_directory(out_dir);

    const ExcitonDecomposition decomp = exciton_decomposition(build_hamiltonian(cfg.network));
    const Trajectory traj = trajectory(decomp, cfg.start_site, cfg.grid);
    const TransferReport transfer = fidelity_series(traj, cfg.target_site);

    const BasisChoice site = BasisChoice::site();
    const BasisChoice exciton = BasisChoice::exciton(decomp);
    const CoherenceSeries l1_site = coherence_series(traj, Measure::l1, site);
    const CoherenceSeries reoc_site = coherence_series(traj, Measure::reoc, site);
    const CoherenceSeries l1_exciton = coherence_series(traj, Measure::l1, exciton);
    const CoherenceSeries reoc_exciton = coherence_series(traj, Measure::reoc, exciton);

    const std::size_t n = traj.dim();
    const bool with_pairs = n == 3;
    PairCoherenceSeries pair12, pair23, pair13;
    if (with_pairs) {
        pair12 = pair_coherence_series(traj, 0, 1);
        pair23 = pair_coherence_series(traj, 1, 2);
        pair13 = pair_coherence_series(traj, 0, 2);
    }

    CsvTable table;
    table.header = {"t"};
    for (std::size_t i = 1; i <= n; ++i) table.header.push_back("f_" + std::to_string(i));
    for (const char* name : {"F", "C_l1_site", "C_reoc_site", "TAC_l1_site", "TAC_reoc_site",
                             "C_l1_exciton", "C_reoc_exciton"})
        table.header.push_back(name);
    if (with_pairs) {
        table.header.push_back("C12");
        table.header.push_back("C23");
        table.header.push_back("C13");
    }

    table.rows.reserve(cfg.grid.count);
    for (std::size_t k = 0; k < cfg.grid.count; ++k) {
        std::vector<double> row;
        row.reserve(table.header.size());
        row.push_back(cfg.grid.time(k));
        for (std::size_t i = 0; i < n; ++i) row.push_back(traj.moduli[k][i]);
        row.push_back(transfer.fidelity[k]);
        row.push_back(l1_site.tlc[k]);
        row.push_back(reoc_site.tlc[k]);
        row.push_back(l1_site.tac[k]);
        row.push_back(reoc_site.tac[k]);
        row.push_back(l1_exciton.tlc[k]);
        row.push_back(reoc_exciton.tlc[k]);
        if (with_pairs) {
            row.push_back(pair12.tlc[k]);
            row.push_back(pair23.tlc[k]);
            row.push_back(pair13.tlc[k]);
        }
        table.rows.push_back(std::move(row));
    }
    write_csv(detail::output_path(out_dir, "trajectory.csv"), table);

    const auto [tac_l1, t_l1] = max_tac(l1_site);
    const auto [tac_reoc, t_reoc] = max_tac(reoc_site);
    log << "evolve: " << cfg.grid.count << " samples, " << n << " sites\n";
    log << "  transfer peak " << detail::short_num(transfer.f_max) << " at t = "
        << detail::short_num(transfer.t_at_max) << (transfer.perfect ? " (perfect)" : "") << "\n";
    log << "  max TAC l1 " << detail::short_num(tac_l1) << " at t = " << detail::short_num(t_l1)
        << ", max TAC reoc " << detail::short_num(tac_reoc) << " at t = "
        << detail::short_num(t_reoc) << "\n";
    log << "  wrote trajectory.csv\n";
    return exit_ok;
}

namespace detail {

inline std::vector<std::string> sweep_columns(const SweepSpec& spec) {
    std::vector<std::string> header = param_names(spec.system);
    for (const char* name : {"f_max", "t_f_max", "tac_l1_site", "t_tac_l1_site", "tac_reoc_site",
                             "t_tac_reoc_site", "tac_l1_exciton", "tac_reoc_exciton"})
        header.push_back(name);
    header.push_back("local_tac_l1_12");
    if (spec.system == SweepSystem::trimer) {
        header.push_back("local_tac_l1_23");
        header.push_back("local_tac_l1_13");
    }
    return header;
}

inline std::vector<double> sweep_row(const SweepSpec& spec, const SweepRecord& rec) {
    std::vector<double> row = rec.params;
    row.push_back(rec.f_max);
    row.push_back(rec.t_f_max);
    row.push_back(rec.tac_l1_site);
    row.push_back(rec.t_tac_l1_site);
    row.push_back(rec.tac_reoc_site);
    row.push_back(rec.t_tac_reoc_site);
    row.push_back(rec.tac_l1_exciton);
    row.push_back(rec.tac_reoc_exciton);
    row.push_back(rec.local_tac_l1[0]);
    if (spec.system == SweepSystem::trimer) {
        row.push_back(rec.local_tac_l1[1]);
        row.push_back(rec.local_tac_l1[2]);
    }
    return row;
}

} // namespace detail

// Exhaustive parameter scan. Writes optima.csv (the tie set, one row per
// record) and, when keep_all is set, records.csv with every grid point.
inline int run_sweep_cmd(const SweepConfig& cfg, const std::string& out_dir, std::ostream& log) {
    detail::ensure_directory(out_dir);

    std::vector<SweepRecord> all;
    const SweepResult result =
        run_sweep(cfg.spec, cfg.tie_tol, cfg.threads, cfg.keep_all ? &all : nullptr);

    CsvTable optima;
    optima.header = detail::sweep_columns(cfg.spec);
    for (const SweepRecord& rec : result.optima)
        optima.rows.push_back(detail::sweep_row(cfg.spec, rec));
    write_csv(detail::output_path(out_dir, "optima.csv"), optima);

    if (cfg.keep_all) {
        CsvTable records;
        records.header = optima.header;
        records.rows.reserve(all.size());
        for (const SweepRecord& rec : all) records.rows.push_back(detail::sweep_row(cfg.spec, rec));
        write_csv(detail::output_path(out_dir, "records.csv"), records);
    }

    log << "sweep: " << result.total_points << " grid points, objective "
        << objective_name(cfg.spec.objective) << "\n";
    log << "  best value " << detail::short_num(result.best_value) << ", " << result.optima.size()
        << " tied optima (tie_tol " << detail::short_num(cfg.tie_tol) << ")\n";
    log << "  wrote optima.csv" << (cfg.keep_all ? " and records.csv" : "") << "\n";
    return exit_ok;
}

// Long-run behavior of the two-site running averages at a fixed mixing
// angle: one row per transfer period plus the closed-form limits. The
// trajectory is streamed, so long horizons cost no memory.
inline int run_asymptote(const AsymptoteConfig& cfg, const std::string& out_dir,
                         std::ostream& log) {
    if (!(cfg.theta >= 0.0 && cfg.theta <= std::numbers::pi))
        throw ValidationError("asymptote: theta must lie in [0, pi]");
    if (!(cfg.omega > 0.0)) throw ValidationError("asymptote: omega must be > 0");
    if (cfg.periods < 1) throw ValidationError("asymptote: periods must be >= 1");
    if (cfg.samples_per_period < 2)
        throw ValidationError("asymptote: need at least 2 samples per period");
    detail::ensure_directory(out_dir);

    const double bias = cfg.omega * std::cos(cfg.theta);
    const double coupling = cfg.omega * std::sin(cfg.theta);
    const DimerForm form{cfg.omega, cfg.theta, bias, coupling};
    const NetworkParams net{{bias, -bias}, {{0.0, coupling}, {coupling, 0.0}}};
    const ExcitonDecomposition decomp = exciton_decomposition(build_hamiltonian(net));

    // The transfer amplitude repeats every pi / omega; sampling that period
    // uniformly keeps every row an exact whole-period average.
    const double period = std::numbers::pi / cfg.omega;
    const double dt = period / static_cast<double>(cfg.samples_per_period);

    const CVector start = site_basis_state(2, 0).amplitudes;
    CVector modal0 = adjoint_apply(decomp.vectors, start);

    const double asym_l1 = dimer_tac_asymptote_l1(form);
    const double asym_reoc = dimer_tac_asymptote_reoc(form);

    CsvTable table;
    table.header = {"period", "t", "tac_l1", "tac_reoc", "asymptote_l1", "asymptote_reoc"};
    table.rows.reserve(cfg.periods);

    double integral_l1 = 0.0, integral_reoc = 0.0;
    double prev_l1 = 0.0, prev_reoc = 0.0;  // start state is site-local: zero coherence
    const std::size_t total = cfg.periods * cfg.samples_per_period;
    double final_tac_l1 = 0.0, final_tac_reoc = 0.0;
    for (std::size_t k = 1; k <= total; ++k) {
        const double t = static_cast<double>(k) * dt;
        Complex c0(0.0, 0.0), c1(0.0, 0.0);
        for (std::size_t m = 0; m < 2; ++m) {
            const double ph = -decomp.energies[m] * t;
            const Complex factor = modal0[m] * Complex(std::cos(ph), std::sin(ph));
            c0 += decomp.vectors(0, m) * factor;
            c1 += decomp.vectors(1, m) * factor;
        }
        const double f[2] = {std::abs(c0), std::abs(c1)};
        const double l1 = pure_l1_from_moduli(f);
        const double reoc_value = pure_reoc_from_moduli(f);
        integral_l1 += 0.5 * dt * (prev_l1 + l1);
        integral_reoc += 0.5 * dt * (prev_reoc + reoc_value);
        prev_l1 = l1;
        prev_reoc = reoc_value;
        if (k % cfg.samples_per_period == 0) {
            final_tac_l1 = integral_l1 / t;
            final_tac_reoc = integral_reoc / t;
            table.rows.push_back({static_cast<double>(k / cfg.samples_per_period), t, final_tac_l1,
                                  final_tac_reoc, asym_l1, asym_reoc});
        }
    }
    write_csv(detail::output_path(out_dir, "tac_periods.csv"), table);

    log << "asymptote: theta " << detail::short_num(cfg.theta) << ", omega "
        << detail::short_num(cfg.omega) << ", " << cfg.periods << " periods\n";
    log << "  final TAC l1 " << detail::short_num(final_tac_l1) << " (limit "
        << detail::short_num(asym_l1) << "), final TAC reoc " << detail::short_num(final_tac_reoc)
        << " (limit " << detail::short_num(asym_reoc) << ")\n";
    log << "  wrote tac_periods.csv\n";
    return exit_ok;
}

namespace detail {

struct OracleBlock {
    const char* name;
    double deviation;
    double bound;
    bool pass() const { return deviation <= bound; }
};

// Random two-site networks against the closed forms for fidelity and both
// site-basis coherence measures, on the full sampling grid.
inline OracleBlock check_dimer_forms(std::mt19937_64& rng, std::size_t draws) {
    const TimeGrid grid(10.0, 0.001);
    double worst = 0.0;
    for (std::size_t i = 0; i < draws; ++i) {
        const double e = uniform_in(rng, -0.5, 0.5);
        const double j = uniform_in(rng, -0.5, 0.5);
        const NetworkParams net{{e, -e}, {{0.0, j}, {j, 0.0}}};
        const DimerForm form = dimer_form(net);
        const ExcitonDecomposition decomp = exciton_decomposition(build_hamiltonian(net));
        const Trajectory traj = trajectory(decomp, 0, grid);
        for (std::size_t k = 0; k < grid.count; ++k) {
            const double t = grid.time(k);
            const CoherenceValue oracle = dimer_site_coherence(form, t);
            worst = std::max(worst, std::fabs(traj.moduli[k][1] - dimer_fidelity(form, t)));
            worst = std::max(worst, std::fabs(pure_l1_from_moduli(traj.moduli[k]) - oracle.l1));
            worst = std::max(worst, std::fabs(pure_reoc_from_moduli(traj.moduli[k]) - oracle.reoc));
        }
    }
    return {"two-site closed forms", worst, 1e-9};
}

// One transfer-structured three-site draw: resonant ends, matched outer
// couplings, and a spectrum kept clear of degeneracies so that eigenvector
// identification stays well-conditioned.
inline NetworkParams draw_structured_trimer(std::mt19937_64& rng) {
    for (;;) {
        const double barrier = uniform_in(rng, -0.5, 0.5);
        double j23 = uniform_in(rng, 0.05, 0.5);
        if (uniform01(rng) < 0.5) j23 = -j23;
        const double j13 = uniform_in(rng, -0.5, 0.5);
        const double sigma = uniform01(rng) < 0.5 ? 1.0 : -1.0;
        const double j12 = sigma * j23;
        const NetworkParams net{{0.0, barrier, 0.0},
                                {{0.0, j12, j13}, {j12, 0.0, j23}, {j13, j23, 0.0}}};
        const TrimerReducedForm form = trimer_reduced(net);
        if (std::min(std::fabs(form.omega_plus), std::fabs(form.omega_minus)) >= 0.02) return net;
    }
}

inline OracleBlock check_trimer_forms(std::mt19937_64& rng, std::size_t draws) {
    const TimeGrid grid(10.0, 0.01);
    double worst = 0.0;
    for (std::size_t i = 0; i < draws; ++i) {
        const NetworkParams net = draw_structured_trimer(rng);
        const TrimerOracle oracle = trimer_oracle(trimer_reduced(net));
        const ExcitonDecomposition decomp = exciton_decomposition(build_hamiltonian(net));
        const Trajectory traj = trajectory(decomp, 0, grid);
        for (std::size_t k = 0; k < grid.count; ++k) {
            const std::array<double, 3> f = trimer_f_functions(oracle, grid.time(k));
            for (std::size_t s = 0; s < 3; ++s)
                worst = std::max(worst, std::fabs(traj.moduli[k][s] - f[s]));
        }
    }
    return {"three-site transfer family", worst, 1e-9};
}

// Weight of the start site on the level with no amplitude on the middle
// site: must be exactly 1/sqrt(2) for every structured draw.
inline OracleBlock check_dark_projection(std::mt19937_64& rng, std::size_t draws) {
    double worst = 0.0;
    for (std::size_t i = 0; i < draws; ++i) {
        const NetworkParams net = draw_structured_trimer(rng);
        const ExcitonDecomposition decomp = exciton_decomposition(build_hamiltonian(net));
        std::size_t dark = 0;
        double least = std::abs(decomp.vectors(1, 0));
        for (std::size_t m = 1; m < 3; ++m) {
            const double mid = std::abs(decomp.vectors(1, m));
            if (mid < least) {
                least = mid;
                dark = m;
            }
        }
        worst = std::max(worst,
                         std::fabs(std::abs(decomp.vectors(0, dark)) - 1.0 / std::numbers::sqrt2));
    }
    return {"dark-level weight of the start site", worst, 1e-10};
}

// Coherence measured in the energy basis must not move along a trajectory.
inline OracleBlock check_exciton_constancy(std::mt19937_64& rng, std::size_t draws) {
    const TimeGrid grid(10.0, 0.01);
    double worst = 0.0;
    for (std::size_t i = 0; i < draws; ++i) {
        const std::size_t n = 2 + i % 7;
        NetworkParams net;
        net.site_energies.resize(n);
        net.couplings.assign(n, std::vector<double>(n, 0.0));
        for (std::size_t a = 0; a < n; ++a) net.site_energies[a] = uniform_in(rng, -1.0, 1.0);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a + 1; b < n; ++b)
                net.couplings[a][b] = net.couplings[b][a] = uniform_in(rng, -0.5, 0.5);
        const ExcitonDecomposition decomp = exciton_decomposition(build_hamiltonian(net));
        const Trajectory traj = trajectory(decomp, 0, grid);
        const BasisChoice exciton = BasisChoice::exciton(decomp);
        for (Measure measure : {Measure::l1, Measure::reoc}) {
            const CoherenceSeries series = coherence_series(traj, measure, exciton);
            double mean = 0.0;
            for (double v : series.tlc) mean += v;
            mean /= static_cast<double>(series.tlc.size());
            double var = 0.0;
            for (double v : series.tlc) var += (v - mean) * (v - mean);
            var /= static_cast<double>(series.tlc.size());
            worst = std::max(worst, std::sqrt(var));
        }
    }
    return {"energy-basis constancy (std)", worst, 1e-10};
}

inline PureState draw_pure_state(std::mt19937_64& rng, std::size_t dim) {
    CVector c(dim);
    for (Complex& z : c) z = Complex(normal01(rng), normal01(rng));
    const double n = norm2(c);
    for (Complex& z : c) z /= n;
    return PureState{std::move(c)};
}

// Measure bounds on random pure states across dimensions 2..16.
inline OracleBlock check_state_bounds(std::mt19937_64& rng, std::size_t draws) {
    double worst = 0.0;
    const BasisChoice site = BasisChoice::site();
    for (std::size_t i = 0; i < draws; ++i) {
        const std::size_t dim = 2 + i % 15;
        const PureState state = draw_pure_state(rng, dim);
        const CMatrix rho = density_matrix(state);
        const double l1 = l1_coherence(rho, site);
        const double re = reoc(rho, site);
        worst = std::max(worst, l1 - (static_cast<double>(dim) - 1.0));
        worst = std::max(worst, re - std::log2(static_cast<double>(dim)));
    }
    return {"state-space bounds (overshoot)", std::max(worst, 0.0), 1e-9};
}

// On two-level pure states the entropy measure is a function of the l1
// value: reoc == h((1 + sqrt(1 - l1^2)) / 2).
inline OracleBlock check_dimer_measure_relation(std::mt19937_64& rng, std::size_t draws) {
    double worst = 0.0;
    const BasisChoice site = BasisChoice::site();
    for (std::size_t i = 0; i < draws; ++i) {
        const PureState state = draw_pure_state(rng, 2);
        const CMatrix rho = density_matrix(state);
        const double l1 = l1_coherence(rho, site);
        const double re = reoc(rho, site);
        const double expected = binary_entropy(0.5 * (1.0 + std::sqrt(std::max(0.0, 1.0 - l1 * l1))));
        worst = std::max(worst, std::fabs(re - expected));
    }
    return {"two-level measure relation", worst, 1e-9};
}

} // namespace detail

// Randomized cross-checks of the numerical pipeline against the closed
// forms. Prints one line per block with its worst deviation; exits nonzero
// if any block is out of bounds.
inline int run_oracle_check(const OracleCheckConfig& cfg, std::ostream& log) {
    std::mt19937_64 rng(cfg.seed);
    const detail::OracleBlock blocks[] = {
        detail::check_dimer_forms(rng, cfg.draws),
        detail::check_trimer_forms(rng, cfg.draws),
        detail::check_dark_projection(rng, cfg.draws),
        detail::check_exciton_constancy(rng, cfg.draws),
        detail::check_state_bounds(rng, cfg.draws),
        detail::check_dimer_measure_relation(rng, cfg.draws),
    };

    log << "oracle-check: seed " << cfg.seed << ", " << cfg.draws << " draws per block\n";
    bool all_pass = true;
    for (const detail::OracleBlock& block : blocks) {
        all_pass = all_pass && block.pass();
        log << "  [" << (block.pass() ? "ok" : "FAIL") << "] " << block.name << ": max deviation "
            << detail::short_num(block.deviation) << " (bound " << detail::short_num(block.bound)
            << ")\n";
    }
    log << "oracle-check: " << (all_pass ? "PASS" : "FAIL") << "\n";
    return all_pass ? exit_ok : exit_check_failed;
}

// Recompute one bundled reference table, write the comparison CSV, and log
// every check. Mismatches are reported, never suppressed.
inline int run_reproduce(const ReproduceConfig& cfg, const std::string& out_dir,
                         std::ostream& log) {
    detail::ensure_directory(out_dir);
    const TableReport report = reproduce_table(cfg.table_id, cfg.threads);

    const std::string name = "table" + std::to_string(cfg.table_id) + "_comparison.csv";
    write_csv(detail::output_path(out_dir, name.c_str()), comparison_csv(report));

    log << "reproduce: table " << cfg.table_id << "\n";
    for (const TableCheck& check : report.checks)
        log << "  [" << (check.pass ? "ok" : "FAIL") << "] " << check.label << ": expected "
            << detail::short_num(check.expected) << ", computed "
            << detail::short_num(check.computed) << ", |delta| " << detail::short_num(check.delta)
            << " (tol " << detail::short_num(check.tol) << ")\n";
    log << "  wrote " << name << "\n";
    log << "reproduce: " << (report.pass ? "PASS" : "FAIL") << "\n";
    return report.pass ? exit_ok : exit_check_failed;
}

// Dispatch one parsed configuration. The output directory is required by
// every command except oracle-check, which writes no files.
inline int run(const RunConfig& cfg, const std::string& out_dir, std::ostream& log) {
    switch (cfg.command()) {
        case Command::evolve:
            return run_evolve(std::get<EvolveConfig>(cfg.payload), out_dir, log);
        case Command::sweep:
            return run_sweep_cmd(std::get<SweepConfig>(cfg.payload), out_dir, log);
        case Command::asymptote:
            return run_asymptote(std::get<AsymptoteConfig>(cfg.payload), out_dir, log);
        case Command::oracle_check:
            return run_oracle_check(std::get<OracleCheckConfig>(cfg.payload), log);
        case Command::reproduce:
            return run_reproduce(std::get<ReproduceConfig>(cfg.payload), out_dir, log);
    }
    throw ValidationError("run: unknown command");
}

} // namespace qpt
