#pragma once

#include <array>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "qpt/coherence.hpp"
#include "qpt/errors.hpp"
#include "qpt/network.hpp"
#include "qpt/propagation.hpp"

namespace qpt {

// Families the grid optimizer knows how to parameterize. The dimer scans
// (E, J12) with site energies (E, -E); the trimer scans
// (E1 - E3, E2 - E3, J12, J23, J13) with E3 = 0. Transfer always runs from
// the first site to the last.
enum class SweepSystem { dimer, trimer };

enum class Objective {
    f_max,            // peak transfer fidelity
    tac_l1_site,      // peak running time average, l1 measure, site basis
    tac_reoc_site,    // same, relative entropy measure
    tac_l1_exciton,   // l1 measure in the energy basis (constant in time)
    tac_reoc_exciton,
};

inline const char* objective_name(Objective obj) {
    switch (obj) {
        case Objective::f_max: return "f_max";
        case Objective::tac_l1_site: return "tac_l1_site";
        case Objective::tac_reoc_site: return "tac_reoc_site";
        case Objective::tac_l1_exciton: return "tac_l1_exciton";
        case Objective::tac_reoc_exciton: return "tac_reoc_exciton";
    }
    return "unknown";
}

// Closed uniform range min + k * step, endpoints included. The span must be
// an integer number of steps so that every grid is reproducible exactly.
struct ParamRange {
    double min = 0.0;
    double max = 0.0;
    double step = 1.0;

    std::size_t count() const {
        if (!(step > 0.0)) throw ValidationError("range: step must be > 0");
        if (max < min) throw ValidationError("range: max must be >= min");
        const double ratio = (max - min) / step;
        const std::size_t n = static_cast<std::size_t>(std::floor(ratio + 1e-9));
        if (std::fabs(ratio - static_cast<double>(n)) > 1e-6)
            throw ValidationError("range: span must be an integer multiple of step");
        return n + 1;
    }

    double value(std::size_t k) const { return min + static_cast<double>(k) * step; }

    // True when the range is its own mirror image under sign flip.
    bool symmetric() const { return std::fabs(min + max) <= 1e-12; }
};

// tac_stride controls the quadrature of the ranked time averages: they are
// running means of the time-local coherence at every tac_stride-th sample
// after the start, i.e. an accumulation interval of tac_stride * dt. The
// fidelity peak always scans every sample. Both bundled defaults give a 0.01
// accumulation interval — the convention the reference optima in tables.hpp
// are calibrated against — while the dimer keeps a 0.001 sampling grid for
// the fidelity peak.
struct SweepSpec {
    SweepSystem system = SweepSystem::dimer;
    std::vector<ParamRange> ranges;
    TimeGrid time;
    Objective objective = Objective::tac_l1_site;
    std::size_t tac_stride = 1;

    static SweepSpec dimer_defaults(Objective obj) {
        SweepSpec s;
        s.system = SweepSystem::dimer;
        s.ranges = {{-0.5, 0.5, 0.01}, {-0.5, 0.5, 0.01}};
        s.time = TimeGrid(10.0, 0.001);
        s.objective = obj;
        s.tac_stride = 10;
        return s;
    }

    static SweepSpec trimer_defaults(Objective obj) {
        SweepSpec s;
        s.system = SweepSystem::trimer;
        s.ranges = {{-1.0, 1.0, 0.1},
                    {-1.0, 1.0, 0.1},
                    {-0.5, 0.5, 0.1},
                    {-0.5, 0.5, 0.1},
                    {-0.5, 0.5, 0.1}};
        s.time = TimeGrid(10.0, 0.01);
        s.objective = obj;
        s.tac_stride = 1;
        return s;
    }
};

inline std::size_t param_count(SweepSystem system) {
    return system == SweepSystem::dimer ? 2 : 5;
}

inline std::vector<std::string> param_names(SweepSystem system) {
    if (system == SweepSystem::dimer) return {"E", "J12"};
    return {"E1_minus_E3", "E2_minus_E3", "J12", "J23", "J13"};
}

inline void validate_sweep_spec(const SweepSpec& spec) {
    if (spec.ranges.size() != param_count(spec.system))
        throw ValidationError("sweep: expected " + std::to_string(param_count(spec.system)) +
                              " parameter ranges, got " + std::to_string(spec.ranges.size()));
    for (const ParamRange& r : spec.ranges) (void)r.count();  // validates
    if (spec.time.count == 0) throw ValidationError("sweep: empty time grid");
    if (spec.tac_stride == 0) throw ValidationError("sweep: tac_stride must be >= 1");
    if (spec.time.count <= spec.tac_stride)
        throw ValidationError("sweep: time grid too short for tac_stride; "
                              "need at least one strided sample after the start");
}

inline std::size_t grid_size(const SweepSpec& spec) {
    std::size_t n = 1;
    for (const ParamRange& r : spec.ranges) n *= r.count();
    return n;
}

// Row-major decoding of a flat grid index; the first parameter varies slowest.
inline std::vector<std::size_t> grid_indices(const SweepSpec& spec, std::size_t flat) {
    std::vector<std::size_t> idx(spec.ranges.size());
    for (std::size_t i = spec.ranges.size(); i-- > 0;) {
        const std::size_t c = spec.ranges[i].count();
        idx[i] = flat % c;
        flat /= c;
    }
    return idx;
}

inline std::vector<double> grid_values(const SweepSpec& spec,
                                       const std::vector<std::size_t>& idx) {
    std::vector<double> v(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) v[i] = spec.ranges[i].value(idx[i]);
    return v;
}

// Everything the optimizer learns about one grid point. The tac_* fields
// are window maxima of the strided running mean (see SweepSpec::tac_stride),
// with ties keeping the earliest time. Energy-basis values are constant in
// time, so no time is stored for them. local_tac_l1 holds the pair
// running-average maxima for site pairs (1,2), (2,3), (1,3); a dimer fills
// only the first slot.
struct SweepRecord {
    std::vector<std::size_t> indices;
    std::vector<double> params;
    double f_max = 0.0, t_f_max = 0.0;
    double tac_l1_site = 0.0, t_tac_l1_site = 0.0;
    double tac_reoc_site = 0.0, t_tac_reoc_site = 0.0;
    double tac_l1_exciton = 0.0;
    double tac_reoc_exciton = 0.0;
    std::array<double, 3> local_tac_l1{0.0, 0.0, 0.0};

    double objective_value(Objective obj) const {
        switch (obj) {
            case Objective::f_max: return f_max;
            case Objective::tac_l1_site: return tac_l1_site;
            case Objective::tac_reoc_site: return tac_reoc_site;
            case Objective::tac_l1_exciton: return tac_l1_exciton;
            case Objective::tac_reoc_exciton: return tac_reoc_exciton;
        }
        return 0.0;
    }
};

namespace detail {

// Running mean over post-start samples with earliest-maximum tracking.
// The caller feeds only the samples selected by the stride.
struct StridedMeanMax {
    double sum = 0.0;
    std::size_t n = 0;
    double best = 0.0;
    double best_t = 0.0;
    bool any = false;

    void step(double y, double t) {
        sum += y;
        ++n;
        const double avg = sum / static_cast<double>(n);
        if (!any || avg > best) {
            best = avg;
            best_t = t;
            any = true;
        }
    }
};

inline NetworkParams sweep_network(SweepSystem system, const std::vector<double>& p) {
    if (system == SweepSystem::dimer) {
        return NetworkParams{{p[0], -p[0]}, {{0.0, p[1]}, {p[1], 0.0}}};
    }
    return NetworkParams{{p[0], p[1], 0.0},
                         {{0.0, p[2], p[4]}, {p[2], 0.0, p[3]}, {p[4], p[3], 0.0}}};
}

} // namespace detail

// Evaluate one parameter point by streaming over the time grid: spectral
// propagation with per-sample phases (no recurrences, so no drift), tracking
// fidelity and coherence running averages without storing the trajectory.
inline SweepRecord evaluate_point(const SweepSpec& spec, const std::vector<std::size_t>& indices) {
    SweepRecord rec;
    rec.indices = indices;
    rec.params = grid_values(spec, indices);

    const NetworkParams net = detail::sweep_network(spec.system, rec.params);
    const std::size_t d = net.size();
    const ExcitonDecomposition es = exciton_decomposition(build_hamiltonian(net));

    // Start state is site 1, so the modal weights are the conjugated first
    // row of the eigenvector matrix.
    std::array<Complex, 4> modal0;
    std::array<double, 4> g;
    for (std::size_t m = 0; m < d; ++m) {
        modal0[m] = std::conj(es.vectors(0, m));
        g[m] = std::abs(modal0[m]);
    }
    rec.tac_l1_exciton = pure_l1_from_moduli(std::span<const double>(g.data(), d));
    rec.tac_reoc_exciton = pure_reoc_from_moduli(std::span<const double>(g.data(), d));

    // w[i][m] = V(i, m) * modal0[m]; c_i(t) = sum_m w[i][m] e^{-i E_m t}.
    std::array<Complex, 16> w;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t m = 0; m < d; ++m) w[i * d + m] = es.vectors(i, m) * modal0[m];

    detail::StridedMeanMax acc_l1, acc_reoc, acc_p01, acc_p12, acc_p02;
    const std::size_t stride = spec.tac_stride;
    std::array<Complex, 4> phase;
    std::array<double, 4> f;

    for (std::size_t k = 0; k < spec.time.count; ++k) {
        const double t = spec.time.time(k);
        for (std::size_t m = 0; m < d; ++m) {
            const double ph = -es.energies[m] * t;
            phase[m] = Complex(std::cos(ph), std::sin(ph));
        }
        for (std::size_t i = 0; i < d; ++i) {
            Complex c(0.0, 0.0);
            for (std::size_t m = 0; m < d; ++m) c += w[i * d + m] * phase[m];
            f[i] = std::sqrt(std::norm(c));
        }

        const double fid = f[d - 1];
        if (k == 0) {
            rec.f_max = fid;
            rec.t_f_max = 0.0;
        } else if (fid > rec.f_max) {
            rec.f_max = fid;
            rec.t_f_max = t;
        }

        if (k == 0 || k % stride != 0) continue;  // averages use strided samples only

        const double p01 = 2.0 * f[0] * f[1];
        double l1 = p01, p12 = 0.0, p02 = 0.0;
        if (d == 3) {
            p12 = 2.0 * f[1] * f[2];
            p02 = 2.0 * f[0] * f[2];
            l1 += p12 + p02;
        }
        double reoc_tlc = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            const double p = f[i] * f[i];
            if (p > 0.0) reoc_tlc -= p * std::log2(p);
        }

        acc_l1.step(l1, t);
        acc_reoc.step(reoc_tlc, t);
        acc_p01.step(p01, t);
        if (d == 3) {
            acc_p12.step(p12, t);
            acc_p02.step(p02, t);
        }
    }

    rec.tac_l1_site = acc_l1.best;
    rec.t_tac_l1_site = acc_l1.best_t;
    rec.tac_reoc_site = acc_reoc.best;
    rec.t_tac_reoc_site = acc_reoc.best_t;
    rec.local_tac_l1 = {acc_p01.best, acc_p12.best, acc_p02.best};
    return rec;
}

struct SweepResult {
    Objective objective = Objective::tac_l1_site;
    double best_value = 0.0;
    std::size_t total_points = 0;
    std::vector<SweepRecord> optima;  // all grid points tied with the best
};

namespace detail {

inline std::vector<std::size_t> mirror_indices(const SweepSpec& spec,
                                               const std::vector<std::size_t>& idx) {
    std::vector<std::size_t> m(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) m[i] = spec.ranges[i].count() - 1 - idx[i];
    return m;
}

// Flipping the sign of every energy and coupling conjugates the evolution
// operator; populations and coherence magnitudes are identical, so mirror
// grid points tie exactly. When every range is symmetric the mirror of a
// grid point is itself a grid point, and only the lexicographically larger
// index vector of each pair is kept.
inline void canonicalize_sign_pairs(const SweepSpec& spec, std::vector<SweepRecord>& optima) {
    for (const ParamRange& r : spec.ranges)
        if (!r.symmetric()) return;

    std::map<std::vector<std::size_t>, bool> present;
    for (const SweepRecord& rec : optima) present[rec.indices] = true;

    std::vector<SweepRecord> kept;
    kept.reserve(optima.size());
    for (SweepRecord& rec : optima) {
        const std::vector<std::size_t> mir = mirror_indices(spec, rec.indices);
        if (mir == rec.indices || rec.indices > mir || !present.count(mir))
            kept.push_back(std::move(rec));
    }
    optima = std::move(kept);
}

} // namespace detail

// Exhaustive scan of the parameter grid. The workload is split into fixed
// chunks merged in chunk order, so the result does not depend on the thread
// count or schedule. Ties within tie_tol of the best objective are all
// returned (after sign-pair canonicalization), ordered by grid index.
inline SweepResult run_sweep(const SweepSpec& spec, double tie_tol = 1e-9, unsigned threads = 0,
                             std::vector<SweepRecord>* all_records = nullptr) {
    validate_sweep_spec(spec);
    if (tie_tol < 0.0) throw ValidationError("sweep: tie_tol must be >= 0");

    const std::size_t total = grid_size(spec);
    constexpr std::size_t chunk_size = 2048;
    const std::size_t n_chunks = (total + chunk_size - 1) / chunk_size;

    struct ChunkOut {
        double best = -std::numeric_limits<double>::infinity();
        std::vector<SweepRecord> near;
        std::vector<SweepRecord> all;
    };
    std::vector<ChunkOut> chunks(n_chunks);

    unsigned n_threads = threads != 0 ? threads : std::thread::hardware_concurrency();
    if (n_threads == 0) n_threads = 1;
    n_threads = static_cast<unsigned>(
        std::min<std::size_t>(n_threads, std::max<std::size_t>(n_chunks, 1)));

    std::atomic<std::size_t> next_chunk{0};
    const bool keep_all = all_records != nullptr;

    const auto worker = [&]() {
        for (;;) {
            const std::size_t chunk = next_chunk.fetch_add(1);
            if (chunk >= n_chunks) return;
            ChunkOut& out = chunks[chunk];
            const std::size_t begin = chunk * chunk_size;
            const std::size_t end = std::min(begin + chunk_size, total);
            for (std::size_t flat = begin; flat < end; ++flat) {
                SweepRecord rec = evaluate_point(spec, grid_indices(spec, flat));
                const double value = rec.objective_value(spec.objective);
                if (value > out.best) out.best = value;
                if (value >= out.best - tie_tol) {
                    if (keep_all) out.near.push_back(rec); else out.near.push_back(std::move(rec));
                }
                if (keep_all) out.all.push_back(std::move(rec));
            }
        }
    };

    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
        for (std::thread& th : pool) th.join();
    }

    SweepResult result;
    result.objective = spec.objective;
    result.total_points = total;
    result.best_value = -std::numeric_limits<double>::infinity();
    for (const ChunkOut& out : chunks)
        if (out.best > result.best_value) result.best_value = out.best;

    for (ChunkOut& out : chunks)
        for (SweepRecord& rec : out.near)
            if (rec.objective_value(spec.objective) >= result.best_value - tie_tol)
                result.optima.push_back(std::move(rec));

    detail::canonicalize_sign_pairs(spec, result.optima);

    if (all_records) {
        all_records->clear();
        all_records->reserve(total);
        for (ChunkOut& out : chunks)
            for (SweepRecord& rec : out.all) all_records->push_back(std::move(rec));
    }
    return result;
}

} // namespace qpt
