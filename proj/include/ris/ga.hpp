#pragma once

// Continuous genetic algorithm for max-min PDAF code design.
//
// Each generation: fitness-proportional selection of 2L parents, random
// pairing into L couples, per-gene blend crossover, Gaussian mutation clamped
// to [0, 2 pi], then elitist replacement of the worst offspring.
//
// Randomness is drawn from counter-based streams keyed by (seed, generation,
// slot), and fitness evaluation consumes none, so results do not depend on
// how many threads evaluate the population.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "ris/array_model.hpp"
#include "ris/error.hpp"
#include "ris/rng.hpp"

namespace ris {

struct GaConfig {
    int population_size = 1000;  // 2L
    int generations = 300;       // N
    int grid_d = 1000;           // D
    double crossover_weight_lo = 0.0;  // per-gene blend weight w ~ U[lo, hi]
    double crossover_weight_hi = 1.0;
    double mutation_scale = 0.1;  // std-dev of the Gaussian perturbation, radians
    double mutation_prob = 0.1;   // per gene
    std::uint64_t seed = 1;
    int elitism_count = 1;

    void validate() const {
        if (population_size < 2 || population_size % 2 != 0)
            throw InvalidInput("population size must be an even integer >= 2, got " + std::to_string(population_size));
        if (generations < 1) throw InvalidInput("generations must be >= 1");
        if (grid_d < 1) throw InvalidInput("grid resolution D must be >= 1");
        if (!(crossover_weight_lo >= 0.0 && crossover_weight_lo <= crossover_weight_hi && crossover_weight_hi <= 1.0))
            throw InvalidInput("crossover weight range must satisfy 0 <= lo <= hi <= 1");
        if (!(mutation_scale > 0.0) || !std::isfinite(mutation_scale)) throw InvalidInput("mutation scale must be positive");
        if (!(mutation_prob >= 0.0 && mutation_prob <= 1.0)) throw InvalidInput("mutation probability must lie in [0, 1]");
        if (elitism_count < 0 || elitism_count > population_size)
            throw InvalidInput("elitism count must lie in [0, population size]");
    }

    friend bool operator==(const GaConfig&, const GaConfig&) = default;
};

struct TracePoint {
    int generation;          // 1..N
    double best_so_far;      // best fitness observed up to and including this generation
    double generation_best;  // best fitness in this generation's population
};

struct GaRun {
    PhaseCode best_code;
    double best_fitness = 0.0;  // linear grid-min PDAF
    std::vector<TracePoint> trace;
    GaConfig config;
    int uniform_selection_generations = 0;  // generations whose total fitness was zero
};

/// eta(Phi) = min over the grid of A(Phi, theta_i).
inline double fitness(const PhaseCode& code, const ArrayGeometry& geom, const AngularGrid& grid) {
    detail::check_dims(code.size(), geom);
    return GridEvaluator(geom, grid).min_value(code.phases());
}

/// phase + perturbation, reset to the nearest end of [0, 2 pi] when it leaves the interval.
inline double mutate_clamped(double phase, double perturbation) {
    return std::clamp(phase + perturbation, 0.0, kTwoPi);
}

/// Lipschitz constant of A(Phi, .) in theta: (M-1) M^2 pi (Delta/lambda).
inline double lipschitz_constant(const ArrayGeometry& geom) {
    const double m = geom.m();
    return (m - 1.0) * m * m * kPi * geom.spacing_ratio();
}

/// Upper bound on |true min - grid min| for a D+1 point grid: (M-1) M^2 pi^2 (Delta/lambda) / D.
inline double discretization_error_bound(const ArrayGeometry& geom, int d) {
    if (d < 1) throw InvalidInput("grid resolution D must be >= 1");
    return lipschitz_constant(geom) * kPi / d;
}

struct SelectionDistribution {
    std::vector<double> probabilities;
    bool uniform_fallback = false;
};

/// Pr{Q = k} = eta_k / sum eta; uniform when every fitness is zero.
inline SelectionDistribution selection_probabilities(std::span<const double> f) {
    SelectionDistribution d;
    d.probabilities.resize(f.size());
    double total = 0.0;
    for (double v : f) total += v;
    if (!(total > 0.0)) {
        d.uniform_fallback = true;
        std::fill(d.probabilities.begin(), d.probabilities.end(), 1.0 / static_cast<double>(f.size()));
        return d;
    }
    for (std::size_t i = 0; i < f.size(); ++i) d.probabilities[i] = f[i] / total;
    return d;
}

namespace detail {

template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += workers) fn(i);
        });
    for (auto& t : pool) t.join();
}

// Indices sorted by fitness, descending (ties keep the lower index first).
inline std::vector<std::size_t> rank_desc(std::span<const double> f) {
    std::vector<std::size_t> idx(f.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return f[a] > f[b]; });
    return idx;
}

}  // namespace detail

inline GaRun run_cga(const GaConfig& config, const ArrayGeometry& geom, int threads = 1) {
    config.validate();
    const auto m = static_cast<std::size_t>(geom.m());
    const auto pop = static_cast<std::size_t>(config.population_size);
    const AngularGrid grid(config.grid_d);
    const GridEvaluator eval(geom, grid);

    std::vector<double> genes(pop * m);
    std::vector<double> next(pop * m);
    std::vector<double> fit(pop);
    std::vector<double> next_fit(pop);

    auto evaluate = [&](const std::vector<double>& g, std::vector<double>& out) {
        detail::parallel_for(pop, threads, [&](std::size_t i) { out[i] = eval.min_value(std::span(g).subspan(i * m, m)); });
    };

    {
        const std::uint64_t init_key = derive_seed(config.seed, 0);
        for (std::size_t i = 0; i < pop; ++i) {
            Stream rng(init_key, i);
            for (std::size_t k = 0; k < m; ++k) genes[i * m + k] = kTwoPi * rng.uniform();
        }
    }
    evaluate(genes, fit);

    GaRun run;
    run.config = config;
    std::size_t best_idx = detail::rank_desc(fit).front();
    run.best_fitness = fit[best_idx];
    std::vector<double> best_genes(genes.begin() + static_cast<std::ptrdiff_t>(best_idx * m),
                                   genes.begin() + static_cast<std::ptrdiff_t>((best_idx + 1) * m));
    run.trace.reserve(static_cast<std::size_t>(config.generations));

    std::vector<double> cdf(pop);
    std::vector<std::size_t> parents(pop);

    for (int g = 1; g <= config.generations; ++g) {
        const std::uint64_t gen_key = derive_seed(config.seed, static_cast<std::uint64_t>(g));

        // selection
        const auto sel = selection_probabilities(fit);
        if (sel.uniform_fallback) ++run.uniform_selection_generations;
        std::partial_sum(sel.probabilities.begin(), sel.probabilities.end(), cdf.begin());
        Stream sel_rng(gen_key, 0);
        for (auto& p : parents) {
            const double u = sel_rng.uniform() * cdf.back();
            const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
            p = std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), pop - 1);
        }
        // random pairing
        for (std::size_t i = pop - 1; i > 0; --i) std::swap(parents[i], parents[sel_rng.below(i + 1)]);

        // crossover and mutation, one stream per couple
        for (std::size_t c = 0; c < pop / 2; ++c) {
            Stream rng(gen_key, 1 + c);
            const double* a = &genes[parents[2 * c] * m];
            const double* b = &genes[parents[2 * c + 1] * m];
            double* c1 = &next[(2 * c) * m];
            double* c2 = &next[(2 * c + 1) * m];
            for (std::size_t k = 0; k < m; ++k) {
                const double w = rng.uniform(config.crossover_weight_lo, config.crossover_weight_hi);
                c1[k] = w * a[k] + (1.0 - w) * b[k];
                c2[k] = (1.0 - w) * a[k] + w * b[k];
            }
            for (double* child : {c1, c2})
                for (std::size_t k = 0; k < m; ++k)
                    if (rng.uniform() < config.mutation_prob)
                        child[k] = mutate_clamped(child[k], config.mutation_scale * rng.normal());
        }
        evaluate(next, next_fit);

        // elitism: the best parents replace the worst offspring
        if (config.elitism_count > 0) {
            const auto elite = detail::rank_desc(fit);
            const auto order = detail::rank_desc(next_fit);
            for (int e = 0; e < config.elitism_count; ++e) {
                const std::size_t src = elite[static_cast<std::size_t>(e)];
                const std::size_t dst = order[pop - 1 - static_cast<std::size_t>(e)];
                std::copy_n(&genes[src * m], m, &next[dst * m]);
                next_fit[dst] = fit[src];
            }
        }

        genes.swap(next);
        fit.swap(next_fit);

        const std::size_t gen_best = detail::rank_desc(fit).front();
        if (fit[gen_best] > run.best_fitness) {
            run.best_fitness = fit[gen_best];
            std::copy_n(&genes[gen_best * m], m, best_genes.begin());
        }
        run.trace.push_back({g, run.best_fitness, fit[gen_best]});
    }

    run.best_code = PhaseCode(std::move(best_genes));
    // canonicalization maps a clamped 2*pi to 0, the same phasor
    run.best_fitness = eval.min_value(run.best_code.phases());
    return run;
}

/// Independent restarts over a sweep of population sizes; each run's seed is
/// derive_seed(seed, population size, run index).
struct MultiStartConfig {
    std::vector<int> population_sizes{1000};
    int runs = 1;
    GaConfig base;
};

struct MultiStartResult {
    std::vector<GaRun> runs;
    std::size_t best_index = 0;

    const GaRun& best() const { return runs.at(best_index); }
};

inline std::uint64_t multistart_seed(std::uint64_t seed, int population_size, int run) {
    return derive_seed(seed, static_cast<std::uint64_t>(population_size), static_cast<std::uint64_t>(run));
}

template <typename Progress>
MultiStartResult run_multistart(const MultiStartConfig& ms, const ArrayGeometry& geom, int threads, Progress&& progress) {
    if (ms.runs < 1) throw InvalidInput("runs must be >= 1");
    if (ms.population_sizes.empty()) throw InvalidInput("population size sweep is empty");
    MultiStartResult out;
    for (int p : ms.population_sizes) {
        for (int r = 0; r < ms.runs; ++r) {
            GaConfig c = ms.base;
            c.population_size = p;
            c.seed = multistart_seed(ms.base.seed, p, r);
            out.runs.push_back(run_cga(c, geom, threads));
            const auto& last = out.runs.back();
            if (last.best_fitness > out.runs[out.best_index].best_fitness) out.best_index = out.runs.size() - 1;
            progress(p, r, last);
        }
    }
    return out;
}

inline MultiStartResult run_multistart(const MultiStartConfig& ms, const ArrayGeometry& geom, int threads = 1) {
    return run_multistart(ms, geom, threads, [](int, int, const GaRun&) {});
}

}  // namespace ris
