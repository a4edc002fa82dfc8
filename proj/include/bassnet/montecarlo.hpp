#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "bassnet/errors.hpp"
#include "bassnet/io.hpp"
#include "bassnet/network.hpp"
#include "bassnet/rng.hpp"

namespace bassnet {

// Monte Carlo simulation of the adoption process.
//
// Two exact-in-distribution single-run schemes:
//  * event-driven: stochastic simulation algorithm — draw the waiting time
//    from the total rate, then select the adopter proportionally to its
//    rate (scan in ascending node order);
//  * discrete: synchronous dt-steps where node j consults the dedicated
//    uniform u01(step * M + j - 1); the counter layout couples runs across
//    equal-size networks (common random numbers), preserving pathwise
//    monotonicity under dominance.
//
// estimate() aggregates replicates with integer-exact accumulators
// (per-replicate grid histograms / adopter counts summed in int64), so the
// result is bit-identical for any --jobs value: replicate r always uses
// substream r, and integer merges commute.

struct SimScheme {
    enum class Kind { event, discrete };
    Kind kind = Kind::event;
    double dt = 0.0; // discrete only

    static SimScheme event() { return {}; }
    static SimScheme discrete(double dt) { return {Kind::discrete, dt}; }
    std::string str() const {
        return kind == Kind::event ? "event" : "dt:" + format_double(dt);
    }
};

struct Target {
    enum class Kind { level, node, omega, pair };
    Kind kind = Kind::level;
    std::vector<int> nodes; // node: {j}; pair: {i, j}; omega: the set

    static Target level() { return {Kind::level, {}}; }
    static Target node(int j) { return {Kind::node, {j}}; }
    static Target omega(std::vector<int> o) { return {Kind::omega, std::move(o)}; }
    static Target pair(int i, int j) { return {Kind::pair, {i, j}}; }
};

struct Estimate {
    std::vector<double> times;
    std::vector<double> mean;
    std::vector<double> stderr_;
    long n_runs = 0;
    std::uint64_t seed = 0;
    std::string scheme;
};

// Adoption times of one event-driven run; entries are +infinity for nodes
// that have not adopted by tmax.
inline std::vector<double> simulate_event(const Network& net, double tmax,
                                          Xoshiro256PP& rng) {
    require(tmax >= 0.0 && std::isfinite(tmax), Errc::bad_grid,
            "tmax must be finite and >= 0");
    const int M = net.M();
    std::vector<double> tau(M, std::numeric_limits<double>::infinity());
    std::vector<double> lam(net.p_vector());
    std::vector<int> alive(M);
    for (int j = 0; j < M; ++j) alive[j] = j;
    double t = 0.0;
    while (!alive.empty()) {
        double total = 0.0;
        for (int j : alive) total += lam[j];
        if (total <= 0.0) break;
        t += rng.exp1() / total;
        if (t > tmax) break;
        const double u = rng.u01() * total;
        double cum = 0.0;
        std::size_t pick = 0;
        // Rounding may leave u >= sum of rates; then the last positive-rate
        // node (the final value of pick) wins.
        for (std::size_t i = 0; i < alive.size(); ++i) {
            const double r = lam[alive[i]];
            if (r <= 0.0) continue;
            cum += r;
            pick = i;
            if (u < cum) break;
        }
        const int j = alive[pick];
        tau[j] = t;
        alive.erase(alive.begin() + std::ptrdiff_t(pick));
        for (const auto& [k, rate] : net.out(j + 1))
            if (tau[k - 1] == std::numeric_limits<double>::infinity())
                lam[k - 1] += rate;
    }
    return tau;
}

// Adoption times of one synchronous run with step dt; node j adopting in
// step n (rates frozen at the step start) is recorded at (n + 1) * dt.
inline std::vector<double> simulate_discrete(const Network& net, double dt,
                                             double tmax,
                                             const CounterStream& stream) {
    require(dt > 0.0 && std::isfinite(dt), Errc::step_too_large,
            "dt must be finite and > 0");
    require(dt * net.max_total_rate() < 1.0, Errc::step_too_large,
            "dt * max total rate must stay below 1");
    require(tmax >= 0.0 && std::isfinite(tmax), Errc::bad_grid,
            "tmax must be finite and >= 0");
    const int M = net.M();
    std::vector<double> tau(M, std::numeric_limits<double>::infinity());
    std::vector<double> lam(net.p_vector());
    std::vector<int> fresh;
    // The run covers ceil(tmax / dt) full steps; an adoption recorded past
    // tmax on the final step is simply never observed by grids ending at tmax.
    const std::uint64_t n_steps = std::uint64_t(std::ceil(tmax / dt));
    for (std::uint64_t n = 0; n < n_steps; ++n) {
        fresh.clear();
        for (int j = 0; j < M; ++j) {
            if (tau[j] != std::numeric_limits<double>::infinity()) continue;
            if (lam[j] <= 0.0) continue;
            const double w = stream.u01(n * std::uint64_t(M) + std::uint64_t(j));
            if (w < -std::expm1(-lam[j] * dt)) fresh.push_back(j);
        }
        const double t_adopt = double(n + 1) * dt;
        for (int j : fresh) {
            tau[j] = t_adopt;
            for (const auto& [k, rate] : net.out(j + 1))
                if (tau[k - 1] == std::numeric_limits<double>::infinity())
                    lam[k - 1] += rate;
        }
    }
    return tau;
}

namespace detail {

struct TargetAccum {
    std::vector<long long> hist; // indicator targets: histogram of grid index
    std::vector<long long> s1;   // level target: sum of adopter counts
    std::vector<long long> s2;   // level target: sum of squared counts
};

inline void accumulate_run(const std::vector<double>& tau,
                           const std::vector<Target>& targets,
                           const std::vector<double>& times,
                           std::vector<TargetAccum>& acc,
                           std::vector<int>& scratch) {
    const std::size_t G = times.size();
    for (std::size_t ti = 0; ti < targets.size(); ++ti) {
        const Target& tg = targets[ti];
        if (tg.kind == Target::Kind::level) {
            std::fill(scratch.begin(), scratch.end(), 0);
            for (double tj : tau) {
                if (tj == std::numeric_limits<double>::infinity()) continue;
                const std::size_t idx =
                    std::lower_bound(times.begin(), times.end(), tj) -
                    times.begin();
                if (idx < G) ++scratch[idx];
            }
            long long c = 0;
            for (std::size_t i = 0; i < G; ++i) {
                c += scratch[i];
                acc[ti].s1[i] += c;
                acc[ti].s2[i] += c * c;
            }
        } else {
            // node: first grid index with tau_j <= t_i;
            // omega/pair: first grid index with min_{j in set} tau_j <= t_i.
            double first = std::numeric_limits<double>::infinity();
            if (tg.kind == Target::Kind::node)
                first = tau[tg.nodes[0] - 1];
            else
                for (int j : tg.nodes) first = std::min(first, tau[j - 1]);
            const std::size_t idx =
                first == std::numeric_limits<double>::infinity()
                    ? G
                    : std::size_t(std::lower_bound(times.begin(), times.end(),
                                                   first) -
                                  times.begin());
            ++acc[ti].hist[std::min(idx, G)];
        }
    }
}

} // namespace detail

inline std::vector<Estimate> estimate(const Network& net,
                                      const std::vector<Target>& targets,
                                      const std::vector<double>& times,
                                      long n_runs, std::uint64_t seed,
                                      const SimScheme& scheme = {},
                                      int jobs = 1) {
    require(!targets.empty(), Errc::invalid_size, "no targets");
    require(n_runs >= 1, Errc::invalid_size, "n_runs must be >= 1");
    require(jobs >= 1, Errc::invalid_size, "jobs must be >= 1");
    require(!times.empty() && times.front() >= 0.0, Errc::bad_grid,
            "time grid must be nonempty with times[0] >= 0");
    for (std::size_t i = 1; i < times.size(); ++i)
        require(times[i] > times[i - 1], Errc::bad_grid,
                "time grid must be strictly ascending");
    for (const Target& tg : targets) {
        if (tg.kind == Target::Kind::node)
            require(tg.nodes.size() == 1, Errc::invalid_size, "node target");
        if (tg.kind == Target::Kind::pair) {
            require(tg.nodes.size() == 2 && tg.nodes[0] != tg.nodes[1],
                    Errc::bad_omega, "pair target needs two distinct nodes");
        }
        if (tg.kind == Target::Kind::omega)
            require(!tg.nodes.empty(), Errc::bad_omega, "Omega must be nonempty");
        for (int j : tg.nodes)
            require(j >= 1 && j <= net.M(), Errc::index_out_of_range,
                    "node index " + std::to_string(j));
    }
    if (scheme.kind == SimScheme::Kind::discrete) {
        require(scheme.dt > 0.0 && std::isfinite(scheme.dt),
                Errc::step_too_large, "dt must be finite and > 0");
        require(scheme.dt * net.max_total_rate() < 1.0, Errc::step_too_large,
                "dt * max total rate must stay below 1");
    }

    const std::size_t G = times.size();
    const double tmax = times.back();
    auto make_accum = [&] {
        std::vector<detail::TargetAccum> acc(targets.size());
        for (std::size_t ti = 0; ti < targets.size(); ++ti) {
            if (targets[ti].kind == Target::Kind::level) {
                acc[ti].s1.assign(G, 0);
                acc[ti].s2.assign(G, 0);
            } else {
                acc[ti].hist.assign(G + 1, 0);
            }
        }
        return acc;
    };

    // Replicates are processed in fixed blocks; replicate r always draws
    // from substream r, so the partition into blocks/threads cannot change
    // any trajectory, and integer merges commute.
    constexpr long block_size = 1024;
    const long n_blocks = (n_runs + block_size - 1) / block_size;
    std::atomic<long> next_block{0};
    std::vector<std::vector<detail::TargetAccum>> partials;
    partials.reserve(std::size_t(jobs));
    for (int w = 0; w < jobs; ++w) partials.push_back(make_accum());

    auto worker = [&](int w) {
        std::vector<int> scratch(G, 0);
        for (;;) {
            const long b = next_block.fetch_add(1);
            if (b >= n_blocks) return;
            const long r_end = std::min(n_runs, (b + 1) * block_size);
            for (long r = b * block_size; r < r_end; ++r) {
                std::vector<double> tau;
                if (scheme.kind == SimScheme::Kind::event) {
                    Xoshiro256PP rng(seed, std::uint64_t(r));
                    tau = simulate_event(net, tmax, rng);
                } else {
                    CounterStream cs(seed, std::uint64_t(r));
                    tau = simulate_discrete(net, scheme.dt, tmax, cs);
                }
                detail::accumulate_run(tau, targets, times, partials[std::size_t(w)],
                                       scratch);
            }
        }
    };
    if (jobs == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < jobs; ++w) pool.emplace_back(worker, w);
        for (auto& th : pool) th.join();
    }
    std::vector<detail::TargetAccum>& acc = partials[0];
    for (int w = 1; w < jobs; ++w)
        for (std::size_t ti = 0; ti < targets.size(); ++ti) {
            auto add = [](std::vector<long long>& a,
                          const std::vector<long long>& b) {
                for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
            };
            add(acc[ti].hist, partials[std::size_t(w)][ti].hist);
            add(acc[ti].s1, partials[std::size_t(w)][ti].s1);
            add(acc[ti].s2, partials[std::size_t(w)][ti].s2);
        }

    std::vector<Estimate> out(targets.size());
    const double n = double(n_runs);
    for (std::size_t ti = 0; ti < targets.size(); ++ti) {
        Estimate& e = out[ti];
        e.times = times;
        e.mean.resize(G);
        e.stderr_.resize(G);
        e.n_runs = n_runs;
        e.seed = seed;
        e.scheme = scheme.str();
        const Target& tg = targets[ti];
        if (tg.kind == Target::Kind::level) {
            const double M = double(net.M());
            for (std::size_t i = 0; i < G; ++i) {
                const double s1 = double(acc[ti].s1[i]) / M;
                const double s2 = double(acc[ti].s2[i]) / (M * M);
                e.mean[i] = s1 / n;
                const double var =
                    n_runs > 1 ? std::max(0.0, (s2 - s1 * s1 / n) / (n - 1.0))
                               : 0.0;
                e.stderr_[i] = std::sqrt(var / n);
            }
        } else {
            // prefix[i] = #replicates whose first-passage time <= t_i
            long long c = 0;
            const bool survival_like = tg.kind != Target::Kind::node;
            for (std::size_t i = 0; i < G; ++i) {
                c += acc[ti].hist[i];
                const double frac = double(c) / n;
                e.mean[i] = survival_like ? 1.0 - frac : frac;
                const double var =
                    n_runs > 1
                        ? double(c) * double(n_runs - c) / (n * (n - 1.0))
                        : 0.0;
                e.stderr_[i] = std::sqrt(var / n);
            }
        }
    }
    return out;
}

} // namespace bassnet
