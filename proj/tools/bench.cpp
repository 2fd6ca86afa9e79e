// Timing comparison of the parallel kernels against their serial references:
// convolution (gather loop vs OpenMP, naive vs FFT), exhaustive enumeration
// (flat vs chunked), Monte Carlo sampling, and the two engine drivers. Every
// pair also cross-checks results so a speedup never hides a wrong answer.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "irv/dist.h"
#include "irv/domain.h"
#include "irv/engine.h"
#include "irv/oracle.h"
#include "irv/rng.h"

using namespace irv;

namespace {

template <class F>
double best_ms(F&& fn, int reps = 3) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        auto t0 = std::chrono::steady_clock::now();
        fn();
        auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return best;
}

DiscreteDist random_dist(Rng& rng, int bucket_size, int len) {
    DiscreteDist f;
    f.bucket_size = bucket_size;
    f.mass.resize(len);
    for (double& p : f.mass) p = rng.uniform01() + 1e-3;
    renormalize(f);
    return f;
}

// Model over every collapsed ranking, sized so each candidate's first-round
// total spans roughly `target_buckets` buckets.
ElectionModel random_model(Rng& rng, int n, int target_buckets) {
    ElectionModel m;
    for (int c = 0; c < n; ++c) m.candidates.push_back(c);
    std::vector<Ranking> keys = enumerate_rankings(m.candidates, n - 1);
    int per_first = 0;
    for (const Ranking& r : keys)
        if (!r.empty() && r.entries.front() == 0) ++per_first;
    int len = std::max(2, target_buckets / std::max(1, per_first));
    for (const Ranking& r : keys)
        m.dists[r] = random_dist(rng, 1, r.empty() ? 4 : len);
    return m;
}

// Small supports keep the joint state space enumerable.
ElectionModel random_sparse_model(Rng& rng, int n, int support, int spread) {
    ElectionModel m;
    for (int c = 0; c < n; ++c) m.candidates.push_back(c);
    std::vector<Ranking> keys = enumerate_rankings(m.candidates, n - 1);
    for (const Ranking& r : keys) {
        if (r.empty()) continue;
        DiscreteDist f;
        f.bucket_size = 1;
        f.mass.assign(spread, 0.0);
        for (int s = 0; s < support; ++s)
            f.mass[rng.uniform_int(spread)] += rng.uniform01() + 0.1;
        renormalize(f);
        trim_trailing_zeros(f);
        m.dists[r] = std::move(f);
    }
    return m;
}

double max_gap(const std::vector<double>& a, const std::vector<double>& b) {
    double g = 0.0;
    for (size_t i = 0; i < a.size() && i < b.size(); ++i)
        g = std::max(g, std::abs(a[i] - b[i]));
    return g;
}

void row(const std::string& name, double serial_ms, double parallel_ms, double gap) {
    std::printf("%-34s %10.2f %10.2f %8.2fx   %.3g\n", name.c_str(), serial_ms, parallel_ms,
                serial_ms / parallel_ms, gap);
}

}  // namespace

int main() {
    int threads = 1;
#ifdef _OPENMP
    threads = omp_get_max_threads();
#endif
    std::printf("threads: %d\n\n", threads);
    std::printf("%-34s %10s %10s %9s   %s\n", "kernel", "serial ms", "par ms", "speedup",
                "max gap");

    Rng rng(20240817);

    {
        DiscreteDist f = random_dist(rng, 1, 1500);
        DiscreteDist g = random_dist(rng, 1, 1500);
        DiscreteDist a, b;
        double s = best_ms([&] { a = convolve_naive_serial(f, g); });
        double p = best_ms([&] { b = convolve_naive(f, g); });
        row("convolve 1500x1500 naive", s, p, max_gap(a.mass, b.mass));
    }

    for (int len : {256, 1024, 4096}) {
        DiscreteDist f = random_dist(rng, 1, len);
        DiscreteDist g = random_dist(rng, 1, len);
        DiscreteDist a, b;
        double s = best_ms([&] { a = convolve_naive(f, g); });
        double p = best_ms([&] { b = convolve_fft(f, g); });
        row("convolve " + std::to_string(len) + "x" + std::to_string(len) + " naive vs fft", s, p,
            max_gap(a.mass, b.mass));
    }

    {
        // Four buckets of support per ranking gives 4^9 = 262144 joint states.
        ElectionModel m;
        for (int c = 0; c < 3; ++c) m.candidates.push_back(c);
        for (const Ranking& r : enumerate_rankings(m.candidates, 2))
            if (!r.empty()) m.dists[r] = random_dist(rng, 1, 4);
        OracleReport a, b;
        double s = best_ms([&] { a = exhaustive_win_probs_serial(m); });
        double p = best_ms([&] { b = exhaustive_win_probs(m); });
        row("exhaustive " + std::to_string(a.samples_or_states) + " states", s, p,
            max_gap(a.win_probs, b.win_probs));
    }

    {
        ElectionModel m = random_sparse_model(rng, 3, 3, 60);
        OracleReport r;
        double p = best_ms([&] { r = mc_win_probs(m, 200000, 7); });
        std::printf("%-34s %10s %10.2f\n", "monte carlo 200k samples", "-", p);
    }

    for (int n : {3, 4}) {
        ElectionModel m = random_model(rng, n, 1500);
        std::pair<WinVector, EliminationTree> a, b;
        double s = best_ms([&] { a = win_vector(m); }, n == 4 ? 1 : 3);
        double p = best_ms([&] { b = win_vector_memoized(m); }, n == 4 ? 1 : 3);
        row("engine n=" + std::to_string(n) + " tree vs memoized", s, p,
            max_gap(a.first, b.first));
    }

    return 0;
}
