#pragma once

// main()-style test support: CHECK macros counting failures plus shared
// random generators. Each test binary prints its failures and returns the
// count from main.

#include <cmath>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "irv/dist.h"
#include "irv/domain.h"
#include "irv/engine.h"
#include "irv/rng.h"
#include "irv/tabulator.h"

inline int g_fail = 0;

#define CHECK(cond)                                                     \
    do {                                                                \
        if (!(cond)) {                                                  \
            std::printf("FAIL %s:%d: %s\n", __FILE__, __LINE__, #cond); \
            std::fflush(stdout);                                        \
            ++g_fail;                                                   \
        }                                                               \
    } while (0)

#define CHECK_NEAR(a, b, tol)                                                              \
    do {                                                                                   \
        double va_ = (a), vb_ = (b);                                                       \
        if (!(std::abs(va_ - vb_) <= (tol))) {                                             \
            std::printf("FAIL %s:%d: %s = %.12g vs %s = %.12g (tol %g)\n", __FILE__,       \
                        __LINE__, #a, va_, #b, vb_, static_cast<double>(tol));             \
            std::fflush(stdout);                                                           \
            ++g_fail;                                                                      \
        }                                                                                  \
    } while (0)

#define CHECK_THROWS(expr, ExType)                                                   \
    do {                                                                             \
        bool caught_ = false;                                                        \
        try {                                                                        \
            expr;                                                                    \
        } catch (const ExType&) {                                                    \
            caught_ = true;                                                          \
        } catch (...) {                                                              \
        }                                                                            \
        if (!caught_) {                                                              \
            std::printf("FAIL %s:%d: %s did not throw %s\n", __FILE__, __LINE__,     \
                        #expr, #ExType);                                             \
            std::fflush(stdout);                                                     \
            ++g_fail;                                                                \
        }                                                                            \
    } while (0)

#ifndef IRV_DATA_DIR
#define IRV_DATA_DIR "data"
#endif

inline std::string data_path(const std::string& name) {
    return std::string(IRV_DATA_DIR) + "/" + name;
}

namespace testutil {

inline irv::DiscreteDist random_dist(irv::Rng& rng, int bucket_size, int len) {
    irv::DiscreteDist f;
    f.bucket_size = bucket_size;
    f.mass.resize(len);
    for (double& p : f.mass) p = rng.uniform01() + 1e-3;
    irv::renormalize(f);
    return f;
}

// Short random supports scattered over `spread` buckets; zeros are common so
// trimming and point-mass paths get exercised.
inline irv::DiscreteDist random_sparse_dist(irv::Rng& rng, int bucket_size, int support,
                                            int spread) {
    irv::DiscreteDist f;
    f.bucket_size = bucket_size;
    f.mass.assign(spread, 0.0);
    for (int s = 0; s < support; ++s) f.mass[rng.uniform_int(spread)] += rng.uniform01() + 0.1;
    irv::renormalize(f);
    irv::trim_trailing_zeros(f);
    return f;
}

// Model over every collapsed ranking, sized so each first-round total spans
// roughly target_buckets buckets.
inline irv::ElectionModel random_model(irv::Rng& rng, int n, int target_buckets) {
    irv::ElectionModel m;
    for (int c = 0; c < n; ++c) m.candidates.push_back(c);
    std::vector<irv::Ranking> keys = irv::enumerate_rankings(m.candidates, n - 1);
    int per_first = 0;
    for (const irv::Ranking& r : keys)
        if (!r.empty() && r.entries.front() == 0) ++per_first;
    int len = std::max(2, target_buckets / std::max(1, per_first));
    for (const irv::Ranking& r : keys)
        m.dists[r] = random_dist(rng, 1, r.empty() ? 3 : len);
    return m;
}

// Random model whose joint state space stays enumerable: small supports,
// heavy overlap, so ties actually occur.
inline irv::ElectionModel random_sparse_model(irv::Rng& rng, int n, int max_support,
                                              int spread) {
    irv::ElectionModel m;
    for (int c = 0; c < n; ++c) m.candidates.push_back(c);
    std::vector<irv::Ranking> keys = irv::enumerate_rankings(m.candidates, n - 1);
    for (const irv::Ranking& r : keys) {
        if (r.empty()) continue;
        m.dists[r] = random_sparse_dist(rng, 1, 1 + rng.uniform_int(max_support), spread);
    }
    return m;
}

// Three-candidate model whose per-candidate group totals occupy widely
// separated bands in every round, so the elimination order is certain and
// every win probability is exactly 0 or 1. Each group holds three contiguous
// supports of width 2..4 near its band base; transfers move at most ~15
// buckets of mass, far less than the 170+ bucket gaps between bands.
inline irv::ElectionModel banded_model(irv::Rng& rng, std::vector<int>* elim_order = nullptr,
                                       int* winner = nullptr) {
    std::vector<int> perm = {0, 1, 2};
    for (int i = 2; i > 0; --i) std::swap(perm[i], perm[rng.uniform_int(i + 1)]);
    int base[3];
    base[perm[0]] = 0;
    base[perm[1]] = 200;
    base[perm[2]] = 600;

    irv::ElectionModel m;
    m.candidates = {0, 1, 2};
    m.bucket_size = 1;
    for (int c = 0; c < 3; ++c) {
        std::vector<irv::Ranking> group = {irv::Ranking({c})};
        for (int o = 0; o < 3; ++o)
            if (o != c) group.push_back(irv::Ranking({c, o}));
        bool carries_base = true;
        for (const irv::Ranking& r : group) {
            int start = (carries_base ? base[c] : 0) + rng.uniform_int(3);
            carries_base = false;
            int width = 2 + rng.uniform_int(3);
            irv::DiscreteDist f;
            f.bucket_size = 1;
            f.mass.assign(start + width, 0.0);
            for (int k = 0; k < width; ++k) f.mass[start + k] = rng.uniform01() + 0.1;
            irv::renormalize(f);
            m.dists[r] = std::move(f);
        }
    }
    if (elim_order) *elim_order = {perm[0], perm[1]};
    if (winner) *winner = perm[2];
    return m;
}

inline irv::TallyMap random_tally(irv::Rng& rng, int n, int max_count) {
    std::vector<int> cands;
    for (int c = 0; c < n; ++c) cands.push_back(c);
    irv::TallyMap t;
    for (const irv::Ranking& r : irv::enumerate_rankings(cands))
        if (rng.uniform01() < 0.7) t[r] = rng.uniform_int(max_count + 1);
    return t;
}

}  // namespace testutil
