#include "irv/oracle.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "irv/errors.h"
#include "irv/rng.h"
#include "json.hpp"

namespace irv {

namespace {

constexpr long long kChunk = 65536;

// One ranking's realizable totals. Entries with zero probability are dropped,
// so a single-entry support is certain and its contribution can be folded
// into fixed per-round totals ahead of time.
struct JointKey {
    std::vector<int> fc;      // first surviving choice per remaining mask, -1 exhausted
    std::vector<int> bucket;  // support, as bucket indices
    std::vector<double> prob;
};

struct JointSpace {
    int n = 0;
    unsigned full = 0;
    std::vector<int> cands;                          // position -> candidate index
    std::vector<JointKey> keys;                      // multi-bucket supports only
    std::vector<std::vector<long long>> fixed_tot;   // [mask][position]
    double base_weight = 1.0;
    long long total = 1;                             // -1 once past the cap
};

std::vector<int> fc_table(const Ranking& r_positions, int n) {
    std::vector<int> fc(1u << n, -1);
    for (unsigned mask = 1; mask < (1u << n); ++mask)
        fc[mask] = first_choice_among(r_positions, mask);
    return fc;
}

JointSpace build_space(const ElectionModel& m, long long cap) {
    validate_model(m);
    JointSpace js;
    js.n = static_cast<int>(m.candidates.size());
    if (js.n > 16) throw ValidationError("too many candidates to enumerate");
    js.cands = m.candidates;
    js.full = (1u << js.n) - 1;
    js.fixed_tot.assign(1u << js.n, std::vector<long long>(js.n, 0));

    std::vector<int> pos(32, -1);
    for (int i = 0; i < js.n; ++i) pos[m.candidates[i]] = i;

    for (const auto& [r, f] : m.dists) {
        if (r.empty()) continue;  // exhausted votes never reach a round
        Ranking rp;
        for (int c : r.entries) rp.entries.push_back(pos[c]);
        std::vector<int> bucket;
        std::vector<double> prob;
        for (int k = 0; k < f.buckets(); ++k)
            if (f.mass[k] > 0.0) {
                bucket.push_back(k);
                prob.push_back(f.mass[k]);
            }
        if (bucket.size() == 1) {
            js.base_weight *= prob.front();
            for (unsigned mask = 1; mask <= js.full; ++mask) {
                int c = first_choice_among(rp, mask);
                if (c >= 0) js.fixed_tot[mask][c] += bucket.front();
            }
            continue;
        }
        if (js.total > 0) {
            if (js.total > cap / static_cast<long long>(bucket.size()))
                js.total = -1;
            else
                js.total *= static_cast<long long>(bucket.size());
        }
        JointKey key;
        key.fc = fc_table(rp, js.n);
        key.bucket = std::move(bucket);
        key.prob = std::move(prob);
        js.keys.push_back(std::move(key));
    }
    return js;
}

// Runs the elimination process on one realized assignment. Exact ties for
// the minimum split the weight evenly across the tied branches.
void resolve(const JointSpace& js, const std::vector<int>& realized, unsigned mask,
             double weight, double* win) {
    while (std::popcount(mask) > 1) {
        std::vector<long long> tot = js.fixed_tot[mask];
        for (size_t k = 0; k < js.keys.size(); ++k) {
            int c = js.keys[k].fc[mask];
            if (c >= 0) tot[c] += js.keys[k].bucket[realized[k]];
        }
        long long lowest = -1;
        for (int i = 0; i < js.n; ++i)
            if ((mask >> i & 1u) && (lowest < 0 || tot[i] < lowest)) lowest = tot[i];
        std::vector<int> tied;
        for (int i = 0; i < js.n; ++i)
            if ((mask >> i & 1u) && tot[i] == lowest) tied.push_back(i);
        if (tied.size() == 1) {
            mask &= ~(1u << tied.front());
            continue;
        }
        double share = weight / static_cast<double>(tied.size());
        for (int t : tied) resolve(js, realized, mask & ~(1u << t), share, win);
        return;
    }
    win[std::countr_zero(mask)] += weight;
}

// Enumerates states [begin, end) in mixed radix, key 0 least significant,
// accumulating win weight into win[0..n).
void run_states(const JointSpace& js, long long begin, long long end, double* win) {
    size_t nk = js.keys.size();
    std::vector<int> digit(nk, 0);
    long long rest = begin;
    for (size_t k = 0; k < nk; ++k) {
        long long radix = static_cast<long long>(js.keys[k].bucket.size());
        digit[k] = static_cast<int>(rest % radix);
        rest /= radix;
    }
    for (long long s = begin; s < end; ++s) {
        double weight = js.base_weight;
        for (size_t k = 0; k < nk; ++k) weight *= js.keys[k].prob[digit[k]];
        resolve(js, digit, js.full, weight, win);
        for (size_t k = 0; k < nk; ++k) {
            if (++digit[k] < static_cast<int>(js.keys[k].bucket.size())) break;
            digit[k] = 0;
        }
    }
}

long long checked_total(const JointSpace& js, long long max_states) {
    if (js.total < 0 || js.total > max_states) {
        std::string have = js.total < 0 ? std::string("more than ") + std::to_string(max_states)
                                        : std::to_string(js.total);
        throw ValidationError("joint state space has " + have + " states, limit " +
                              std::to_string(max_states));
    }
    return js.total;
}

}  // namespace

long long joint_state_count(const ElectionModel& m, long long cap) {
    long long total = 1;
    for (const auto& [r, f] : m.dists) {
        if (r.empty()) continue;
        long long support = 0;
        for (double p : f.mass)
            if (p > 0.0) ++support;
        if (support == 0) return 0;
        if (total > cap / support) return -1;
        total *= support;
    }
    return total;
}

OracleReport exhaustive_win_probs(const ElectionModel& m, long long max_states) {
    JointSpace js = build_space(m, max_states);
    long long total = checked_total(js, max_states);
    long long n_chunks = (total + kChunk - 1) / kChunk;
    std::vector<std::vector<double>> chunk_win(static_cast<size_t>(n_chunks),
                                               std::vector<double>(js.n, 0.0));
#pragma omp parallel for schedule(static)
    for (long long c = 0; c < n_chunks; ++c)
        run_states(js, c * kChunk, std::min(total, (c + 1) * kChunk),
                   chunk_win[static_cast<size_t>(c)].data());

    OracleReport r;
    r.method = "exhaustive";
    r.samples_or_states = total;
    r.win_probs.assign(js.n, 0.0);
    for (long long c = 0; c < n_chunks; ++c)
        for (int i = 0; i < js.n; ++i) r.win_probs[i] += chunk_win[static_cast<size_t>(c)][i];
    return r;
}

OracleReport exhaustive_win_probs_serial(const ElectionModel& m, long long max_states) {
    JointSpace js = build_space(m, max_states);
    long long total = checked_total(js, max_states);
    OracleReport r;
    r.method = "exhaustive";
    r.samples_or_states = total;
    r.win_probs.assign(js.n, 0.0);
    run_states(js, 0, total, r.win_probs.data());
    return r;
}

OracleReport mc_win_probs(const ElectionModel& m, long long n, uint64_t seed) {
    if (n <= 0) throw ValidationError("sample count must be positive");
    JointSpace js = build_space(m, std::numeric_limits<long long>::max() / 2);
    long long n_chunks = (n + kChunk - 1) / kChunk;
    std::vector<std::vector<long long>> chunk_cnt(static_cast<size_t>(n_chunks),
                                                  std::vector<long long>(js.n, 0));
#pragma omp parallel for schedule(static)
    for (long long c = 0; c < n_chunks; ++c) {
        Rng rng(chunk_seed(seed, static_cast<uint64_t>(c)));
        long long lo = c * kChunk, hi = std::min(n, (c + 1) * kChunk);
        std::vector<int> realized(js.keys.size(), 0);
        std::vector<long long>& cnt = chunk_cnt[static_cast<size_t>(c)];
        for (long long s = lo; s < hi; ++s) {
            for (size_t k = 0; k < js.keys.size(); ++k) {
                const JointKey& key = js.keys[k];
                double u = rng.uniform01();
                double acc = 0.0;
                int pick = static_cast<int>(key.prob.size()) - 1;
                for (size_t j = 0; j < key.prob.size(); ++j) {
                    acc += key.prob[j];
                    if (u < acc) {
                        pick = static_cast<int>(j);
                        break;
                    }
                }
                realized[k] = pick;
            }
            unsigned mask = js.full;
            while (std::popcount(mask) > 1) {
                std::vector<long long> tot = js.fixed_tot[mask];
                for (size_t k = 0; k < js.keys.size(); ++k) {
                    int fc = js.keys[k].fc[mask];
                    if (fc >= 0) tot[fc] += js.keys[k].bucket[realized[k]];
                }
                long long lowest = -1;
                for (int i = 0; i < js.n; ++i)
                    if ((mask >> i & 1u) && (lowest < 0 || tot[i] < lowest)) lowest = tot[i];
                std::vector<int> tied;
                for (int i = 0; i < js.n; ++i)
                    if ((mask >> i & 1u) && tot[i] == lowest) tied.push_back(i);
                int gone = tied.size() == 1
                               ? tied.front()
                               : tied[rng.uniform_int(static_cast<int>(tied.size()))];
                mask &= ~(1u << gone);
            }
            ++cnt[std::countr_zero(mask)];
        }
    }

    OracleReport r;
    r.method = "monte-carlo";
    r.samples_or_states = n;
    r.seed = seed;
    std::vector<long long> cnt(js.n, 0);
    for (long long c = 0; c < n_chunks; ++c)
        for (int i = 0; i < js.n; ++i) cnt[i] += chunk_cnt[static_cast<size_t>(c)][i];
    r.win_probs.assign(js.n, 0.0);
    r.std_error.assign(js.n, 0.0);
    for (int i = 0; i < js.n; ++i) {
        double p = static_cast<double>(cnt[i]) / static_cast<double>(n);
        r.win_probs[i] = p;
        r.std_error[i] = std::sqrt(p * (1.0 - p) / static_cast<double>(n));
    }
    return r;
}

void attach_engine_gap(OracleReport& r, const WinVector& engine) {
    if (engine.size() != r.win_probs.size())
        throw ValidationError("win vector lengths differ");
    double gap = 0.0;
    for (size_t i = 0; i < engine.size(); ++i)
        gap = std::max(gap, std::abs(engine[i] - r.win_probs[i]));
    r.max_abs_gap_vs_engine = gap;
}

namespace {

std::string fmt_pct(double p) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f%%", p * 100.0);
    return buf;
}

}  // namespace

std::string report_to_text(const OracleReport& r, const Election& e, const WinVector* engine) {
    std::ostringstream out;
    if (r.method == "monte-carlo")
        out << "monte-carlo oracle, " << r.samples_or_states << " samples, seed " << r.seed << "\n";
    else
        out << "exhaustive oracle, " << r.samples_or_states << " states\n";
    for (size_t i = 0; i < r.win_probs.size(); ++i) {
        out << e.code(static_cast<int>(i)) << " " << fmt_pct(r.win_probs[i]);
        if (i < r.std_error.size() && r.method == "monte-carlo")
            out << " +- " << fmt_pct(r.std_error[i]);
        if (engine) out << "  (engine " << fmt_pct((*engine)[i]) << ")";
        out << "\n";
    }
    if (engine) {
        double gap = 0.0;
        for (size_t i = 0; i < r.win_probs.size(); ++i)
            gap = std::max(gap, std::abs((*engine)[i] - r.win_probs[i]));
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3g", gap);
        out << "max engine gap " << buf << "\n";
    }
    return out.str();
}

std::string report_to_json(const OracleReport& r, const Election& e, const WinVector* engine) {
    nlohmann::json doc;
    doc["method"] = r.method;
    doc[r.method == "monte-carlo" ? "samples" : "states"] = r.samples_or_states;
    if (r.method == "monte-carlo") doc["seed"] = r.seed;
    nlohmann::json win = nlohmann::json::object();
    for (size_t i = 0; i < r.win_probs.size(); ++i)
        win[e.code(static_cast<int>(i))] = r.win_probs[i];
    doc["win"] = win;
    if (!r.std_error.empty()) {
        nlohmann::json se = nlohmann::json::object();
        for (size_t i = 0; i < r.std_error.size(); ++i)
            se[e.code(static_cast<int>(i))] = r.std_error[i];
        doc["std_error"] = se;
    }
    if (engine) {
        nlohmann::json ew = nlohmann::json::object();
        double gap = 0.0;
        for (size_t i = 0; i < r.win_probs.size(); ++i) {
            ew[e.code(static_cast<int>(i))] = (*engine)[i];
            gap = std::max(gap, std::abs((*engine)[i] - r.win_probs[i]));
        }
        doc["engine"] = ew;
        doc["max_engine_gap"] = gap;
    }
    return doc.dump(2) + "\n";
}

}  // namespace irv
