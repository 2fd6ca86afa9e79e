#pragma once

#include <cstdint>
#include <string>

#include "irv/engine.h"

namespace irv {

struct OracleReport {
    WinVector win_probs;
    long long samples_or_states = 0;
    std::vector<double> std_error;        // per candidate, Monte Carlo only
    double max_abs_gap_vs_engine = -1.0;  // negative until a comparison is attached
    uint64_t seed = 0;
    std::string method;  // "exhaustive" or "monte-carlo"
};

// Number of joint bucket assignments (product of support sizes), or -1 once
// the product exceeds cap. The empty ranking is excluded: its total never
// reaches any round, so it multiplies the state space for nothing.
long long joint_state_count(const ElectionModel& m, long long cap);

// Enumerates every joint bucket assignment, weights it by the product of its
// probabilities (rankings are independent), and tabulates on bucket lower
// edges. An exact tie for the minimum splits the weight 1/#tied per branch,
// so the result is the exact win probability of the sampling process.
// Refuses with ValidationError when the state count exceeds max_states.
// Enumeration is chunked; chunks combine in index order, so the result is
// bitwise identical for any thread count.
OracleReport exhaustive_win_probs(const ElectionModel& m, long long max_states = 100000000);

// Single flat loop over all states. Reference for the chunked kernel.
OracleReport exhaustive_win_probs_serial(const ElectionModel& m, long long max_states = 100000000);

// n independent joint samples, ties broken uniformly at random per sample.
// Sampling is chunked with seeds derived per chunk, so output depends only on
// (n, seed), not on the thread count.
OracleReport mc_win_probs(const ElectionModel& m, long long n, uint64_t seed);

// Fills max_abs_gap_vs_engine with the largest per-candidate difference.
void attach_engine_gap(OracleReport& r, const WinVector& engine);

std::string report_to_text(const OracleReport& r, const Election& e, const WinVector* engine = nullptr);
std::string report_to_json(const OracleReport& r, const Election& e, const WinVector* engine = nullptr);

}  // namespace irv
