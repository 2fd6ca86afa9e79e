#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "irv/domain.h"
#include "irv/engine.h"
#include "irv/models.h"
#include "irv/tabulator.h"

namespace irv {

struct BallotRow {
    std::string ballot_id;
    std::string precinct_portion;
    Ranking ranking;
};

struct CastVoteRecord {
    std::vector<BallotRow> ballots;
    int rank_columns = 0;  // K from the header

    // Distinct precinct portions in first-appearance order.
    std::vector<std::string> precincts() const;
};

// Header "ballot_id,precinct_portion,rank1,...,rankK". Reading marks in rank
// order: a blank cell or an overvote (several codes in one cell) ends the
// ranking, a repeated candidate is skipped, an unknown code is a parse error
// naming the row. Full-length rankings are kept as written; folding happens
// at tally time.
CastVoteRecord parse_cvr(std::istream& in, const Election& e);
void write_cvr(std::ostream& out, const CastVoteRecord& cvr, const Election& e);

// Counts whole precincts in the given order until the counted ballots first
// reach `fraction` of the total. Returns the folded tally and the fraction
// actually counted. Precincts are never split.
std::pair<TallyMap, double> tally_prefix(const CastVoteRecord& cvr,
                                         const std::vector<std::string>& order,
                                         double fraction, int n_candidates);

struct ReplayScenario {
    std::vector<std::string> precinct_order;
    double step = 0.005;
    uint64_t seed = 0;
};

// Seeded shuffle of the CVR's precinct portions (Fisher-Yates, so the order
// depends only on the seed).
ReplayScenario make_scenario(const CastVoteRecord& cvr, double step, uint64_t seed);

struct ReplayPoint {
    double fraction = 0.0;        // nominal grid value
    double fraction_exact = 0.0;  // whole-precinct fraction actually counted
    WinVector win;
};

// One prediction per grid fraction {step, 2*step, ..., 1}: partial tally,
// extrapolation model, engine. The last point skips the model and reports the
// tabulator's verdict as a 0/1 vector: every ballot is known, and bucketing
// totals could only blur an already decided outcome. Points are independent
// and may run in parallel; output order is by fraction either way.
std::vector<ReplayPoint> replay(const CastVoteRecord& cvr, const Election& e,
                                const ReplayScenario& sc, const PartialCountParams& params);

// CSV series "fraction,<code>,..." with one row per grid point. Ternary mode
// (3 candidates only) writes the header as "fraction,p<code>,..." for direct
// use as simplex coordinates.
void write_replay_series(std::ostream& out, const std::vector<ReplayPoint>& series,
                         const Election& e, bool ternary);

}  // namespace irv
