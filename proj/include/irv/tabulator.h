#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <vector>

#include "irv/domain.h"

namespace irv {

using TallyMap = std::map<Ranking, long long>;

enum class TiePolicy { EliminateAll, UniformRandom, Error };

struct RoundRecord {
    std::vector<int> remaining;
    std::map<int, long long> top_totals;
    long long exhausted = 0;
    std::vector<int> eliminated;  // one candidate, several on EliminateAll ties
};

struct IrvResult {
    std::vector<RoundRecord> rounds;
    std::optional<int> winner;  // empty when a final tie eliminated everyone
};

// Each ballot credited to its highest-ranked remaining candidate; ballots
// with none left are added to *exhausted when given.
std::map<int, long long> first_place_totals(const TallyMap& t,
                                            const std::vector<int>& remaining,
                                            long long* exhausted = nullptr);

// Rounds run to completion: the candidate with the fewest first-place votes
// is eliminated each round and the last round records the final candidate
// standing, so N candidates take N rounds when no tie occurs. Exact ties
// follow the policy: EliminateAll removes the whole tied set, UniformRandom
// picks one tied candidate from the seed (the seed is consumed only when a
// tie actually occurs), Error throws TieError naming the tied set.
IrvResult run_irv(const TallyMap& t, const std::vector<int>& candidates,
                  TiePolicy policy = TiePolicy::UniformRandom, uint64_t seed = 0);

// A ballot ranking all N candidates behaves identically to one that leaves
// the final choice blank, so length-N rankings fold into their length-(N-1)
// prefix. The output contains no length-N key.
TallyMap collapse_full_rankings(const TallyMap& t, int n_candidates);

// Tally files: "ranking,count" lines, optional "ranking,count" header.
TallyMap parse_tally(std::istream& in, const Election& e);
void write_tally(std::ostream& out, const TallyMap& t, const Election& e);

}  // namespace irv
