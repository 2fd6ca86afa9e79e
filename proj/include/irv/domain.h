#pragma once

#include <optional>
#include <string>
#include <vector>

namespace irv {

// A candidate is identified by a small index that is stable within one
// election. Codes and display names matter only at the I/O boundary.
struct Candidate {
    int index = 0;
    std::string code;
    std::string display_name;
};

struct Election {
    std::vector<Candidate> candidates;  // indices 0..N-1, in order

    int size() const { return static_cast<int>(candidates.size()); }
    const std::string& code(int index) const { return candidates[index].code; }
    std::optional<int> index_of(const std::string& code) const;
    std::vector<int> all_indices() const;
};

// Builds an election from entries like "A" or "G=Groh" (code=display name).
// Codes must be distinct and non-empty.
Election make_election(const std::vector<std::string>& specs);

// An ordered list of distinct candidate indices. Length 0 is the empty
// ranking, i.e. an exhausted vote.
struct Ranking {
    std::vector<int> entries;

    Ranking() = default;
    explicit Ranking(std::vector<int> e) : entries(std::move(e)) {}

    int length() const { return static_cast<int>(entries.size()); }
    bool empty() const { return entries.empty(); }

    // Shorter rankings first, then lexicographic by index. This is the
    // enumeration order and the key order of every map in the library.
    bool operator<(const Ranking& o) const;
    bool operator==(const Ranking& o) const { return entries == o.entries; }
};

// First-listed candidate, or nothing for the empty ranking.
std::optional<int> first_choice(const Ranking& r);

// First entry whose bit is set in remaining_mask, or -1 if the ballot is
// exhausted for that candidate set.
int first_choice_among(const Ranking& r, unsigned remaining_mask);

// r with candidate a removed, order of the other entries preserved. a need
// not appear in r.
Ranking remove_candidate(const Ranking& r, int a);

// All orderings of distinct candidates drawn from cands, up to max_len
// entries (all lengths when max_len < 0), sorted by length then
// lexicographically. With no cap the count is N! * sum_{k=0..N} 1/k!:
// 2, 5, 16, 65, 326, 1957 for N = 1..6.
std::vector<Ranking> enumerate_rankings(const std::vector<int>& cands, int max_len = -1);

// Ranking text used by every file format: concatenated candidate codes
// ("GF"), empty string or "-" for the empty ranking. Parsing is greedy: the
// longest matching code wins when one code is a prefix of another.
std::string format_ranking(const Ranking& r, const Election& e);
Ranking parse_ranking(const std::string& text, const Election& e);

}  // namespace irv
