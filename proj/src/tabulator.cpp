#include "irv/tabulator.h"

#include <algorithm>
#include <istream>
#include <ostream>
#include <string>

#include "irv/errors.h"
#include "irv/rng.h"
#include "text_util.h"

namespace irv {

std::map<int, long long> first_place_totals(const TallyMap& t, const std::vector<int>& remaining,
                                            long long* exhausted) {
    if (remaining.empty()) throw ValidationError("first_place_totals: no candidates remaining");
    unsigned mask = 0;
    std::map<int, long long> totals;
    for (int c : remaining) {
        mask |= 1u << c;
        totals[c] = 0;
    }
    long long exh = 0;
    for (const auto& [ranking, count] : t) {
        int top = first_choice_among(ranking, mask);
        if (top < 0)
            exh += count;
        else
            totals[top] += count;
    }
    if (exhausted) *exhausted = exh;
    return totals;
}

IrvResult run_irv(const TallyMap& t, const std::vector<int>& candidates, TiePolicy policy,
                  uint64_t seed) {
    if (candidates.empty()) throw ValidationError("run_irv: no candidates");
    for (const auto& [ranking, count] : t)
        if (count < 0) throw ValidationError("run_irv: negative vote count");

    IrvResult res;
    std::vector<int> remaining = candidates;
    std::sort(remaining.begin(), remaining.end());
    Rng rng(seed);

    while (!remaining.empty()) {
        RoundRecord round;
        round.remaining = remaining;
        round.top_totals = first_place_totals(t, remaining, &round.exhausted);

        if (remaining.size() == 1) {
            res.winner = remaining.front();
            res.rounds.push_back(std::move(round));
            break;
        }

        long long min_total = round.top_totals.begin()->second;
        for (const auto& [c, total] : round.top_totals) min_total = std::min(min_total, total);
        std::vector<int> tied;
        for (const auto& [c, total] : round.top_totals)
            if (total == min_total) tied.push_back(c);

        if (tied.size() == 1) {
            round.eliminated = tied;
        } else {
            switch (policy) {
                case TiePolicy::EliminateAll:
                    round.eliminated = tied;
                    break;
                case TiePolicy::UniformRandom:
                    round.eliminated.push_back(tied[rng.uniform_int(static_cast<int>(tied.size()))]);
                    break;
                case TiePolicy::Error: {
                    std::string msg = "tie for elimination between candidates";
                    for (int c : tied) msg += " " + std::to_string(c);
                    throw TieError(msg, tied);
                }
            }
        }

        for (int gone : round.eliminated)
            remaining.erase(std::remove(remaining.begin(), remaining.end(), gone), remaining.end());
        res.rounds.push_back(std::move(round));
        // EliminateAll can drain the field entirely; then there is no winner.
    }
    return res;
}

TallyMap collapse_full_rankings(const TallyMap& t, int n_candidates) {
    TallyMap out;
    for (const auto& [ranking, count] : t) {
        if (ranking.length() == n_candidates && n_candidates > 0) {
            Ranking prefix = ranking;
            prefix.entries.pop_back();
            out[prefix] += count;
        } else {
            out[ranking] += count;
        }
    }
    return out;
}

TallyMap parse_tally(std::istream& in, const Election& e) {
    TallyMap out;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        auto cells = text::split_csv(line);
        if (cells.size() != 2)
            throw ParseError("line " + std::to_string(line_no) + ": expected 'ranking,count'");
        if (line_no == 1 && text::iequals(cells[0], "ranking")) continue;
        long long count = text::parse_ll(cells[1], "line " + std::to_string(line_no));
        if (count < 0)
            throw ValidationError("line " + std::to_string(line_no) + ": negative count");
        out[parse_ranking(cells[0], e)] += count;
    }
    return out;
}

void write_tally(std::ostream& out, const TallyMap& t, const Election& e) {
    out << "ranking,count\n";
    for (const auto& [ranking, count] : t)
        out << format_ranking(ranking, e) << ',' << count << '\n';
}

}  // namespace irv
