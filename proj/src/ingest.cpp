#include "irv/ingest.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <string>

#include "irv/errors.h"
#include "irv/rng.h"
#include "text_util.h"

namespace irv {

std::vector<std::string> CastVoteRecord::precincts() const {
    std::vector<std::string> out;
    std::set<std::string> seen;
    for (const BallotRow& b : ballots)
        if (seen.insert(b.precinct_portion).second) out.push_back(b.precinct_portion);
    return out;
}

CastVoteRecord parse_cvr(std::istream& in, const Election& e) {
    CastVoteRecord cvr;
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty cast vote record");
    auto header = text::split_csv(line);
    if (header.size() < 3 || !text::iequals(text::trim(header[0]), "ballot_id") ||
        !text::iequals(text::trim(header[1]), "precinct_portion"))
        throw ParseError("expected header 'ballot_id,precinct_portion,rank1,...'");
    cvr.rank_columns = static_cast<int>(header.size()) - 2;

    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        auto cells = text::split_csv(line);
        if (cells.size() != header.size())
            throw ParseError("row " + std::to_string(line_no) + ": expected " +
                             std::to_string(header.size()) + " cells");
        BallotRow row;
        row.ballot_id = text::trim(cells[0]);
        row.precinct_portion = text::trim(cells[1]);
        std::vector<bool> used(e.size(), false);
        for (size_t j = 2; j < cells.size(); ++j) {
            std::string cell = text::trim(cells[j]);
            if (cell.empty()) break;
            auto idx = e.index_of(cell);
            if (idx) {
                if (used[*idx]) continue;  // repeated mark, skip and read on
                used[*idx] = true;
                row.ranking.entries.push_back(*idx);
                continue;
            }
            try {
                parse_ranking(cell, e);
            } catch (const ParseError&) {
                throw ParseError("row " + std::to_string(line_no) + ": unrecognized cell '" +
                                 cell + "'");
            }
            break;  // several codes in one cell: overvote ends the ranking
        }
        cvr.ballots.push_back(std::move(row));
    }
    return cvr;
}

void write_cvr(std::ostream& out, const CastVoteRecord& cvr, const Election& e) {
    out << "ballot_id,precinct_portion";
    for (int j = 1; j <= cvr.rank_columns; ++j) out << ",rank" << j;
    out << "\n";
    for (const BallotRow& b : cvr.ballots) {
        out << b.ballot_id << ',' << b.precinct_portion;
        for (int j = 0; j < cvr.rank_columns; ++j)
            out << ',' << (j < b.ranking.length() ? e.code(b.ranking.entries[j]) : "");
        out << "\n";
    }
}

std::pair<TallyMap, double> tally_prefix(const CastVoteRecord& cvr,
                                         const std::vector<std::string>& order,
                                         double fraction, int n_candidates) {
    if (fraction < 0.0 || fraction > 1.0)
        throw ValidationError("fraction must be in [0, 1]");
    if (cvr.ballots.empty()) throw ValidationError("cast vote record has no ballots");

    std::map<std::string, std::vector<const BallotRow*>> by_precinct;
    for (const BallotRow& b : cvr.ballots) by_precinct[b.precinct_portion].push_back(&b);

    double total = static_cast<double>(cvr.ballots.size());
    double target = fraction * total;
    double counted = 0.0;
    TallyMap tally;
    for (const std::string& p : order) {
        if (counted >= target - 1e-9) break;
        auto it = by_precinct.find(p);
        if (it == by_precinct.end())
            throw ValidationError("unknown precinct portion '" + p + "'");
        for (const BallotRow* b : it->second) ++tally[b->ranking];
        counted += static_cast<double>(it->second.size());
    }
    return {collapse_full_rankings(tally, n_candidates), counted / total};
}

ReplayScenario make_scenario(const CastVoteRecord& cvr, double step, uint64_t seed) {
    ReplayScenario sc;
    sc.precinct_order = cvr.precincts();
    sc.step = step;
    sc.seed = seed;
    Rng rng(seed);
    for (size_t i = sc.precinct_order.size(); i > 1; --i)
        std::swap(sc.precinct_order[i - 1],
                  sc.precinct_order[rng.uniform_int(static_cast<int>(i))]);
    return sc;
}

std::vector<ReplayPoint> replay(const CastVoteRecord& cvr, const Election& e,
                                const ReplayScenario& sc, const PartialCountParams& params) {
    if (sc.step <= 0.0 || sc.step > 1.0) throw ValidationError("step must be in (0, 1]");
    if (cvr.ballots.empty()) throw ValidationError("cast vote record has no ballots");
    {
        std::set<std::string> in_order(sc.precinct_order.begin(), sc.precinct_order.end());
        if (in_order.size() != sc.precinct_order.size())
            throw ValidationError("duplicate precinct portion in replay order");
        for (const std::string& p : cvr.precincts())
            if (!in_order.count(p))
                throw ValidationError("replay order is missing precinct portion '" + p + "'");
        if (in_order.size() != cvr.precincts().size())
            throw ValidationError("replay order names an unknown precinct portion");
    }

    std::vector<double> grid;
    for (int i = 1; i * sc.step < 1.0 - 1e-9; ++i) grid.push_back(i * sc.step);
    grid.push_back(1.0);

    int n_points = static_cast<int>(grid.size());
    std::vector<ReplayPoint> series(grid.size());
    std::vector<std::string> failures(grid.size());
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n_points; ++i) {
        try {
            auto [tally, exact] = tally_prefix(cvr, sc.precinct_order, grid[i], e.size());
            ReplayPoint pt;
            pt.fraction = grid[i];
            pt.fraction_exact = exact;
            if (i == n_points - 1) {
                // Every ballot is in: report the tabulator's verdict directly.
                IrvResult res = run_irv(tally, e.all_indices(), TiePolicy::UniformRandom, sc.seed);
                pt.win.assign(e.size(), 0.0);
                if (res.winner) pt.win[*res.winner] = 1.0;
            } else {
                PartialCountParams pp = params;
                pp.fraction_counted = exact;
                ElectionModel m = partial_count_model(tally, e.all_indices(), pp);
                pt.win = win_vector_memoized(m).first;
            }
            series[static_cast<size_t>(i)] = std::move(pt);
        } catch (const std::exception& ex) {
            failures[static_cast<size_t>(i)] = ex.what();
        }
    }
    for (const std::string& msg : failures)
        if (!msg.empty()) throw NumericalError("replay point failed: " + msg);
    return series;
}

void write_replay_series(std::ostream& out, const std::vector<ReplayPoint>& series,
                         const Election& e, bool ternary) {
    if (ternary && e.size() != 3)
        throw ValidationError("ternary output needs exactly three candidates");
    out << "fraction";
    for (int c = 0; c < e.size(); ++c) out << ',' << (ternary ? "p" : "") << e.code(c);
    out << "\n";
    char buf[64];
    for (const ReplayPoint& pt : series) {
        std::snprintf(buf, sizeof buf, "%g", pt.fraction);
        out << buf;
        for (int c = 0; c < e.size(); ++c) {
            std::snprintf(buf, sizeof buf, "%.17g", pt.win[static_cast<size_t>(c)]);
            out << ',' << buf;
        }
        out << "\n";
    }
}

}  // namespace irv
