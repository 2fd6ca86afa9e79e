#include "irv/cli.h"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "irv/dist.h"
#include "irv/domain.h"
#include "irv/engine.h"
#include "irv/errors.h"
#include "irv/ingest.h"
#include "irv/models.h"
#include "irv/oracle.h"
#include "irv/tabulator.h"
#include "json.hpp"
#include "text_util.h"

namespace irv {

namespace {

std::string slurp(const std::string& path) {
    if (path == "-") {
        std::ostringstream buf;
        buf << std::cin.rdbuf();
        return buf.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string fmt_pct(double p) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f%%", p * 100.0);
    return buf;
}

TiePolicy parse_policy(const std::string& s) {
    if (s == "eliminate-all") return TiePolicy::EliminateAll;
    if (s == "random") return TiePolicy::UniformRandom;
    if (s == "error") return TiePolicy::Error;
    throw ValidationError("unknown tie policy '" + s + "' (eliminate-all|random|error)");
}

// Single-character codes can be read straight off ranking texts; anything
// fancier needs --candidates.
Election election_from(const std::vector<std::string>& specs,
                       const std::vector<std::string>& ranking_texts, const char* what) {
    if (!specs.empty()) return make_election(specs);
    std::set<char> codes;
    for (const std::string& t : ranking_texts)
        for (char ch : t)
            if (ch != '-' && !std::isspace(static_cast<unsigned char>(ch))) codes.insert(ch);
    if (codes.empty())
        throw ValidationError(std::string("cannot infer candidates from ") + what +
                              "; pass --candidates");
    std::vector<std::string> single;
    for (char ch : codes) single.emplace_back(1, ch);
    return make_election(single);
}

std::vector<std::string> tally_ranking_texts(const std::string& content) {
    std::istringstream in(content);
    std::vector<std::string> out;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        auto cells = text::split_csv(line);
        if (line_no == 1 && !cells.empty() && text::iequals(cells[0], "ranking")) continue;
        if (!cells.empty()) out.push_back(cells[0]);
    }
    return out;
}

std::string win_line(const WinVector& win, const Election& e) {
    std::string out = "win ";
    for (int c = 0; c < e.size(); ++c) {
        if (c) out += ", ";
        out += e.code(c) + " " + fmt_pct(win[static_cast<size_t>(c)]);
    }
    return out;
}

void emit_prediction(std::ostream& os, const std::string& format, const WinVector& win,
                     const EliminationTree& tree, const Election& e) {
    if (format == "json")
        os << tree_to_json(tree, e);
    else if (format == "dot")
        os << tree_to_dot(tree, e);
    else if (format == "text")
        os << win_line(win, e) << "\n\n" << tree_to_text(tree, e);
    else
        throw ValidationError("unknown format '" + format + "' (text|json|dot)");
}

struct OutputFile {
    std::ofstream file;
    std::ostream* os;

    OutputFile(const std::string& path, std::ostream& fallback) : os(&fallback) {
        if (path.empty()) return;
        file.open(path, std::ios::binary);
        if (!file) throw ParseError("cannot open '" + path + "' for writing");
        os = &file;
    }
};

ElectionModel load_model(const std::string& path, int bucket_size,
                         const std::vector<std::string>& cand_specs, Election* e_out,
                         std::ostream& err) {
    std::string content = slurp(path);
    std::istringstream in(content);
    DistTable t = load_dist_table(in, bucket_size);
    for (const std::string& w : t.warnings) err << "warning: " << w << "\n";
    Election e = election_from(cand_specs, t.names, "table headers");
    *e_out = e;
    return model_from_table(t, e);
}

void cmd_tabulate(const std::string& input, bool is_cvr,
                  const std::vector<std::string>& cand_specs, const std::string& policy_str,
                  uint64_t seed, const std::string& format, std::ostream& os, std::ostream&) {
    TiePolicy policy = parse_policy(policy_str);
    std::string content = slurp(input);
    Election e;
    TallyMap tally;
    if (is_cvr) {
        if (cand_specs.empty())
            throw ValidationError("cast vote records need --candidates to decode cells");
        e = make_election(cand_specs);
        std::istringstream in(content);
        CastVoteRecord cvr = parse_cvr(in, e);
        for (const BallotRow& b : cvr.ballots) ++tally[b.ranking];
    } else {
        e = election_from(cand_specs, tally_ranking_texts(content), "the tally");
        std::istringstream in(content);
        tally = parse_tally(in, e);
    }
    IrvResult res = run_irv(tally, e.all_indices(), policy, seed);

    if (format == "json") {
        nlohmann::json doc;
        nlohmann::json rounds = nlohmann::json::array();
        for (const RoundRecord& r : res.rounds) {
            nlohmann::json jr;
            nlohmann::json totals = nlohmann::json::object();
            for (const auto& [c, n] : r.top_totals) totals[e.code(c)] = n;
            jr["totals"] = totals;
            jr["exhausted"] = r.exhausted;
            nlohmann::json gone = nlohmann::json::array();
            for (int c : r.eliminated) gone.push_back(e.code(c));
            jr["eliminated"] = gone;
            rounds.push_back(std::move(jr));
        }
        doc["rounds"] = rounds;
        if (res.winner)
            doc["winner"] = e.code(*res.winner);
        else
            doc["winner"] = nullptr;
        os << doc.dump(2) << "\n";
        return;
    }
    if (format != "text") throw ValidationError("unknown format '" + format + "' (text|json)");
    for (size_t i = 0; i < res.rounds.size(); ++i) {
        const RoundRecord& r = res.rounds[i];
        os << "round " << i + 1 << ":";
        bool first = true;
        for (const auto& [c, n] : r.top_totals) {
            os << (first ? " " : ", ") << e.code(c) << " " << n;
            first = false;
        }
        os << ", exhausted " << r.exhausted;
        for (int c : r.eliminated) os << ", eliminate " << e.code(c);
        os << "\n";
    }
    if (res.winner)
        os << "winner " << e.code(*res.winner) << "\n";
    else
        os << "no winner (all candidates eliminated)\n";
}

void cmd_predict(const std::string& input, int bucket_size,
                 const std::vector<std::string>& cand_specs, const std::string& format,
                 std::ostream& os, std::ostream& err) {
    Election e;
    ElectionModel m = load_model(input, bucket_size, cand_specs, &e, err);
    auto [win, tree] = win_vector_memoized(m);
    emit_prediction(os, format, win, tree, e);
}

void cmd_recount(const std::string& input, const std::vector<std::string>& cand_specs,
                 double mean_shift, double sd_shift, const std::string& format, std::ostream& os,
                 std::ostream&) {
    std::string content = slurp(input);
    Election e = election_from(cand_specs, tally_ranking_texts(content), "the tally");
    std::istringstream in(content);
    TallyMap tally = parse_tally(in, e);
    RecountParams p;
    p.mean_shift = mean_shift;
    p.sd_shift = sd_shift;
    ElectionModel m = recount_model(tally, e.all_indices(), p);
    auto [win, tree] = win_vector_memoized(m);
    emit_prediction(os, format, win, tree, e);
}

void cmd_replay(const std::string& input, const std::vector<std::string>& cand_specs,
                double step, uint64_t seed, double fraction, double dispersion, int bucket_size,
                const std::string& format, std::ostream& os, std::ostream&) {
    if (cand_specs.empty())
        throw ValidationError("cast vote records need --candidates to decode cells");
    Election e = make_election(cand_specs);
    std::string content = slurp(input);
    std::istringstream in(content);
    CastVoteRecord cvr = parse_cvr(in, e);

    PartialCountParams params;
    params.dispersion = dispersion;
    params.bucket_size = bucket_size;

    if (fraction >= 0.0) {
        // One checkpoint instead of the whole series.
        ReplayScenario sc = make_scenario(cvr, step, seed);
        auto [tally, exact] = tally_prefix(cvr, sc.precinct_order, fraction, e.size());
        params.fraction_counted = exact;
        ElectionModel m = partial_count_model(tally, e.all_indices(), params);
        auto [win, tree] = win_vector_memoized(m);
        char buf[64];
        std::snprintf(buf, sizeof buf, "fraction %g (exact %.6g)\n", fraction, exact);
        os << buf;
        emit_prediction(os, format.empty() ? "text" : format, win, tree, e);
        return;
    }

    ReplayScenario sc = make_scenario(cvr, step, seed);
    std::vector<ReplayPoint> series = replay(cvr, e, sc, params);
    std::string fmt = format.empty() ? "csv" : format;
    if (fmt == "csv" || fmt == "ternary") {
        write_replay_series(os, series, e, fmt == "ternary");
    } else if (fmt == "json") {
        nlohmann::json doc;
        doc["step"] = sc.step;
        doc["seed"] = sc.seed;
        nlohmann::json order = nlohmann::json::array();
        for (const std::string& p : sc.precinct_order) order.push_back(p);
        doc["precinct_order"] = order;
        nlohmann::json points = nlohmann::json::array();
        for (const ReplayPoint& pt : series) {
            nlohmann::json jp;
            jp["fraction"] = pt.fraction;
            jp["fraction_exact"] = pt.fraction_exact;
            nlohmann::json win = nlohmann::json::object();
            for (int c = 0; c < e.size(); ++c) win[e.code(c)] = pt.win[static_cast<size_t>(c)];
            jp["win"] = win;
            points.push_back(std::move(jp));
        }
        doc["points"] = points;
        os << doc.dump(2) << "\n";
    } else {
        throw ValidationError("unknown format '" + fmt + "' (csv|ternary|json)");
    }
}

void cmd_oracle(const std::string& input, int bucket_size,
                const std::vector<std::string>& cand_specs, const std::string& mode,
                long long samples, uint64_t seed, long long max_states, const std::string& format,
                std::ostream& os, std::ostream& err) {
    Election e;
    ElectionModel m = load_model(input, bucket_size, cand_specs, &e, err);
    WinVector engine = win_vector_memoized(m).first;

    OracleReport report;
    if (mode == "exhaustive") {
        report = exhaustive_win_probs(m, max_states);
    } else if (mode == "mc") {
        report = mc_win_probs(m, samples, seed);
    } else if (mode == "auto") {
        if (joint_state_count(m, max_states) >= 0)
            report = exhaustive_win_probs(m, max_states);
        else
            report = mc_win_probs(m, samples, seed);
    } else {
        throw ValidationError("unknown mode '" + mode + "' (auto|exhaustive|mc)");
    }
    attach_engine_gap(report, engine);
    if (format == "json")
        os << report_to_json(report, e, &engine);
    else if (format == "text")
        os << report_to_text(report, e, &engine);
    else
        throw ValidationError("unknown format '" + format + "' (text|json)");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Win-probability engine for instant runoff elections"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Defaults file with key=value lines");

    std::string tab_input, tab_policy = "random", tab_format = "text", tab_output;
    bool tab_cvr = false;
    std::vector<std::string> tab_cands;
    uint64_t tab_seed = 0;
    CLI::App* tab = app.add_subcommand("tabulate", "Run the elimination rounds on a tally");
    tab->configurable();
    tab->add_option("input", tab_input, "Tally file, or CVR file with --cvr")->required();
    tab->add_flag("--cvr", tab_cvr, "Input is a cast vote record");
    tab->add_option("--candidates", tab_cands, "Codes like A,B or G=Groh,F=Foo")->delimiter(',');
    tab->add_option("--tie-policy", tab_policy, "eliminate-all|random|error");
    tab->add_option("--seed", tab_seed, "Seed for random tie breaks");
    tab->add_option("--format", tab_format, "text|json");
    tab->add_option("--output", tab_output, "Write to a file instead of stdout");

    std::string pred_input, pred_format = "text", pred_output;
    std::vector<std::string> pred_cands;
    int pred_bucket = 1;
    CLI::App* pred = app.add_subcommand("predict", "Win probabilities from a distribution table");
    pred->configurable();
    pred->add_option("input", pred_input, "Distribution table file")->required();
    pred->add_option("--bucket-size", pred_bucket, "Vote bucket width of the table");
    pred->add_option("--candidates", pred_cands, "Codes like A,B or G=Groh,F=Foo")->delimiter(',');
    pred->add_option("--format", pred_format, "text|json|dot");
    pred->add_option("--output", pred_output, "Write to a file instead of stdout");

    std::string rec_input, rec_format = "text", rec_output;
    std::vector<std::string> rec_cands;
    double rec_mean_shift = RecountParams{}.mean_shift;
    double rec_sd_shift = RecountParams{}.sd_shift;
    CLI::App* rec = app.add_subcommand("recount", "Post-recount win probabilities from a tally");
    rec->configurable();
    rec->add_option("input", rec_input, "Certified tally file")->required();
    rec->add_option("--candidates", rec_cands, "Codes like A,B or G=Groh,F=Foo")->delimiter(',');
    rec->add_option("--mean-shift", rec_mean_shift, "Relative mean change per ranking");
    rec->add_option("--sd-shift", rec_sd_shift, "Relative deviation per ranking");
    rec->add_option("--format", rec_format, "text|json|dot");
    rec->add_option("--output", rec_output, "Write to a file instead of stdout");

    std::string rep_input, rep_format, rep_output;
    std::vector<std::string> rep_cands;
    double rep_step = 0.005, rep_fraction = -1.0, rep_dispersion = 0.5;
    int rep_bucket = 1;
    uint64_t rep_seed = 0;
    CLI::App* rep = app.add_subcommand("replay", "Election-night series from a cast vote record");
    rep->configurable();
    rep->add_option("input", rep_input, "Cast vote record file")->required();
    rep->add_option("--candidates", rep_cands, "Codes like A,B or G=Groh,F=Foo")->delimiter(',');
    rep->add_option("--step", rep_step, "Fraction increment per point");
    rep->add_option("--seed", rep_seed, "Seed for the precinct shuffle");
    rep->add_option("--fraction", rep_fraction, "Predict a single checkpoint instead");
    rep->add_option("--dispersion", rep_dispersion, "Extrapolation spread factor");
    rep->add_option("--bucket-size", rep_bucket, "Bucket width of the extrapolation model");
    rep->add_option("--format", rep_format, "csv|ternary|json (series), text|json|dot (--fraction)");
    rep->add_option("--output", rep_output, "Write to a file instead of stdout");

    std::string ora_input, ora_mode = "auto", ora_format = "text", ora_output;
    std::vector<std::string> ora_cands;
    int ora_bucket = 1;
    long long ora_samples = 1000000, ora_max_states = 100000000;
    uint64_t ora_seed = 0;
    CLI::App* ora = app.add_subcommand("oracle", "Check the engine against direct simulation");
    ora->configurable();
    ora->add_option("input", ora_input, "Distribution table file")->required();
    ora->add_option("--bucket-size", ora_bucket, "Vote bucket width of the table");
    ora->add_option("--candidates", ora_cands, "Codes like A,B or G=Groh,F=Foo")->delimiter(',');
    ora->add_option("--mode", ora_mode, "auto|exhaustive|mc");
    ora->add_option("--samples", ora_samples, "Monte Carlo sample count");
    ora->add_option("--seed", ora_seed, "Monte Carlo seed");
    ora->add_option("--max-states", ora_max_states, "Exhaustive enumeration limit");
    ora->add_option("--format", ora_format, "text|json");
    ora->add_option("--output", ora_output, "Write to a file instead of stdout");

    std::string tree_input, tree_format = "dot", tree_output;
    std::vector<std::string> tree_cands;
    int tree_bucket = 1;
    CLI::App* tre = app.add_subcommand("tree", "Weighted elimination tree from a distribution table");
    tre->configurable();
    tre->add_option("input", tree_input, "Distribution table file")->required();
    tre->add_option("--bucket-size", tree_bucket, "Vote bucket width of the table");
    tre->add_option("--candidates", tree_cands, "Codes like A,B or G=Groh,F=Foo")->delimiter(',');
    tre->add_option("--format", tree_format, "dot|text|json");
    tre->add_option("--output", tree_output, "Write to a file instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& ex) {
        int code = app.exit(ex, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*tab) {
            OutputFile o(tab_output, out);
            cmd_tabulate(tab_input, tab_cvr, tab_cands, tab_policy, tab_seed, tab_format, *o.os, err);
        } else if (*pred) {
            OutputFile o(pred_output, out);
            cmd_predict(pred_input, pred_bucket, pred_cands, pred_format, *o.os, err);
        } else if (*rec) {
            OutputFile o(rec_output, out);
            cmd_recount(rec_input, rec_cands, rec_mean_shift, rec_sd_shift, rec_format, *o.os, err);
        } else if (*rep) {
            OutputFile o(rep_output, out);
            cmd_replay(rep_input, rep_cands, rep_step, rep_seed, rep_fraction, rep_dispersion,
                       rep_bucket, rep_format, *o.os, err);
        } else if (*ora) {
            OutputFile o(ora_output, out);
            cmd_oracle(ora_input, ora_bucket, ora_cands, ora_mode, ora_samples, ora_seed,
                       ora_max_states, ora_format, *o.os, err);
        } else if (*tre) {
            OutputFile o(tree_output, out);
            cmd_predict(tree_input, tree_bucket, tree_cands, tree_format, *o.os, err);
        }
    } catch (const ParseError& ex) {
        err << "error: " << ex.what() << "\n";
        return 2;
    } catch (const TieError& ex) {
        err << "error: " << ex.what() << "\n";
        return 5;
    } catch (const ValidationError& ex) {
        err << "error: " << ex.what() << "\n";
        return 3;
    } catch (const NumericalError& ex) {
        err << "error: " << ex.what() << "\n";
        return 4;
    } catch (const std::exception& ex) {
        err << "error: " << ex.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace irv
