#include "irv/cli.h"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "test_util.h"

using namespace irv;

namespace {

int run(const std::vector<std::string>& args, std::string* out_s = nullptr,
        std::string* err_s = nullptr) {
    std::vector<const char*> argv = {"irv"};
    for (const std::string& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    if (out_s) *out_s = out.str();
    if (err_s) *err_s = err.str();
    return code;
}

struct TempFile {
    std::string path;
    TempFile(const std::string& name, const std::string& content) : path(name) {
        std::ofstream f(path, std::ios::binary);
        f << content;
    }
    ~TempFile() { std::remove(path.c_str()); }
};

std::vector<std::string> lines_of(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) out.push_back(line);
    return out;
}

}  // namespace

static void test_parse_failures() {
    std::string out, err;
    CHECK(run({}, &out, &err) == 2);
    CHECK(!err.empty());

    CHECK(run({"--help"}, &out, &err) == 0);
    CHECK(out.find("tabulate") != std::string::npos);
    CHECK(out.find("predict") != std::string::npos);

    CHECK(run({"frobnicate"}, &out, &err) == 2);
    CHECK(run({"tabulate"}, &out, &err) == 2);  // missing input
    CHECK(run({"tabulate", "no_such_file.csv"}, &out, &err) == 2);
    CHECK(err.find("cannot open") != std::string::npos);
    CHECK(run({"predict", data_path("abc_table.csv"), "--no-such-flag"}, &out, &err) == 2);
}

static void test_tabulate() {
    std::string out, err;
    CHECK(run({"tabulate", data_path("abc_tally.csv")}, &out, &err) == 0);
    CHECK(out.find("round 1: A 1301, B 1200, C 1300, exhausted 0, eliminate B") !=
          std::string::npos);
    CHECK(out.find("round 2: A 1701, C 1700, exhausted 400, eliminate C") != std::string::npos);
    CHECK(out.find("winner A") != std::string::npos);

    CHECK(run({"tabulate", data_path("abc_tally.csv"), "--format", "json"}, &out, &err) == 0);
    nlohmann::json doc = nlohmann::json::parse(out);
    CHECK(doc["winner"] == "A");
    CHECK(doc["rounds"][0]["totals"]["A"] == 1301);
    CHECK(doc["rounds"][1]["exhausted"] == 400);

    CHECK(run({"tabulate", data_path("fng_tally.csv"), "--candidates",
               "F=Franklin,N=Nadeau,G=Groh"},
              &out, &err) == 0);
    CHECK(out.find("winner G") != std::string::npos);
}

static void test_tabulate_ties() {
    TempFile tie("cli_test_tie.csv", "A,5\nB,5\n");
    std::string out, err;
    CHECK(run({"tabulate", tie.path, "--tie-policy", "error"}, &out, &err) == 5);
    CHECK(err.find("error:") != std::string::npos);

    CHECK(run({"tabulate", tie.path, "--tie-policy", "eliminate-all"}, &out, &err) == 0);
    CHECK(out.find("no winner") != std::string::npos);

    std::string out2;
    CHECK(run({"tabulate", tie.path, "--tie-policy", "random", "--seed", "7"}, &out, &err) == 0);
    CHECK(run({"tabulate", tie.path, "--tie-policy", "random", "--seed", "7"}, &out2, &err) == 0);
    CHECK(out == out2);

    CHECK(run({"tabulate", tie.path, "--tie-policy", "bogus"}, &out, &err) == 3);
}

static void test_validation_failures() {
    TempFile neg("cli_test_neg.csv", "A,-3\nB,5\n");
    std::string out, err;
    CHECK(run({"tabulate", neg.path}, &out, &err) == 3);

    CHECK(run({"predict", data_path("abc_table.csv"), "--bucket-size", "100", "--format",
               "bogus"},
              &out, &err) == 3);
    CHECK(err.find("unknown format") != std::string::npos);
}

static void test_predict() {
    std::string out, err;
    CHECK(run({"predict", data_path("abc_table.csv"), "--bucket-size", "100"}, &out, &err) == 0);
    CHECK(out.rfind("win A ", 0) == 0);
    CHECK(out.find("[A,B,C]") != std::string::npos);

    CHECK(run({"predict", data_path("abc_table.csv"), "--bucket-size", "100", "--format",
               "json"},
              &out, &err) == 0);
    nlohmann::json doc = nlohmann::json::parse(out);
    CHECK_NEAR(doc["win"]["A"].get<double>(), 0.048, 0.005);
    CHECK_NEAR(doc["win"]["B"].get<double>(), 0.861, 0.005);
    CHECK_NEAR(doc["win"]["C"].get<double>(), 0.089, 0.005);
    CHECK(doc["nodes"].size() == 10);

    CHECK(run({"tree", data_path("abc_table.csv"), "--bucket-size", "100"}, &out, &err) == 0);
    CHECK(out.rfind("digraph", 0) == 0);
}

static void test_recount() {
    std::string out, err;
    CHECK(run({"recount", data_path("abc_tally.csv"), "--format", "json"}, &out, &err) == 0);
    nlohmann::json doc = nlohmann::json::parse(out);
    CHECK_NEAR(doc["win"]["A"].get<double>(), 0.72, 0.06);
    CHECK_NEAR(doc["win"]["B"].get<double>(), 0.00, 0.02);
    CHECK_NEAR(doc["win"]["C"].get<double>(), 0.28, 0.06);

    // With no shift at all the certified winner is certain.
    CHECK(run({"recount", data_path("abc_tally.csv"), "--mean-shift", "0", "--sd-shift", "0",
               "--format", "json"},
              &out, &err) == 0);
    doc = nlohmann::json::parse(out);
    CHECK_NEAR(doc["win"]["A"].get<double>(), 1.0, 1e-9);
}

static void test_replay() {
    std::string out, err, again;
    std::vector<std::string> args = {"replay",  data_path("precincts.csv"),
                                     "--candidates", "A,B,C",
                                     "--step",  "0.25",
                                     "--seed",  "3"};
    CHECK(run(args, &out, &err) == 0);
    std::vector<std::string> rows = lines_of(out);
    CHECK(rows.size() == 5);
    CHECK(rows[0] == "fraction,A,B,C");
    CHECK(rows[4].rfind("1,", 0) == 0);

    // Same seed, same bytes.
    CHECK(run(args, &again, &err) == 0);
    CHECK(out == again);

    // The terminal row is a 0/1 verdict.
    int ones = 0, zeros = 0;
    std::istringstream last(rows[4]);
    std::string cell;
    std::getline(last, cell, ',');
    while (std::getline(last, cell, ',')) {
        if (cell == "1") ++ones;
        if (cell == "0") ++zeros;
    }
    CHECK(ones == 1 && zeros == 2);

    args.push_back("--format");
    args.push_back("ternary");
    CHECK(run(args, &out, &err) == 0);
    CHECK(lines_of(out)[0] == "fraction,pA,pB,pC");

    CHECK(run({"replay", data_path("precincts.csv"), "--candidates", "A,B,C", "--step", "0.25",
               "--format", "json"},
              &out, &err) == 0);
    nlohmann::json doc = nlohmann::json::parse(out);
    CHECK(doc["points"].size() == 4);
    CHECK_NEAR(doc["points"][3]["fraction"].get<double>(), 1.0, 1e-12);

    CHECK(run({"replay", data_path("precincts.csv"), "--candidates", "A,B,C", "--fraction",
               "0.5"},
              &out, &err) == 0);
    CHECK(out.rfind("fraction 0.5 (exact ", 0) == 0);
    CHECK(out.find("win A ") != std::string::npos);

    CHECK(run({"replay", data_path("precincts.csv"), "--step", "0.25"}, &out, &err) == 3);
    CHECK(err.find("--candidates") != std::string::npos);
}

static void test_oracle() {
    std::string out, err;
    CHECK(run({"oracle", data_path("abc_table.csv"), "--bucket-size", "100"}, &out, &err) == 0);
    CHECK(out.find("exhaustive oracle") != std::string::npos);
    CHECK(out.find("max engine gap") != std::string::npos);

    CHECK(run({"oracle", data_path("abc_table.csv"), "--bucket-size", "100", "--mode", "mc",
               "--samples", "20000", "--seed", "1", "--format", "json"},
              &out, &err) == 0);
    nlohmann::json doc = nlohmann::json::parse(out);
    CHECK(doc["method"] == "monte-carlo");
    CHECK(doc["samples"] == 20000);
    CHECK_NEAR(doc["win"]["B"].get<double>(), 0.861, 0.03);
    CHECK(doc["max_engine_gap"].get<double>() < 0.05);

    CHECK(run({"oracle", data_path("abc_table.csv"), "--bucket-size", "100", "--mode",
               "exhaustive", "--max-states", "10"},
              &out, &err) == 3);

    // Low ceiling plus auto falls back to sampling.
    CHECK(run({"oracle", data_path("abc_table.csv"), "--bucket-size", "100", "--mode", "auto",
               "--max-states", "10", "--samples", "5000"},
              &out, &err) == 0);
    CHECK(out.find("monte-carlo oracle, 5000 samples") != std::string::npos);
}

static void test_output_and_config() {
    std::string out, err;
    const char* path = "cli_test_out.json";
    CHECK(run({"predict", data_path("abc_table.csv"), "--bucket-size", "100", "--format",
               "json", "--output", path},
              &out, &err) == 0);
    CHECK(out.empty());
    std::ifstream f(path);
    CHECK(f.good());
    nlohmann::json doc = nlohmann::json::parse(f);
    CHECK_NEAR(doc["win"]["B"].get<double>(), 0.861, 0.005);
    std::remove(path);

    TempFile cfg("cli_test_cfg.ini", "[predict]\nformat=json\nbucket-size=100\n");
    CHECK(run({"--config", cfg.path, "predict", data_path("abc_table.csv")}, &out, &err) == 0);
    doc = nlohmann::json::parse(out);
    CHECK_NEAR(doc["win"]["B"].get<double>(), 0.861, 0.005);

    // Command line wins over the config file.
    CHECK(run({"--config", cfg.path, "predict", data_path("abc_table.csv"), "--format", "text"},
              &out, &err) == 0);
    CHECK(out.rfind("win A ", 0) == 0);
}

int main() {
    test_parse_failures();
    test_tabulate();
    test_tabulate_ties();
    test_validation_failures();
    test_predict();
    test_recount();
    test_replay();
    test_oracle();
    test_output_and_config();
    if (g_fail == 0) std::printf("cli_test: all checks passed\n");
    return g_fail;
}
