#include "irv/models.h"

#include <fstream>

#include "irv/errors.h"
#include "test_util.h"

using namespace irv;

namespace {

const std::vector<int> kAbc = {0, 1, 2};

TallyMap certified_tally() {
    // Certified totals used throughout: a close three-way race where the
    // runner-up depends on later preferences.
    std::ifstream in(data_path("abc_tally.csv"));
    Election e = make_election({"A", "B", "C"});
    return parse_tally(in, e);
}

}  // namespace

static void test_recount_point_cases() {
    TallyMap t;
    t[Ranking({0})] = 0;
    ElectionModel m = recount_model(t, kAbc);
    int b = -1;
    CHECK(is_point_mass(m.dists.at(Ranking({0})), &b) && b == 0);

    t[Ranking({0})] = 500;
    RecountParams frozen;
    frozen.mean_shift = 0.0;
    frozen.sd_shift = 0.0;
    m = recount_model(t, kAbc, frozen);
    CHECK(is_point_mass(m.dists.at(Ranking({0})), &b) && b == 500);
    CHECK(m.bucket_size == 1);
}

static void test_recount_folds_full_rankings() {
    TallyMap t;
    t[Ranking({0, 1})] = 5;
    t[Ranking({0, 1, 2})] = 3;
    RecountParams frozen;
    frozen.mean_shift = 0.0;
    frozen.sd_shift = 0.0;
    ElectionModel m = recount_model(t, kAbc, frozen);
    CHECK(m.dists.size() == 1);
    int b = -1;
    CHECK(is_point_mass(m.dists.at(Ranking({0, 1})), &b) && b == 8);
}

static void test_recount_spread() {
    ElectionModel m = recount_model(certified_tally(), kAbc);
    CHECK(m.dists.size() == 9);

    // c = 200: mean 200.154, sd 0.292. Nearly all mass stays at 200.
    const DiscreteDist& f200 = m.dists.at(Ranking({2, 0}));
    CHECK_NEAR(f200.at(200), 0.98, 0.01);
    CHECK_NEAR(f200.at(201), 0.02, 0.01);

    // c = 400: the shift pushes a third of the mass one vote up.
    const DiscreteDist& f400 = m.dists.at(Ranking({1}));
    CHECK_NEAR(f400.at(399), 0.06, 0.01);
    CHECK_NEAR(f400.at(400), 0.59, 0.01);
    CHECK_NEAR(f400.at(401), 0.34, 0.01);

    for (const auto& [r, f] : m.dists) {
        double sum = 0.0;
        for (double p : f.mass) sum += p;
        CHECK_NEAR(sum, 1.0, 1e-9);
        long long c = certified_tally().count(r) ? certified_tally().at(r) : 0;
        CHECK_NEAR(mean_votes(f), static_cast<double>(c) * 1.00077, 1.0);
    }
}

static void test_recount_param_validation() {
    TallyMap t;
    t[Ranking({0})] = 10;
    RecountParams p;
    p.sd_shift = -0.001;
    CHECK_THROWS(recount_model(t, kAbc, p), ValidationError);
    p = RecountParams{};
    p.trunc_z = 0.0;
    CHECK_THROWS(recount_model(t, kAbc, p), ValidationError);

    TallyMap neg;
    neg[Ranking({0})] = -1;
    CHECK_THROWS(recount_model(neg, kAbc), ValidationError);
}

static void test_partial_point_cases() {
    TallyMap t;
    t[Ranking({0})] = 120;
    PartialCountParams p;
    p.fraction_counted = 1.0;
    ElectionModel m = partial_count_model(t, kAbc, p);
    int b = -1;
    CHECK(is_point_mass(m.dists.at(Ranking({0})), &b) && b == 120);

    t[Ranking({0})] = 0;
    p.fraction_counted = 0.4;
    m = partial_count_model(t, kAbc, p);
    CHECK(is_point_mass(m.dists.at(Ranking({0})), &b) && b == 0);

    // Small counts predict a deviation under half a bucket: the mass snaps
    // to the bucket holding the scaled mean.
    t[Ranking({0})] = 20;
    p.fraction_counted = 0.5;
    p.bucket_size = 75;
    m = partial_count_model(t, kAbc, p);
    CHECK(is_point_mass(m.dists.at(Ranking({0})), &b) && b == 0);

    t[Ranking({0})] = 200;  // mean 400, sd 50 >= 37.5: spreads
    m = partial_count_model(t, kAbc, p);
    CHECK(!is_point_mass(m.dists.at(Ranking({0})), &b));
}

static void test_partial_truncation() {
    TallyMap t;
    t[Ranking({0})] = 301;
    PartialCountParams p;
    p.fraction_counted = 0.5;
    p.bucket_size = 75;
    ElectionModel m = partial_count_model(t, kAbc, p);
    const DiscreteDist& f = m.dists.at(Ranking({0}));

    // mean 602, sd 150.5; totals below the counted 301 are impossible, so
    // everything under bucket 4 (votes 300) is cut away.
    for (int k = 0; k < 4; ++k) CHECK_NEAR(f.at(k), 0.0, 0.0);
    CHECK(f.at(4) > 0.0);
    CHECK(f.at(8) > f.at(4));  // the mode sits near the scaled mean
    CHECK(f.buckets() >= 10 && f.buckets() <= 20);

    double sum = 0.0;
    for (double q : f.mass) sum += q;
    CHECK_NEAR(sum, 1.0, 1e-9);
}

static void test_partial_folds_and_validates() {
    TallyMap t;
    t[Ranking({0, 1, 2})] = 40;
    t[Ranking({0, 1})] = 10;
    PartialCountParams p;
    p.fraction_counted = 0.25;
    ElectionModel m = partial_count_model(t, kAbc, p);
    CHECK(m.dists.size() == 1);
    // Folded count 50 at fraction 0.25 scales to 200; truncation below the
    // counted total trims the left tail and nudges the mean up a little.
    CHECK_NEAR(mean_votes(m.dists.at(Ranking({0, 1}))), 202.0, 12.0);

    PartialCountParams bad;
    bad.fraction_counted = 0.0;
    CHECK_THROWS(partial_count_model(t, kAbc, bad), ValidationError);
    bad.fraction_counted = 1.5;
    CHECK_THROWS(partial_count_model(t, kAbc, bad), ValidationError);
    bad = PartialCountParams{};
    bad.dispersion = -0.1;
    CHECK_THROWS(partial_count_model(t, kAbc, bad), ValidationError);
    bad = PartialCountParams{};
    bad.bucket_size = 0;
    CHECK_THROWS(partial_count_model(t, kAbc, bad), ValidationError);
}

int main() {
    test_recount_point_cases();
    test_recount_folds_full_rankings();
    test_recount_spread();
    test_recount_param_validation();
    test_partial_point_cases();
    test_partial_folds_and_validates();
    test_partial_truncation();
    if (g_fail == 0) std::printf("models_test: all checks passed\n");
    return g_fail;
}
