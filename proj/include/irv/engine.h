#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "irv/dist.h"
#include "irv/domain.h"

namespace irv {

// Per-ranking vote-total distributions over a shared bucket grid. Rankings
// missing from the map are point masses at zero, so sparse inputs stay
// sparse. The empty ranking carries exhausted votes; it contributes to no
// first-place total and is dragged along only for bookkeeping.
struct ElectionModel {
    std::vector<int> candidates;  // ascending indices
    int bucket_size = 1;
    std::map<Ranking, DiscreteDist> dists;
};

// Checks candidate ordering, key validity, shared bucket size, and unit mass
// per distribution. Throws ValidationError.
void validate_model(const ElectionModel& m);

// Folds each full-length ranking into its length-(N-1) prefix, convolving
// distributions that land on the same key.
ElectionModel collapse_full_rankings(const ElectionModel& m);

struct RoundTables {
    std::map<int, DiscreteDist> tau;           // first-place total per candidate
    std::map<int, std::vector<double>> kappa;  // running totals of tau
};

// Distribution of candidate a's first-place total among `remaining`: the
// convolution of f_R over every ranking R whose first surviving entry is a.
// If no ranking feeds a, the total is zero with certainty.
DiscreteDist compute_tau(const ElectionModel& m, const std::vector<int>& remaining, int a);

RoundTables compute_round_tables(const ElectionModel& m, const std::vector<int>& remaining);

// Probability that s is exactly the set of candidates sharing the lowest
// occupied bucket: sum_k prod_{i in s} tau_i(k) * prod_{j not in s} P(T_j > k).
double tie_set_prob(const RoundTables& tables, const std::vector<int>& s);

// Per-candidate elimination probability: each subset s of the remaining
// candidates contributes tie_set_prob(s)/|s| to every member of s. The
// results sum to 1, since exactly one set occupies the lowest bucket.
std::map<int, double> elimination_probs(const RoundTables& tables);

// The model after eliminating a: a is removed from every ranking, and
// distributions whose rankings merge are convolved. Rankings that reduce to
// the empty ranking accumulate on the empty key.
ElectionModel project(const ElectionModel& m, int a);

// Win probability per candidate index (length = root candidate count).
using WinVector = std::vector<double>;

struct TreeNode {
    std::vector<int> order;            // candidates eliminated so far, first first
    std::vector<int> remaining;
    double path_prob = 1.0;            // product of edge weights from the root
    std::map<int, double> elim_probs;  // edge weights to children; empty at leaves
    WinVector win;
};

struct EliminationTree {
    int n_candidates = 0;
    std::vector<TreeNode> nodes;  // depth-first, children in ascending index order
    const TreeNode* find(const std::vector<int>& order) const;
};

// The full recursion: every elimination order projects its own chain of
// models, the win vector of a round is the elimination-probability-weighted
// average of its children, and single-candidate rounds are indicators.
// Root models with full-length rankings are folded first.
std::pair<WinVector, EliminationTree> win_vector(const ElectionModel& m);

// Identical results within 1e-9. Projection depends only on the set of
// eliminated candidates, not their order, so rounds are computed once per
// remaining set and shared across the tree.
std::pair<WinVector, EliminationTree> win_vector_memoized(const ElectionModel& m);

// Assembles a model from a parsed distribution table; column headers are
// ranking texts. Throws ParseError on unknown codes, ValidationError on
// duplicate columns.
ElectionModel model_from_table(const DistTable& t, const Election& e);

// Serializations of the weighted tree. Text and DOT render percentages with
// one decimal; DOT edges carry the cumulative probability of reaching the
// child node. JSON keeps full precision.
std::string tree_to_text(const EliminationTree& t, const Election& e);
std::string tree_to_dot(const EliminationTree& t, const Election& e);
std::string tree_to_json(const EliminationTree& t, const Election& e);

}  // namespace irv
