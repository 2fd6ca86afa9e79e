#include "irv/engine.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "irv/errors.h"
#include "json.hpp"

namespace irv {

namespace {

unsigned mask_of(const std::vector<int>& cands) {
    unsigned mask = 0;
    for (int c : cands) mask |= 1u << c;
    return mask;
}

std::vector<int> cands_of(unsigned mask) {
    std::vector<int> out;
    for (int c = 0; c < 32; ++c)
        if (mask >> c & 1u) out.push_back(c);
    return out;
}

int position_of(const std::vector<int>& cands, int c) {
    for (size_t i = 0; i < cands.size(); ++i)
        if (cands[i] == c) return static_cast<int>(i);
    return -1;
}

}  // namespace

void validate_model(const ElectionModel& m) {
    if (m.candidates.empty()) throw ValidationError("model has no candidates");
    if (m.bucket_size < 1) throw ValidationError("model bucket size must be positive");
    for (size_t i = 0; i < m.candidates.size(); ++i) {
        int c = m.candidates[i];
        if (c < 0 || c >= 32) throw ValidationError("candidate index out of range");
        if (i > 0 && c <= m.candidates[i - 1])
            throw ValidationError("candidate indices must be ascending");
    }
    unsigned mask = mask_of(m.candidates);
    for (const auto& [r, f] : m.dists) {
        if (f.bucket_size != m.bucket_size)
            throw ValidationError("distribution bucket size differs from the model");
        if (f.buckets() == 0) throw ValidationError("empty distribution");
        double total = 0.0;
        for (double p : f.mass) {
            if (p < 0.0) throw ValidationError("negative probability mass");
            total += p;
        }
        if (std::abs(total - 1.0) > kMassTol)
            throw ValidationError("distribution mass is not 1");
        for (int c : r.entries)
            if (!(mask >> c & 1u))
                throw ValidationError("ranking names a candidate outside the model");
    }
}

ElectionModel collapse_full_rankings(const ElectionModel& m) {
    ElectionModel out;
    out.candidates = m.candidates;
    out.bucket_size = m.bucket_size;
    int n = static_cast<int>(m.candidates.size());
    std::map<Ranking, std::vector<const DiscreteDist*>> groups;
    for (const auto& [r, f] : m.dists) {
        if (r.length() == n && n > 1) {
            Ranking prefix = r;
            prefix.entries.pop_back();
            groups[prefix].push_back(&f);
        } else {
            groups[r].push_back(&f);
        }
    }
    for (const auto& [r, parts] : groups)
        out.dists[r] = parts.size() == 1 ? *parts.front() : convolve_many(parts);
    return out;
}

DiscreteDist compute_tau(const ElectionModel& m, const std::vector<int>& remaining, int a) {
    unsigned mask = mask_of(remaining);
    std::vector<const DiscreteDist*> parts;
    for (const auto& [r, f] : m.dists)
        if (first_choice_among(r, mask) == a) parts.push_back(&f);
    if (parts.empty()) return point_mass(m.bucket_size, 0);
    if (parts.size() == 1) return *parts.front();
    return convolve_many(parts);
}

RoundTables compute_round_tables(const ElectionModel& m, const std::vector<int>& remaining) {
    RoundTables t;
    for (int a : remaining) {
        DiscreteDist tau = compute_tau(m, remaining, a);
        t.kappa[a] = cdf(tau);
        t.tau[a] = std::move(tau);
    }
    return t;
}

namespace {

// Padded tau rows plus survivor rows P(T > k), the latter built from suffix
// sums rather than 1 - kappa so the tail does not cancel to noise.
struct TieKernel {
    std::vector<int> cands;
    int len = 0;
    std::vector<std::vector<double>> tau;
    std::vector<std::vector<double>> surv;
};

TieKernel make_tie_kernel(const RoundTables& t) {
    TieKernel kr;
    for (const auto& [c, f] : t.tau) {
        kr.cands.push_back(c);
        kr.len = std::max(kr.len, f.buckets());
    }
    for (const auto& [c, f] : t.tau) {
        std::vector<double> tv(kr.len, 0.0);
        for (int k = 0; k < f.buckets(); ++k) tv[k] = f.mass[k];
        std::vector<double> sv(kr.len, 0.0);
        for (int k = kr.len - 2; k >= 0; --k) sv[k] = sv[k + 1] + tv[k + 1];
        kr.tau.push_back(std::move(tv));
        kr.surv.push_back(std::move(sv));
    }
    return kr;
}

// Probability that exactly the members occupy the lowest occupied bucket.
double tie_mass(const TieKernel& kr, unsigned members) {
    int m = static_cast<int>(kr.cands.size());
    double total = 0.0;
    for (int k = 0; k < kr.len; ++k) {
        double term = 1.0;
        for (int i = 0; i < m; ++i)
            term *= (members >> i & 1u) ? kr.tau[i][k] : kr.surv[i][k];
        total += term;
    }
    return total;
}

}  // namespace

double tie_set_prob(const RoundTables& tables, const std::vector<int>& s) {
    if (s.empty()) throw ValidationError("tie set must be non-empty");
    TieKernel kr = make_tie_kernel(tables);
    unsigned members = 0;
    for (int c : s) {
        int pos = position_of(kr.cands, c);
        if (pos < 0) throw ValidationError("tie set names a candidate without tables");
        members |= 1u << pos;
    }
    return tie_mass(kr, members);
}

std::map<int, double> elimination_probs(const RoundTables& tables) {
    TieKernel kr = make_tie_kernel(tables);
    int m = static_cast<int>(kr.cands.size());
    std::map<int, double> probs;
    for (int c : kr.cands) probs[c] = 0.0;
    for (unsigned members = 1; members < (1u << m); ++members) {
        double p = tie_mass(kr, members) / std::popcount(members);
        for (int i = 0; i < m; ++i)
            if (members >> i & 1u) probs[kr.cands[i]] += p;
    }
    return probs;
}

ElectionModel project(const ElectionModel& m, int a) {
    if (position_of(m.candidates, a) < 0)
        throw ValidationError("cannot project out a candidate not in the model");
    ElectionModel out;
    out.bucket_size = m.bucket_size;
    for (int c : m.candidates)
        if (c != a) out.candidates.push_back(c);
    std::map<Ranking, std::vector<const DiscreteDist*>> groups;
    for (const auto& [r, f] : m.dists) groups[remove_candidate(r, a)].push_back(&f);
    for (const auto& [r, parts] : groups)
        out.dists[r] = parts.size() == 1 ? *parts.front() : convolve_many(parts);
    return out;
}

namespace {

WinVector indicator_win(const std::vector<int>& root_cands, int winner) {
    WinVector w(root_cands.size(), 0.0);
    w[position_of(root_cands, winner)] = 1.0;
    return w;
}

// Depth-first construction over projected models. Children are visited in
// ascending candidate order; nodes land in the vector in visit order.
int build_tree(const ElectionModel& m, const std::vector<int>& root_cands,
               std::vector<int> order, double path_prob, std::vector<TreeNode>* nodes) {
    int idx = static_cast<int>(nodes->size());
    nodes->push_back({});
    (*nodes)[idx].order = std::move(order);
    (*nodes)[idx].remaining = m.candidates;
    (*nodes)[idx].path_prob = path_prob;

    if (m.candidates.size() == 1) {
        (*nodes)[idx].win = indicator_win(root_cands, m.candidates.front());
        return idx;
    }
    RoundTables tables = compute_round_tables(m, m.candidates);
    std::map<int, double> elim = elimination_probs(tables);
    (*nodes)[idx].elim_probs = elim;

    WinVector w(root_cands.size(), 0.0);
    for (const auto& [a, p] : elim) {
        std::vector<int> child_order = (*nodes)[idx].order;
        child_order.push_back(a);
        int child = build_tree(project(m, a), root_cands, std::move(child_order),
                               path_prob * p, nodes);
        for (size_t i = 0; i < w.size(); ++i) w[i] += p * (*nodes)[child].win[i];
    }
    (*nodes)[idx].win = std::move(w);
    return idx;
}

}  // namespace

const TreeNode* EliminationTree::find(const std::vector<int>& order) const {
    for (const TreeNode& node : nodes)
        if (node.order == order) return &node;
    return nullptr;
}

std::pair<WinVector, EliminationTree> win_vector(const ElectionModel& m) {
    validate_model(m);
    ElectionModel root = collapse_full_rankings(m);
    EliminationTree tree;
    tree.n_candidates = static_cast<int>(root.candidates.size());
    build_tree(root, root.candidates, {}, 1.0, &tree.nodes);
    return {tree.nodes.front().win, std::move(tree)};
}

namespace {

// Round results keyed by the remaining-candidate set. A round's tables do not
// depend on the order the other candidates left in: grouping the original
// distributions by first surviving choice convolves the same factors as any
// chain of projections, so no intermediate models are materialized.
struct MemoEngine {
    const ElectionModel* root = nullptr;
    std::map<unsigned, std::map<int, double>> elim;
    std::map<unsigned, WinVector> wins;

    const WinVector& win_for(unsigned mask) {
        auto hit = wins.find(mask);
        if (hit != wins.end()) return hit->second;
        if (std::popcount(mask) == 1) {
            int c = std::countr_zero(mask);
            return wins.emplace(mask, indicator_win(root->candidates, c)).first->second;
        }
        std::vector<int> remaining = cands_of(mask);
        RoundTables tables = compute_round_tables(*root, remaining);
        std::map<int, double> probs = elimination_probs(tables);
        WinVector w(root->candidates.size(), 0.0);
        for (const auto& [a, p] : probs) {
            const WinVector& child = win_for(mask & ~(1u << a));
            for (size_t i = 0; i < w.size(); ++i) w[i] += p * child[i];
        }
        elim.emplace(mask, std::move(probs));
        return wins.emplace(mask, std::move(w)).first->second;
    }

    void emit(unsigned mask, const std::vector<int>& order, double path_prob,
              std::vector<TreeNode>* nodes) {
        TreeNode node;
        node.order = order;
        node.remaining = cands_of(mask);
        node.path_prob = path_prob;
        node.win = wins.at(mask);
        auto e = elim.find(mask);
        if (e != elim.end()) node.elim_probs = e->second;
        // Recursion below may reallocate *nodes, so no reference into it may
        // be held across the calls.
        nodes->push_back(std::move(node));
        if (e == elim.end()) return;
        for (const auto& [a, p] : e->second) {
            std::vector<int> child_order = order;
            child_order.push_back(a);
            emit(mask & ~(1u << a), child_order, path_prob * p, nodes);
        }
    }
};

}  // namespace

std::pair<WinVector, EliminationTree> win_vector_memoized(const ElectionModel& m) {
    validate_model(m);
    ElectionModel root = collapse_full_rankings(m);
    MemoEngine eng;
    eng.root = &root;
    unsigned full = mask_of(root.candidates);
    eng.win_for(full);
    EliminationTree tree;
    tree.n_candidates = static_cast<int>(root.candidates.size());
    eng.emit(full, {}, 1.0, &tree.nodes);
    return {tree.nodes.front().win, std::move(tree)};
}

ElectionModel model_from_table(const DistTable& t, const Election& e) {
    ElectionModel m;
    m.bucket_size = t.bucket_size;
    m.candidates = e.all_indices();
    for (size_t i = 0; i < t.names.size(); ++i) {
        Ranking r = parse_ranking(t.names[i], e);
        if (m.dists.count(r))
            throw ValidationError("duplicate ranking column '" + t.names[i] + "'");
        m.dists[r] = t.columns[i];
    }
    validate_model(m);
    return m;
}

namespace {

std::string fmt_pct(double p) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f%%", p * 100.0);
    return buf;
}

std::string win_summary(const TreeNode& node, const std::vector<int>& root_cands,
                        const Election& e) {
    std::string out;
    for (int c : node.remaining) {
        if (!out.empty()) out += ", ";
        out += e.code(c) + " " + fmt_pct(node.win[position_of(root_cands, c)]);
    }
    return out;
}

std::string node_id(const TreeNode& node, const Election& e) {
    std::string id = "r";
    for (int c : node.order) id += "_" + e.code(c);
    return id;
}

std::string dot_escape(const std::string& s) {
    std::string out;
    for (char ch : s) {
        if (ch == '"' || ch == '\\') out += '\\';
        out += ch;
    }
    return out;
}

}  // namespace

std::string tree_to_text(const EliminationTree& t, const Election& e) {
    std::ostringstream out;
    const std::vector<int>& root_cands = t.nodes.front().remaining;
    std::vector<const TreeNode*> stack;
    for (const TreeNode& node : t.nodes) {
        size_t depth = node.order.size();
        stack.resize(depth);
        out << std::string(2 * depth, ' ');
        if (depth > 0) {
            const TreeNode* parent = stack[depth - 1];
            out << "-" << e.code(node.order.back()) << " ("
                << fmt_pct(parent->elim_probs.at(node.order.back())) << ") ";
        }
        out << "[";
        for (size_t i = 0; i < node.remaining.size(); ++i)
            out << (i ? "," : "") << e.code(node.remaining[i]);
        out << "] win " << win_summary(node, root_cands, e) << "\n";
        stack.push_back(&node);
    }
    return out.str();
}

std::string tree_to_dot(const EliminationTree& t, const Election& e) {
    std::ostringstream out;
    const std::vector<int>& root_cands = t.nodes.front().remaining;
    out << "digraph elimination {\n  rankdir=LR;\n  node [shape=box];\n";
    for (const TreeNode& node : t.nodes) {
        std::string label;
        if (node.remaining.size() == 1) {
            label = e.code(node.remaining.front()) + " wins";
        } else {
            for (int c : node.remaining) {
                if (!label.empty()) label += "\\n";
                label += e.code(c) + " " + fmt_pct(node.win[position_of(root_cands, c)]);
            }
        }
        out << "  " << node_id(node, e) << " [label=\"" << dot_escape(label) << "\"];\n";
    }
    std::vector<const TreeNode*> stack;
    for (const TreeNode& node : t.nodes) {
        size_t depth = node.order.size();
        stack.resize(depth);
        if (depth > 0) {
            const TreeNode* parent = stack[depth - 1];
            char pen[32];
            std::snprintf(pen, sizeof pen, "%.2f", 0.5 + 4.0 * node.path_prob);
            out << "  " << node_id(*parent, e) << " -> " << node_id(node, e)
                << " [label=\"-" << dot_escape(e.code(node.order.back())) << " "
                << fmt_pct(node.path_prob) << "\", penwidth=" << pen << "];\n";
        }
        stack.push_back(&node);
    }
    out << "}\n";
    return out.str();
}

std::string tree_to_json(const EliminationTree& t, const Election& e) {
    nlohmann::json doc;
    const std::vector<int>& root_cands = t.nodes.front().remaining;
    nlohmann::json cands = nlohmann::json::array();
    for (int c : root_cands) cands.push_back(e.code(c));
    doc["candidates"] = cands;
    nlohmann::json nodes = nlohmann::json::array();
    for (const TreeNode& node : t.nodes) {
        nlohmann::json jn;
        nlohmann::json order = nlohmann::json::array();
        for (int c : node.order) order.push_back(e.code(c));
        jn["order"] = order;
        nlohmann::json remaining = nlohmann::json::array();
        for (int c : node.remaining) remaining.push_back(e.code(c));
        jn["remaining"] = remaining;
        jn["path_prob"] = node.path_prob;
        nlohmann::json elim = nlohmann::json::object();
        for (const auto& [c, p] : node.elim_probs) elim[e.code(c)] = p;
        jn["elim_probs"] = elim;
        nlohmann::json win = nlohmann::json::object();
        for (int c : root_cands) win[e.code(c)] = node.win[position_of(root_cands, c)];
        jn["win"] = win;
        nodes.push_back(std::move(jn));
    }
    doc["nodes"] = nodes;
    nlohmann::json win = nlohmann::json::object();
    for (int c : root_cands)
        win[e.code(c)] = t.nodes.front().win[position_of(root_cands, c)];
    doc["win"] = win;
    return doc.dump(2) + "\n";
}

}  // namespace irv
