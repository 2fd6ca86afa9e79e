#include "irv/domain.h"

#include <algorithm>
#include <set>

#include "irv/errors.h"

namespace irv {

std::optional<int> Election::index_of(const std::string& code) const {
    for (const auto& c : candidates)
        if (c.code == code) return c.index;
    return std::nullopt;
}

std::vector<int> Election::all_indices() const {
    std::vector<int> v(candidates.size());
    for (size_t i = 0; i < v.size(); ++i) v[i] = static_cast<int>(i);
    return v;
}

Election make_election(const std::vector<std::string>& specs) {
    if (specs.empty()) throw ValidationError("election needs at least one candidate");
    Election e;
    std::set<std::string> seen;
    for (const auto& spec : specs) {
        Candidate c;
        c.index = static_cast<int>(e.candidates.size());
        auto eq = spec.find('=');
        if (eq == std::string::npos) {
            c.code = spec;
            c.display_name = spec;
        } else {
            c.code = spec.substr(0, eq);
            c.display_name = spec.substr(eq + 1);
        }
        if (c.code.empty()) throw ValidationError("empty candidate code in '" + spec + "'");
        if (!seen.insert(c.code).second)
            throw ValidationError("duplicate candidate code '" + c.code + "'");
        e.candidates.push_back(std::move(c));
    }
    return e;
}

bool Ranking::operator<(const Ranking& o) const {
    if (entries.size() != o.entries.size()) return entries.size() < o.entries.size();
    return entries < o.entries;
}

std::optional<int> first_choice(const Ranking& r) {
    if (r.empty()) return std::nullopt;
    return r.entries.front();
}

int first_choice_among(const Ranking& r, unsigned remaining_mask) {
    for (int c : r.entries)
        if (remaining_mask & (1u << c)) return c;
    return -1;
}

Ranking remove_candidate(const Ranking& r, int a) {
    Ranking out;
    out.entries.reserve(r.entries.size());
    for (int c : r.entries)
        if (c != a) out.entries.push_back(c);
    return out;
}

namespace {

void extend(const std::vector<int>& cands, std::vector<bool>& used, Ranking& cur,
            int want_len, std::vector<Ranking>& out) {
    if (cur.length() == want_len) {
        out.push_back(cur);
        return;
    }
    for (size_t i = 0; i < cands.size(); ++i) {
        if (used[i]) continue;
        used[i] = true;
        cur.entries.push_back(cands[i]);
        extend(cands, used, cur, want_len, out);
        cur.entries.pop_back();
        used[i] = false;
    }
}

}  // namespace

std::vector<Ranking> enumerate_rankings(const std::vector<int>& cands, int max_len) {
    if (cands.empty()) throw ValidationError("enumerate_rankings: empty candidate set");
    std::vector<int> sorted = cands;
    std::sort(sorted.begin(), sorted.end());
    int n = static_cast<int>(sorted.size());
    int cap = (max_len < 0 || max_len > n) ? n : max_len;

    std::vector<Ranking> out;
    std::vector<bool> used(sorted.size(), false);
    Ranking cur;
    for (int len = 0; len <= cap; ++len) extend(sorted, used, cur, len, out);
    return out;
}

std::string format_ranking(const Ranking& r, const Election& e) {
    if (r.empty()) return "-";
    std::string s;
    for (int c : r.entries) s += e.code(c);
    return s;
}

Ranking parse_ranking(const std::string& text, const Election& e) {
    Ranking r;
    if (text.empty() || text == "-") return r;

    // Codes tried longest first so that multi-character codes win over their
    // prefixes.
    std::vector<const Candidate*> by_len;
    for (const auto& c : e.candidates) by_len.push_back(&c);
    std::stable_sort(by_len.begin(), by_len.end(),
                     [](const Candidate* a, const Candidate* b) {
                         return a->code.size() > b->code.size();
                     });

    size_t pos = 0;
    while (pos < text.size()) {
        const Candidate* hit = nullptr;
        for (const Candidate* c : by_len) {
            if (text.compare(pos, c->code.size(), c->code) == 0) {
                hit = c;
                break;
            }
        }
        if (!hit) throw ParseError("unknown candidate code in ranking '" + text + "'");
        if (std::find(r.entries.begin(), r.entries.end(), hit->index) != r.entries.end())
            throw ParseError("repeated candidate in ranking '" + text + "'");
        r.entries.push_back(hit->index);
        pos += hit->code.size();
    }
    return r;
}

}  // namespace irv
