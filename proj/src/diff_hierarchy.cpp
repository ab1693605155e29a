#include "hier/diff_hierarchy.hpp"

#include <algorithm>
#include <bit>
#include <set>

namespace hier {

bool eval_diff(const DiffCode& code, int x) {
    return code.eval([x](PointSet s) { return contains(s, x); });
}

PointSet eval_diff_set(const DiffCode& code, const FinitePoset& p) {
    PointSet out = 0;
    for (int x = 0; x < p.size(); ++x)
        if (eval_diff(code, x)) out |= singleton(x);
    return out;
}

DiffCode make_code(const std::vector<PointSet>& sets, Polarity pol) {
    DiffCode c;
    c.alpha = Ordinal(sets.size());
    c.polarity = pol;
    for (std::size_t i = 0; i < sets.size(); ++i) c.entries.push_back({Ordinal(i), sets[i]});
    return c;
}

DiffCode normalize_monotone(const DiffCode& code) {
    DiffCode out = code;
    PointSet acc = 0;
    for (auto& e : out.entries) {
        acc |= e.set;
        e.set = acc;
    }
    return out;
}

DiffCode pad(const DiffCode& code, const Ordinal& alpha2) {
    if (alpha2 < code.alpha) throw std::invalid_argument("pad: target level below code level");
    DiffCode out = code;
    out.alpha = alpha2;
    if (!code.alpha.same_parity(alpha2))
        for (auto& e : out.entries) e.index = e.index.succ();
    return out;
}

DiffCode embed_co(const DiffCode& code, PointSet carrier) {
    if (code.polarity != Polarity::CoD) throw std::invalid_argument("embed_co: expects a co-D code");
    DiffCode out = code;
    out.entries.push_back({code.alpha, carrier});
    out.alpha = code.alpha.succ();
    out.polarity = Polarity::D;
    return out;
}

int height(const FinitePoset& p) {
    // Longest chain by DP over points sorted by down-set size.
    std::vector<int> order(p.size());
    for (int i = 0; i < p.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return std::popcount(p.down(a)) < std::popcount(p.down(b)); });
    std::vector<int> best(p.size(), 1);
    int h = 0;
    for (int x : order) {
        for (int y : members(p.down(x)))
            if (y != x) best[x] = std::max(best[x], best[y] + 1);
        h = std::max(h, best[x]);
    }
    return h;
}

namespace {

// Least n such that some monotone sequence of n opens has D_n-denotation
// equal to `target`, found by breadth-first growth of (denotation, top) pairs.
// D_{n+1}(A_0..A_n) = A_n \ D_n(A_0..A_{n-1}) for monotone sequences.
int least_level(PointSet target, const std::vector<PointSet>& ops, int max_level, std::size_t limit) {
    std::set<std::pair<PointSet, PointSet>> layer{{0, 0}};
    for (int n = 0; n <= max_level; ++n) {
        for (const auto& [den, top] : layer)
            if (den == target) return n;
        std::set<std::pair<PointSet, PointSet>> next;
        for (const auto& [den, top] : layer)
            for (PointSet u : ops)
                if (subset(top, u)) {
                    next.emplace(u & ~den, u);
                    if (next.size() > limit) throw ResourceLimit("level_bruteforce: state limit exceeded");
                }
        layer = std::move(next);
    }
    throw std::logic_error("level_bruteforce: no level found within height bound");
}

}  // namespace

LevelPair level_bruteforce(PointSet a, const FinitePoset& p, std::size_t state_limit) {
    const auto ops = opens(p);
    const int bound = height(p) + 1;
    return {least_level(a, ops, bound, state_limit), least_level(p.complement(a), ops, bound, state_limit)};
}

}  // namespace hier
