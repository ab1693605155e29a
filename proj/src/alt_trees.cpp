#include "hier/alt_trees.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <stdexcept>

namespace hier {

WfTree::WfTree() { nodes_.push_back(Node{}); }

WfTree WfTree::from_sequences(const std::vector<std::vector<std::uint64_t>>& seqs) {
    WfTree t;
    for (const auto& s : seqs) {
        int cur = 0;
        for (auto v : s) cur = t.child(cur, v);
    }
    return t;
}

std::optional<int> WfTree::find_child(int parent, std::uint64_t last) const {
    for (int c : nodes_[parent].children)
        if (nodes_[c].last == last) return c;
    return std::nullopt;
}

int WfTree::child(int parent, std::uint64_t last) {
    if (auto c = find_child(parent, last)) return *c;
    const int id = size();
    nodes_.push_back(Node{parent, last, nodes_[parent].depth + 1, {}});
    auto& ch = nodes_[parent].children;
    auto pos = std::lower_bound(ch.begin(), ch.end(), last,
                                [&](int n, std::uint64_t v) { return nodes_[n].last < v; });
    ch.insert(pos, id);
    return id;
}

std::vector<std::uint64_t> WfTree::sequence(int i) const {
    std::vector<std::uint64_t> s;
    for (; i > 0; i = nodes_[i].parent) s.push_back(nodes_[i].last);
    std::reverse(s.begin(), s.end());
    return s;
}

std::vector<std::vector<std::uint64_t>> WfTree::sequences() const {
    std::vector<std::vector<std::uint64_t>> out;
    for (int i = 0; i < size(); ++i) out.push_back(sequence(i));
    return out;
}

std::vector<int> WfTree::ranks() const {
    std::vector<int> r(nodes_.size(), 0);
    // Children always have larger ids than their parent.
    for (int i = size() - 1; i > 0; --i) {
        const int par = nodes_[i].parent;
        r[par] = std::max(r[par], r[i] + 1);
    }
    return r;
}

std::vector<int> WfTree::kleene_brouwer() const {
    std::vector<int> out;
    out.reserve(nodes_.size());
    // Iterative post-order.
    std::vector<std::pair<int, std::size_t>> stack{{0, 0}};
    while (!stack.empty()) {
        auto& [n, k] = stack.back();
        if (k < nodes_[n].children.size()) {
            const int c = nodes_[n].children[k++];
            stack.emplace_back(c, 0);
        } else {
            out.push_back(n);
            stack.pop_back();
        }
    }
    return out;
}

int tree_rank(const WfTree& t) { return t.ranks()[0]; }

bool kb_less(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
    const auto n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i)
        if (a[i] != b[i]) return a[i] < b[i];
    // Prefix-comparable: the longer sequence comes first.
    return a.size() > b.size();
}

bool is_alternating(const LabeledAltTree& f, const FinitePoset& p) {
    if (static_cast<int>(f.labels.size()) != f.tree.size()) return false;
    if (contains(f.target, f.labels[0]) != (f.root_sign == 1)) return false;
    for (int i = 1; i < f.tree.size(); ++i) {
        const int par = f.tree.node(i).parent;
        const int u = f.labels[par];
        const int v = f.labels[i];
        if (!p.lt(u, v)) return false;
        if (contains(f.target, u) == contains(f.target, v)) return false;
    }
    return true;
}

Pruned prune_to_rank(const LabeledAltTree& f, int beta, int eps) {
    const auto r = f.tree.ranks();
    if (beta < 0 || beta >= r[0]) throw std::invalid_argument("prune_to_rank: beta must be below the tree rank");
    // Longest branch: follow children whose rank is one less.
    std::vector<int> branch{0};
    while (r[branch.back()] > 0) {
        for (int c : f.tree.node(branch.back()).children)
            if (r[c] + 1 == r[branch.back()]) {
                branch.push_back(c);
                break;
            }
    }
    auto sign = [&](int node) { return contains(f.target, f.labels[node]) ? 1 : 0; };
    const std::size_t start = sign(branch[0]) == eps ? 0 : 1;  // drop the root if needed
    Pruned out;
    out.tree.target = f.target;
    out.tree.root_sign = eps;
    int cur = out.tree.tree.root();
    out.tree.labels.push_back(f.labels[branch[start]]);
    out.node_map.push_back(branch[start]);
    for (int k = 1; k <= beta; ++k) {
        cur = out.tree.tree.child(cur, f.tree.node(branch[start + k]).last);
        out.tree.labels.push_back(f.labels[branch[start + k]]);
        out.node_map.push_back(branch[start + k]);
    }
    return out;
}

std::vector<int> alt_heights(PointSet a, const FinitePoset& p) {
    std::vector<int> order(p.size());
    for (int i = 0; i < p.size(); ++i) order[i] = i;
    // Points higher up have smaller up-sets; handle them first.
    std::sort(order.begin(), order.end(),
              [&](int x, int y) { return std::popcount(p.up(x)) < std::popcount(p.up(y)); });
    std::vector<int> h(p.size(), 0);
    for (int x : order)
        for (int y : members(p.up(x)))
            if (y != x && contains(a, x) != contains(a, y)) h[x] = std::max(h[x], h[y] + 1);
    return h;
}

std::optional<int> max_alt_rank(PointSet a, const FinitePoset& p, int eps) {
    const auto h = alt_heights(a, p);
    std::optional<int> best;
    for (int x = 0; x < p.size(); ++x)
        if (contains(a, x) == (eps == 1)) best = std::max(best.value_or(0), h[x]);
    return best;
}

std::vector<int> alt_chain(PointSet a, const FinitePoset& p, int eps) {
    const auto h = alt_heights(a, p);
    int start = -1;
    for (int x = 0; x < p.size(); ++x)
        if (contains(a, x) == (eps == 1) && (start < 0 || h[x] > h[start])) start = x;
    std::vector<int> chain;
    if (start < 0) return chain;
    chain.push_back(start);
    while (h[chain.back()] > 0) {
        const int x = chain.back();
        for (int y : members(p.up(x)))
            if (y != x && contains(a, x) != contains(a, y) && h[y] + 1 == h[x]) {
                chain.push_back(y);
                break;
            }
    }
    return chain;
}

LevelPair alt_levels(PointSet a, const FinitePoset& p) {
    const auto s = max_alt_rank(a, p, 1);
    const auto c = max_alt_rank(a, p, 0);
    return {s ? *s + 1 : 0, c ? *c + 1 : 0};
}

LabeledAltTree alternating_tree(PointSet a, const FinitePoset& p, int b, std::size_t node_limit) {
    LabeledAltTree f;
    f.target = a;
    f.root_sign = contains(a, b) ? 1 : 0;
    f.labels.push_back(b);
    std::function<void(int)> grow = [&](int node) {
        const int x = f.labels[node];
        for (int y : members(p.up(x))) {
            if (y == x || contains(a, x) == contains(a, y)) continue;
            const int c = f.tree.child(node, static_cast<std::uint64_t>(y));
            f.labels.push_back(y);
            if (static_cast<std::size_t>(f.tree.size()) > node_limit)
                throw ResourceLimit("alternating_tree: node limit exceeded");
            grow(c);
        }
    };
    grow(0);
    return f;
}

DiffCode diff_code_from_trees(PointSet a, const FinitePoset& p) {
    DiffCode code;
    const auto top = max_alt_rank(a, p, 1);
    if (!top) return code;  // a is empty: D_0
    const int alpha = *top + 1;
    code.alpha = Ordinal(static_cast<std::uint64_t>(alpha));
    std::vector<PointSet> level(alpha, 0);
    for (int b = 0; b < p.size(); ++b) {
        const auto f = alternating_tree(a, p, b);
        const auto r = f.tree.ranks();
        for (int s = 0; s < f.tree.size(); ++s) {
            const int x = f.labels[s];
            for (int beta = r[s]; beta < alpha; ++beta)
                if (contains(a, x) == ((beta % 2) != (alpha % 2))) level[beta] |= p.up(x);
        }
    }
    for (int beta = 0; beta < alpha; ++beta)
        code.entries.push_back({Ordinal(static_cast<std::uint64_t>(beta)), level[beta]});
    return code;
}

AuditReport ambiguity_audit(const FinitePoset& p, int n_max) {
    if (p.size() > 16) throw ResourceLimit("ambiguity_audit: too many subsets");
    AuditReport rep;
    rep.has_least = p.least() >= 0;
    const std::uint64_t total = std::uint64_t{1} << p.size();
    for (std::uint64_t a = 0; a < total; ++a) {
        const auto lv = alt_levels(a, p);
        ++rep.checked_sets;
        for (int n = 0; n <= n_max; ++n) {
            if (rep.has_least) {
                const bool lhs = lv.sigma <= n && lv.pi <= n;
                const bool rhs = lv.sigma < n || lv.pi < n;
                if (lhs != rhs) rep.violations.push_back({n, "least", a});
            }
            if (n >= 1) {
                const bool lhs = lv.sigma <= n + 1 && lv.pi <= n + 1;
                const bool rhs = lv.sigma <= n || lv.pi <= n;
                if (lhs != rhs) rep.violations.push_back({n, "successor", a});
            }
        }
    }
    return rep;
}

namespace {

std::vector<std::vector<int>> words_upto(int alphabet, int depth, bool with_root) {
    std::vector<std::vector<int>> out;
    std::vector<std::vector<int>> layer{{}};
    if (with_root) out.push_back({});
    for (int d = 1; d <= depth; ++d) {
        std::vector<std::vector<int>> next;
        for (const auto& w : layer)
            for (int c = 0; c < alphabet; ++c) {
                auto v = w;
                v.push_back(c);
                next.push_back(v);
            }
        out.insert(out.end(), next.begin(), next.end());
        layer = std::move(next);
    }
    return out;
}

}  // namespace

FinitePoset prefix_poset(int alphabet, int depth, bool with_root) {
    const auto ws = words_upto(alphabet, depth, with_root);
    std::vector<std::pair<int, int>> cover;
    for (std::size_t i = 0; i < ws.size(); ++i)
        for (std::size_t j = 0; j < ws.size(); ++j)
            if (ws[j].size() == ws[i].size() + 1 && std::equal(ws[i].begin(), ws[i].end(), ws[j].begin()))
                cover.emplace_back(static_cast<int>(i), static_cast<int>(j));
    return {static_cast<int>(ws.size()), cover};
}

PointSet prefix_cone(int alphabet, int depth, bool with_root, int letter) {
    const auto ws = words_upto(alphabet, depth, with_root);
    PointSet s = 0;
    for (std::size_t i = 0; i < ws.size(); ++i)
        if (!ws[i].empty() && ws[i][0] == letter) s |= singleton(static_cast<int>(i));
    return s;
}

}  // namespace hier
