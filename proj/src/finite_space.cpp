#include "hier/finite_space.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <set>
#include <stdexcept>

namespace hier {

std::vector<int> members(PointSet s) {
    std::vector<int> out;
    while (s) {
        out.push_back(std::countr_zero(s));
        s &= s - 1;
    }
    return out;
}

std::string set_str(PointSet s) {
    std::string r = "{";
    bool first = true;
    for (int i : members(s)) {
        if (!first) r += ",";
        r += std::to_string(i);
        first = false;
    }
    return r + "}";
}

FinitePoset::FinitePoset(int n, const std::vector<std::pair<int, int>>& cover) : n_(n) {
    if (n < 0 || n > kMaxPoints) throw std::invalid_argument("poset: size out of range");
    up_.assign(n, 0);
    for (int i = 0; i < n; ++i) up_[i] = singleton(i);
    for (auto [i, j] : cover) {
        if (i < 0 || j < 0 || i >= n || j >= n) throw std::invalid_argument("poset: cover index out of range");
        up_[i] |= singleton(j);
    }
    close();
}

void FinitePoset::close() {
    // Warshall on bit rows.
    for (int k = 0; k < n_; ++k)
        for (int i = 0; i < n_; ++i)
            if (contains(up_[i], k)) up_[i] |= up_[k];
    down_.assign(n_, 0);
    for (int i = 0; i < n_; ++i)
        for (int j : members(up_[i])) down_[j] |= singleton(i);
    for (int i = 0; i < n_; ++i)
        for (int j : members(up_[i]))
            if (j != i && contains(up_[j], i)) throw std::invalid_argument("poset: order is not antisymmetric");
}

FinitePoset FinitePoset::chain(int n) {
    std::vector<std::pair<int, int>> c;
    for (int i = 0; i + 1 < n; ++i) c.emplace_back(i, i + 1);
    return {n, c};
}

FinitePoset FinitePoset::antichain(int n) { return {n, {}}; }

FinitePoset FinitePoset::random(int n, double density, std::mt19937_64& rng) {
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::bernoulli_distribution edge(density);
    std::vector<std::pair<int, int>> c;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (edge(rng)) c.emplace_back(perm[i], perm[j]);
    return {n, c};
}

std::vector<FinitePoset> FinitePoset::enumerate_all(int n) {
    // Every poset is the closure of some subset of the pairs (i, j), i != j;
    // dedupe closures. Feasible for n <= 4 (2^12 subsets).
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) pairs.emplace_back(i, j);
    std::set<std::vector<PointSet>> seen;
    std::vector<FinitePoset> out;
    const std::uint64_t total = std::uint64_t{1} << pairs.size();
    for (std::uint64_t m = 0; m < total; ++m) {
        std::vector<std::pair<int, int>> c;
        for (std::size_t k = 0; k < pairs.size(); ++k)
            if ((m >> k) & 1U) c.push_back(pairs[k]);
        try {
            FinitePoset p(n, c);
            if (p.covers().size() != c.size()) continue;  // only cover-exact subsets
            if (seen.insert(p.up_).second) out.push_back(std::move(p));
        } catch (const std::invalid_argument&) {
        }
    }
    return out;
}

PointSet FinitePoset::up_closure(PointSet s) const {
    PointSet r = 0;
    for (int i : members(s)) r |= up_[i];
    return r;
}

PointSet FinitePoset::down_closure(PointSet s) const {
    PointSet r = 0;
    for (int i : members(s)) r |= down_[i];
    return r;
}

PointSet FinitePoset::interior(PointSet s) const {
    PointSet r = 0;
    for (int i = 0; i < n_; ++i)
        if (subset(up_[i], s)) r |= singleton(i);
    return r;
}

int FinitePoset::least() const {
    for (int i = 0; i < n_; ++i)
        if (up_[i] == carrier()) return i;
    return -1;
}

std::vector<std::pair<int, int>> FinitePoset::covers() const {
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < n_; ++i)
        for (int j : members(up_[i])) {
            if (j == i) continue;
            PointSet between = (up_[i] & down_[j]) & ~singleton(i) & ~singleton(j);
            if (between == 0) out.emplace_back(i, j);
        }
    return out;
}

std::vector<PointSet> opens(const FinitePoset& p) {
    // Upsets are exactly the complements of downsets generated by antichains;
    // enumerate by extending over points in a linear extension order.
    std::vector<int> order(p.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return std::popcount(p.down(a)) < std::popcount(p.down(b));
    });
    // Process points from the top: a point may join an upset only if its
    // strict upper set is already inside.
    std::vector<PointSet> acc{0};
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const int x = *it;
        const PointSet above = p.up(x) & ~singleton(x);
        const std::size_t k = acc.size();
        for (std::size_t i = 0; i < k; ++i)
            if (subset(above, acc[i])) acc.push_back(acc[i] | singleton(x));
    }
    std::sort(acc.begin(), acc.end());
    return acc;
}

PointSet closure(const FinitePoset& p, PointSet s) { return p.down_closure(s); }

FinitePoset adjoin_point_below(const FinitePoset& p, PointSet u) {
    if (!subset(u, p.carrier()) || !p.is_open(u))
        throw std::invalid_argument("adjoin_point_below: set is not open");
    if (p.size() + 1 > kMaxPoints) throw std::invalid_argument("adjoin_point_below: poset too large");
    std::vector<std::pair<int, int>> c;
    for (int i = 0; i < p.size(); ++i)
        for (int j : members(p.up(i)))
            if (j != i) c.emplace_back(i, j);
    const int bot = p.size();
    for (int j : members(u)) c.emplace_back(bot, j);
    return {p.size() + 1, c};
}

PointSet preimage(const std::vector<int>& f, PointSet s) {
    PointSet r = 0;
    for (std::size_t i = 0; i < f.size(); ++i)
        if (contains(s, f[i])) r |= singleton(static_cast<int>(i));
    return r;
}

bool is_monotone(const FinitePoset& dom, const FinitePoset& cod, const std::vector<int>& f) {
    for (int i = 0; i < dom.size(); ++i)
        for (int j : members(dom.up(i)))
            if (!cod.leq(f[i], f[j])) return false;
    return true;
}

}  // namespace hier
