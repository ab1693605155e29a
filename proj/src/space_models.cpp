#include "hier/space_models.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

#include <json.hpp>

namespace hier {

namespace {

std::uint64_t bits_from(int from) {
    if (from < 0 || from >= 64) return 0;
    return ~std::uint64_t{0} << from;
}

int top_bit(std::uint64_t s) { return s == 0 ? -1 : 63 - std::countl_zero(s); }

const SetPoint* as_set(const Point& x) { return std::get_if<SetPoint>(&x); }

bool is_prefix(const std::vector<int>& p, const std::vector<int>& w) {
    return p.size() <= w.size() && std::equal(p.begin(), p.end(), w.begin());
}

}  // namespace

Union make_union(std::vector<Index> ids) {
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
}

int WordPoint::at(std::size_t i) const {
    if (i < prefix.size()) return prefix[i];
    return cycle[(i - prefix.size()) % cycle.size()];
}

std::vector<int> WordPoint::first(std::size_t n) const {
    std::vector<int> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = at(i);
    return out;
}

std::uint64_t point_bits(const SetPoint& x) { return x.core | bits_from(x.tail_from); }

std::string point_str(const Point& x) {
    std::ostringstream os;
    if (auto* i = std::get_if<int>(&x)) {
        os << *i;
    } else if (auto* s = as_set(x)) {
        os << set_str(s->core);
        if (s->tail_from >= 0) os << "+[" << s->tail_from << ",inf)";
    } else {
        const auto& w = std::get<WordPoint>(x);
        for (int c : w.prefix) os << c;
        os << "(";
        for (int c : w.cycle) os << c;
        os << ")^w";
    }
    return os.str();
}

// ---- SpaceModel defaults -------------------------------------------------

bool SpaceModel::member(const Point& x, const Union& u) const {
    return std::any_of(u.begin(), u.end(), [&](Index i) { return member(x, i); });
}

bool SpaceModel::subset(const Union& u, const Union& v) const {
    return std::all_of(u.begin(), u.end(), [&](Index a) {
        return std::any_of(v.begin(), v.end(), [&](Index b) { return subset(a, b); });
    });
}

bool SpaceModel::union_ll_at(const Union& c, Index d, std::uint64_t t) const {
    if (d >= t) return false;
    for (Index u = 0; u < t; ++u) {
        if (!subset(Union{u}, c)) continue;
        for (Index v = 0; v < t; ++v)
            if (ll(u, v) && subset(d, v)) return true;
    }
    return false;
}

std::uint64_t SpaceModel::for_each_successor(Index u, std::uint64_t limit,
                                             const std::function<bool(Index)>& visit) const {
    Index end = basis_size().value_or(limit);
    std::uint64_t n = 0;
    for (Index v = 0; v < end && n < limit; ++v) {
        ++n;
        if (ll(u, v) && visit(v)) break;
    }
    return n;
}

void SpaceModel::for_each_containing(const Point& x, Index bound,
                                     const std::function<bool(Index)>& visit) const {
    Index end = std::min(bound, basis_size().value_or(bound));
    for (Index i = 0; i < end; ++i)
        if (member(x, i) && visit(i)) return;
}

std::optional<Index> SpaceModel::least_inside(const Point& x, const Union& u, Index bound) const {
    Index end = std::min(bound, basis_size().value_or(bound));
    for (Index i = 0; i < end; ++i)
        if (member(x, i) && subset(Union{i}, u)) return i;
    return std::nullopt;
}

std::optional<Index> SpaceModel::least_successor(Index c, const Point& x, Index bound) const {
    Index end = std::min(bound, basis_size().value_or(bound));
    for (Index i = 0; i < end; ++i)
        if (ll(c, i) && member(x, i)) return i;
    return std::nullopt;
}

Point SpaceModel::chain_point(const std::vector<Index>&) const {
    throw ModelError(kind() + ": no limit construction");
}

// ---- FinitePosetModel ----------------------------------------------------

FinitePosetModel::FinitePosetModel(FinitePoset p) : p_(std::move(p)) {
    std::vector<int> order(p_.size());
    for (int i = 0; i < p_.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return std::popcount(p_.up(a)) < std::popcount(p_.up(b));
    });
    for (int b : order) basis_.push_back(p_.up(b));
}

FinitePosetModel::FinitePosetModel(FinitePoset p, std::vector<PointSet> basis)
    : p_(std::move(p)), basis_(std::move(basis)) {
    for (PointSet s : basis_)
        if (!p_.is_open(s)) throw std::invalid_argument("basis element " + set_str(s) + " is not open");
}

PointSet FinitePosetModel::open_set(const Union& u) const {
    PointSet s = 0;
    for (Index i : u) s |= basis_.at(i);
    return s;
}

Union FinitePosetModel::union_of(PointSet s) const {
    Union u;
    for (Index i = 0; i < basis_.size(); ++i)
        if (basis_[i] != 0 && hier::subset(basis_[i], s)) u.push_back(i);
    return u;
}

std::string FinitePosetModel::describe(Index i) const { return set_str(basis_.at(i)); }

bool FinitePosetModel::valid_point(const Point& x) const {
    auto* i = std::get_if<int>(&x);
    return i && *i >= 0 && *i < p_.size();
}

bool FinitePosetModel::member(const Point& x, Index i) const {
    auto* e = std::get_if<int>(&x);
    return e && i < basis_.size() && contains(basis_[i], *e);
}

bool FinitePosetModel::subset(Index a, Index b) const { return hier::subset(basis_.at(a), basis_.at(b)); }

bool FinitePosetModel::subset(const Union& u, const Union& v) const {
    return hier::subset(open_set(u), open_set(v));
}

bool FinitePosetModel::ll(Index u, Index v) const {
    return basis_.at(v) != 0 && hier::subset(basis_[v], basis_.at(u));
}

std::uint64_t FinitePosetModel::next_event(Index, std::uint64_t t) const {
    return t < basis_.size() ? t + 1 : ~std::uint64_t{0};
}

bool FinitePosetModel::union_ll_at(const Union& c, Index d, std::uint64_t t) const {
    Index end = std::min<std::uint64_t>(t, basis_.size());
    if (d >= end) return false;
    PointSet cs = open_set(c);
    for (Index u = 0; u < end; ++u) {
        if (!hier::subset(basis_[u], cs)) continue;
        for (Index v = 0; v < end; ++v)
            if (ll(u, v) && hier::subset(basis_[d], basis_[v])) return true;
    }
    return false;
}

Point FinitePosetModel::some_point(Index i) const {
    PointSet s = basis_.at(i);
    for (int e : members(s))
        if ((p_.down(e) & s) == singleton(e)) return e;
    throw ModelError("empty basic open " + std::to_string(i));
}

Point FinitePosetModel::random_point(Index i, std::mt19937_64& rng) const {
    auto ms = members(basis_.at(i));
    if (ms.empty()) throw ModelError("empty basic open " + std::to_string(i));
    return ms[std::uniform_int_distribution<std::size_t>(0, ms.size() - 1)(rng)];
}

Index FinitePosetModel::random_refinement(Index i, std::mt19937_64& rng) const {
    std::vector<Index> cand;
    for (Index j = 0; j < basis_.size(); ++j)
        if (ll(i, j)) cand.push_back(j);
    if (cand.empty()) return i;
    return cand[std::uniform_int_distribution<std::size_t>(0, cand.size() - 1)(rng)];
}

Point FinitePosetModel::chain_point(const std::vector<Index>& chain) const {
    if (chain.empty()) throw ModelError("empty chain");
    Point x = some_point(chain.back());
    for (std::size_t k = 0; k < chain.size(); ++k)
        if (!member(x, chain[k])) throw ModelError("chain point misses element " + std::to_string(k));
    return x;
}

// ---- PowerSetModel -------------------------------------------------------

std::string PowerSetModel::describe(Index i) const { return "O" + set_str(i); }

bool PowerSetModel::valid_point(const Point& x) const {
    auto* s = as_set(x);
    return s && s->tail_from >= -1 && s->tail_from <= 63;
}

bool PowerSetModel::member(const Point& x, Index i) const {
    auto* s = as_set(x);
    return s && (i & ~point_bits(*s)) == 0;
}

std::uint64_t PowerSetModel::for_each_successor(Index u, std::uint64_t limit,
                                                const std::function<bool(Index)>& visit) const {
    // supersets of u by increasing value: u | s for submasks s of ~u
    const std::uint64_t free = ~u;
    std::uint64_t s = 0, n = 0;
    do {
        if (n >= limit) break;
        ++n;
        if (visit(u | s)) break;
        s = (s - free) & free;
    } while (s != 0);
    return n;
}

void PowerSetModel::for_each_containing(const Point& x, Index bound,
                                        const std::function<bool(Index)>& visit) const {
    auto* p = as_set(x);
    if (!p) return;
    const std::uint64_t b = point_bits(*p);
    std::uint64_t s = 0;
    do {
        if (s >= bound || visit(s)) return;
        s = (s - b) & b;
    } while (s != 0);
}

std::optional<Index> PowerSetModel::least_inside(const Point& x, const Union& u, Index) const {
    std::optional<Index> best;
    for (Index a : u)
        if (member(x, a) && (!best || a < *best)) best = a;
    return best;
}

std::optional<Index> PowerSetModel::least_successor(Index c, const Point& x, Index) const {
    if (!member(x, c)) return std::nullopt;
    return c;
}

Point PowerSetModel::some_point(Index i) const { return SetPoint{i, -1}; }

Point PowerSetModel::random_point(Index i, std::mt19937_64& rng) const {
    std::uint64_t extra = rng() & rng() & 0xffff;
    SetPoint x{i | extra, -1};
    if (rng() % 4 == 0) x.tail_from = 16 + static_cast<int>(rng() % 40);
    return x;
}

Index PowerSetModel::random_refinement(Index i, std::mt19937_64& rng) const {
    return i | (std::uint64_t{1} << (rng() % 16)) | (rng() % 2 ? std::uint64_t{1} << (rng() % 16) : 0);
}

Point PowerSetModel::chain_point(const std::vector<Index>& chain) const {
    SetPoint x;
    for (std::size_t k = 0; k + 1 < chain.size(); ++k)
        if (!ll(chain[k], chain[k + 1]))
            throw ModelError("chain is not <<-increasing at step " + std::to_string(k));
    for (Index a : chain) x.core |= a;
    return x;
}

// ---- ClauseModel ---------------------------------------------------------

ClauseModel::ClauseModel(std::vector<ClauseRow> rows, bool infinite_points)
    : rows_(std::move(rows)), infinite_(infinite_points) {}

ClauseModel ClauseModel::pinf() {
    std::vector<ClauseRow> rows(64);
    for (int n = 0; n < 64; ++n)
        for (int j = n; j < 64; ++j) rows[n].witnesses.push_back(std::uint64_t{1} << j);
    return ClauseModel(std::move(rows), true);
}

bool ClauseModel::solved_by(std::size_t n, std::uint64_t bits) const {
    const auto& w = rows_[n].witnesses;
    return std::any_of(w.begin(), w.end(), [&](std::uint64_t g) { return (g & ~bits) == 0; });
}

ClauseStatus ClauseModel::clause_status(Index u, std::size_t n) const {
    if (n >= rows_.size()) throw std::out_of_range("clause row " + std::to_string(n));
    if ((rows_[n].alpha & ~u) != 0) return ClauseStatus::NotAClause;
    return solved_by(n, u) ? ClauseStatus::Solved : ClauseStatus::Unsolved;
}

std::optional<std::size_t> ClauseModel::n_u(Index u) const {
    for (std::size_t n = 0; n < rows_.size(); ++n)
        if (clause_status(u, n) == ClauseStatus::Unsolved) return n;
    return std::nullopt;
}

bool ClauseModel::clause_ll(Index u, Index v) const {
    if ((u & ~v) != 0) return false;  // V must lie inside U
    auto n = n_u(u);
    if (!n) return true;
    if (solved_by(*n, v)) return true;
    for (std::size_t m = 0; m < *n; ++m) {
        if ((rows_[m].alpha & ~u) == 0) continue;
        if ((rows_[m].alpha & ~v) == 0 && solved_by(m, v)) return true;
    }
    return false;
}

Index ClauseModel::refine_witness(const Point& x, Index u) const {
    auto* p = as_set(x);
    if (!p || !member(x, u)) throw ModelError("refine_witness: point " + point_str(x) + " not in " + describe(u));
    auto n = n_u(u);
    if (!n) return u;
    const std::uint64_t bits = point_bits(*p);
    for (std::uint64_t g : rows_[*n].witnesses)
        if ((g & ~bits) == 0) return u | g;
    throw ModelError("refine_witness: point fails clause " + std::to_string(*n));
}

std::optional<std::size_t> ClauseModel::violated_row(const SetPoint& x) const {
    const std::uint64_t bits = point_bits(x);
    for (std::size_t n = 0; n < rows_.size(); ++n)
        if ((rows_[n].alpha & ~bits) == 0 && !solved_by(n, bits)) return n;
    return std::nullopt;
}

SetPoint ClauseModel::chain_limit(const std::vector<Index>& chain) const {
    for (std::size_t k = 0; k + 1 < chain.size(); ++k)
        if (!clause_ll(chain[k], chain[k + 1]))
            throw ModelError("chain is not <<-increasing at step " + std::to_string(k));
    SetPoint x;
    for (Index a : chain) x.core |= a;
    if (infinite_) {
        x.tail_from = std::min(top_bit(x.core) + 1, 63);
    } else {
        // finite prefix of the chain: finish the clauses it leaves open
        for (int guard = 0; guard <= 64; ++guard) {
            auto r = violated_row(x);
            if (!r) break;
            if (rows_[*r].witnesses.empty())
                throw ModelError("clause " + std::to_string(*r) + " has no witness");
            x.core |= rows_[*r].witnesses.front();
        }
    }
    if (auto r = violated_row(x)) throw ModelError("limit point violates clause " + std::to_string(*r));
    for (std::size_t k = 0; k < chain.size(); ++k)
        if (!member(x, chain[k])) throw ModelError("limit point misses element " + std::to_string(k));
    return x;
}

std::string ClauseModel::describe(Index i) const { return "O" + set_str(i); }

bool ClauseModel::valid_point(const Point& x) const {
    auto* s = as_set(x);
    if (!s || s->tail_from < -1 || s->tail_from > 63) return false;
    if (infinite_ && s->tail_from < 0) return false;
    return !violated_row(*s);
}

bool ClauseModel::member(const Point& x, Index i) const {
    auto* s = as_set(x);
    return s && (i & ~point_bits(*s)) == 0;
}

std::uint64_t ClauseModel::for_each_successor(Index u, std::uint64_t limit,
                                              const std::function<bool(Index)>& visit) const {
    const std::uint64_t free = ~u;
    std::uint64_t s = 0, n = 0;
    do {
        if (n >= limit) break;
        ++n;
        if (clause_ll(u, u | s) && visit(u | s)) break;
        s = (s - free) & free;
    } while (s != 0);
    return n;
}

void ClauseModel::for_each_containing(const Point& x, Index bound,
                                      const std::function<bool(Index)>& visit) const {
    auto* p = as_set(x);
    if (!p) return;
    const std::uint64_t b = point_bits(*p);
    std::uint64_t s = 0;
    do {
        if (s >= bound || visit(s)) return;
        s = (s - b) & b;
    } while (s != 0);
}

std::optional<Index> ClauseModel::least_inside(const Point& x, const Union& u, Index) const {
    std::optional<Index> best;
    for (Index a : u)
        if (member(x, a) && (!best || a < *best)) best = a;
    return best;
}

std::optional<Index> ClauseModel::least_successor(Index c, const Point& x, Index) const {
    auto* p = as_set(x);
    if (!p || !member(x, c)) return std::nullopt;
    const std::uint64_t bits = point_bits(*p);
    // Every V with c << V contains one of these minimal candidates, and each
    // candidate is itself a successor, so the numeric minimum is the least.
    std::optional<Index> best;
    auto offer = [&](std::uint64_t v) {
        if ((v & ~bits) == 0 && (!best || v < *best)) best = v;
    };
    auto n = n_u(c);
    if (!n) return c;
    for (std::uint64_t g : rows_[*n].witnesses) offer(c | g);
    for (std::size_t m = 0; m < *n; ++m) {
        if ((rows_[m].alpha & ~c) == 0) continue;
        for (std::uint64_t g : rows_[m].witnesses) offer(c | rows_[m].alpha | g);
    }
    return best;
}

Point ClauseModel::some_point(Index i) const { return chain_limit({i}); }

Point ClauseModel::random_point(Index i, std::mt19937_64& rng) const {
    SetPoint x{i | (rng() & rng() & 0xffff), -1};
    if (infinite_) {
        x.tail_from = std::min(63, std::max(top_bit(x.core) + 1, 0) + static_cast<int>(rng() % 8));
        return x;
    }
    return chain_limit({x.core});
}

Index ClauseModel::random_refinement(Index i, std::mt19937_64& rng) const {
    Point x = random_point(i, rng);
    return refine_witness(x, i);
}

Point ClauseModel::chain_point(const std::vector<Index>& chain) const { return chain_limit(chain); }

// ---- CylinderModel -------------------------------------------------------

namespace {

// number of words of length < len over k letters, or nullopt on overflow
std::optional<std::uint64_t> words_below(int k, int len) {
    unsigned __int128 total = 0, pw = 1;
    for (int j = 0; j < len; ++j) {
        total += pw;
        pw *= k;
        if (total > ~std::uint64_t{0}) return std::nullopt;
    }
    return static_cast<std::uint64_t>(total);
}

}  // namespace

CylinderModel::CylinderModel(int alphabet) : k_(alphabet) {
    if (alphabet < 2 || alphabet > 16) throw std::invalid_argument("cylinder alphabet must be in 2..16");
    max_len_ = 0;
    while (words_below(k_, max_len_ + 2)) ++max_len_;
}

std::vector<int> CylinderModel::word(Index i) const {
    int len = 0;
    std::uint64_t off = 0, pw = 1;
    while (len < max_len_ && i - off >= pw) {
        off += pw;
        pw *= k_;
        ++len;
    }
    std::uint64_t v = i - off;
    std::vector<int> w(len);
    for (int j = len - 1; j >= 0; --j) {
        w[j] = static_cast<int>(v % k_);
        v /= k_;
    }
    return w;
}

Index CylinderModel::index(const std::vector<int>& w) const {
    if (static_cast<int>(w.size()) > max_len_) throw std::out_of_range("cylinder word too long");
    std::uint64_t v = 0;
    for (int c : w) {
        if (c < 0 || c >= k_) throw std::invalid_argument("letter outside the alphabet");
        v = v * k_ + c;
    }
    return *words_below(k_, static_cast<int>(w.size())) + v;
}

std::string CylinderModel::describe(Index i) const {
    std::string s = "[";
    for (int c : word(i)) s += static_cast<char>(c < 10 ? '0' + c : 'a' + c - 10);
    return s + "]";
}

bool CylinderModel::valid_point(const Point& x) const {
    auto* w = std::get_if<WordPoint>(&x);
    if (!w || w->cycle.empty()) return false;
    auto ok = [&](int c) { return c >= 0 && c < k_; };
    return std::all_of(w->prefix.begin(), w->prefix.end(), ok) && std::all_of(w->cycle.begin(), w->cycle.end(), ok);
}

bool CylinderModel::member(const Point& x, Index i) const {
    auto* p = std::get_if<WordPoint>(&x);
    if (!p) return false;
    auto w = word(i);
    for (std::size_t j = 0; j < w.size(); ++j)
        if (p->at(j) != w[j]) return false;
    return true;
}

bool CylinderModel::subset(Index a, Index b) const { return is_prefix(word(b), word(a)); }

bool CylinderModel::covers(const std::vector<std::vector<int>>& ws, const std::vector<int>& w) const {
    bool deeper = false;
    for (const auto& u : ws) {
        if (is_prefix(u, w)) return true;
        if (is_prefix(w, u)) deeper = true;
    }
    if (!deeper) return false;
    auto child = w;
    child.push_back(0);
    for (int c = 0; c < k_; ++c) {
        child.back() = c;
        if (!covers(ws, child)) return false;
    }
    return true;
}

bool CylinderModel::subset(const Union& u, const Union& v) const {
    std::vector<std::vector<int>> ws;
    for (Index b : v) ws.push_back(word(b));
    return std::all_of(u.begin(), u.end(), [&](Index a) { return covers(ws, word(a)); });
}

bool CylinderModel::ll(Index u, Index v) const {
    auto wu = word(u), wv = word(v);
    return wu.size() < wv.size() && is_prefix(wu, wv);
}

bool CylinderModel::union_ll_at(const Union& c, Index d, std::uint64_t t) const {
    if (d >= t || c.empty()) return false;
    std::vector<std::vector<int>> ws;
    for (Index b : c) ws.push_back(word(b));
    auto wd = word(d);
    std::vector<int> u;
    for (std::size_t len = 0; len < wd.size(); ++len) {
        // U = [u] and V = [u + next letter of d]; V has the smallest index
        // among the cylinders strictly between [u] and [d].
        auto v = u;
        v.push_back(wd[len]);
        if (index(v) >= t) return false;
        if (covers(ws, u)) return true;
        u = std::move(v);
    }
    return false;
}

std::uint64_t CylinderModel::next_event(Index d, std::uint64_t t) const {
    // thresholds are d itself and the indices of d's non-empty prefixes
    auto w = word(d);
    std::vector<int> u;
    for (int c : w) {
        u.push_back(c);
        if (Index i = index(u); i >= t) return i + 1;
    }
    return ~std::uint64_t{0};
}

std::uint64_t CylinderModel::for_each_successor(Index u, std::uint64_t limit,
                                                const std::function<bool(Index)>& visit) const {
    auto w = word(u);
    std::uint64_t n = 0;
    for (int len = static_cast<int>(w.size()) + 1; len <= max_len_; ++len) {
        const int extra = len - static_cast<int>(w.size());
        std::vector<int> tail(extra, 0);
        while (true) {
            if (n >= limit) return n;
            ++n;
            auto v = w;
            v.insert(v.end(), tail.begin(), tail.end());
            if (visit(index(v))) return n;
            int j = extra - 1;
            while (j >= 0 && tail[j] == k_ - 1) tail[j--] = 0;
            if (j < 0) break;
            ++tail[j];
        }
    }
    return n;
}

void CylinderModel::for_each_containing(const Point& x, Index bound,
                                        const std::function<bool(Index)>& visit) const {
    auto* p = std::get_if<WordPoint>(&x);
    if (!p) return;
    std::vector<int> w;
    for (int len = 0; len <= max_len_; ++len) {
        Index i = index(w);
        if (i >= bound || visit(i)) return;
        w.push_back(p->at(len));
    }
}

std::optional<Index> CylinderModel::least_inside(const Point& x, const Union& u, Index) const {
    auto* p = std::get_if<WordPoint>(&x);
    if (!p) return std::nullopt;
    std::vector<std::vector<int>> ws;
    std::size_t longest = 0;
    for (Index b : u) {
        ws.push_back(word(b));
        longest = std::max(longest, ws.back().size());
    }
    std::vector<int> w;
    for (std::size_t len = 0; len <= longest; ++len) {
        if (covers(ws, w)) return index(w);
        w.push_back(p->at(len));
    }
    return std::nullopt;
}

std::optional<Index> CylinderModel::least_successor(Index c, const Point& x, Index) const {
    if (!member(x, c)) return std::nullopt;
    auto w = word(c);
    if (static_cast<int>(w.size()) >= max_len_)
        throw CapacityError("cylinder words longer than " + std::to_string(max_len_) + " have no index");
    w.push_back(std::get<WordPoint>(x).at(w.size()));
    return index(w);
}

Point CylinderModel::some_point(Index i) const { return WordPoint{word(i), {0}}; }

Point CylinderModel::random_point(Index i, std::mt19937_64& rng) const {
    WordPoint x{word(i), {}};
    for (int j = static_cast<int>(rng() % 4); j > 0; --j) x.prefix.push_back(static_cast<int>(rng() % k_));
    for (int j = 1 + static_cast<int>(rng() % 3); j > 0; --j) x.cycle.push_back(static_cast<int>(rng() % k_));
    return x;
}

Index CylinderModel::random_refinement(Index i, std::mt19937_64& rng) const {
    auto w = word(i);
    for (int j = 1 + static_cast<int>(rng() % 2); j > 0 && static_cast<int>(w.size()) < max_len_; --j)
        w.push_back(static_cast<int>(rng() % k_));
    return index(w);
}

Point CylinderModel::chain_point(const std::vector<Index>& chain) const {
    if (chain.empty()) throw ModelError("empty chain");
    for (std::size_t k = 0; k + 1 < chain.size(); ++k)
        if (!ll(chain[k], chain[k + 1]))
            throw ModelError("chain is not <<-increasing at step " + std::to_string(k));
    // leftmost point of the last cylinder
    Point x = some_point(chain.back());
    for (std::size_t k = 0; k < chain.size(); ++k)
        if (!member(x, chain[k])) throw ModelError("chain point misses element " + std::to_string(k));
    return x;
}

// ---- relation lifting ----------------------------------------------------

std::string tri_str(Tri v) {
    switch (v) {
        case Tri::True: return "true";
        case Tri::False: return "false";
        default: return "unknown";
    }
}

Tri lift_relation(const SpaceModel& base, const std::vector<Index>& candidates, bool exhaustive,
                  const std::function<bool(Index)>& inside_c, const std::function<bool(Index)>& covers_d) {
    std::vector<Index> lower, upper;
    for (Index i : candidates) {
        if (inside_c(i)) lower.push_back(i);
        if (covers_d(i)) upper.push_back(i);
    }
    for (Index u : lower)
        for (Index v : upper)
            if (base.ll(u, v)) return Tri::True;
    return exhaustive ? Tri::False : Tri::Unknown;
}

// ---- regions -------------------------------------------------------------

Region union_region(std::shared_ptr<const SpaceModel> m, Union u) {
    Region r;
    r.name = "union";
    r.covers = [m, u](Index i) { return m->subset(Union{i}, u); };
    r.contains = [m, u](const Point& x) { return m->member(x, u); };
    if (auto fp = std::dynamic_pointer_cast<const FinitePosetModel>(m)) {
        r.misses = [fp, u](Index i) { return (fp->open(i) & fp->open_set(u)) == 0; };
    } else if (auto cy = std::dynamic_pointer_cast<const CylinderModel>(m)) {
        r.misses = [cy, u](Index i) {
            auto w = cy->word(i);
            return std::none_of(u.begin(), u.end(), [&](Index b) {
                auto v = cy->word(b);
                return is_prefix(v, w) || is_prefix(w, v);
            });
        };
    } else {
        r.misses = [u](Index) { return u.empty(); };
    }
    return r;
}

Region whole_region() {
    return Region{"whole", [](Index) { return true; }, [](Index) { return false; },
                  [](const Point&) { return true; }};
}

Region empty_region() {
    return Region{"empty", [](Index) { return false; }, [](Index) { return true; },
                  [](const Point&) { return false; }};
}

namespace {

bool has_factor_from(const std::vector<int>& w, const std::vector<int>& f, std::size_t from) {
    for (std::size_t p = from; p + f.size() <= w.size(); ++p)
        if (std::equal(f.begin(), f.end(), w.begin() + p)) return true;
    return false;
}

bool compatible(const std::vector<int>& a, const std::vector<int>& b) { return is_prefix(a, b) || is_prefix(b, a); }

}  // namespace

Region cylinder_factor_region(std::shared_ptr<const CylinderModel> m, std::vector<int> prefix,
                              std::vector<int> factor, int offset) {
    Region r;
    const std::size_t from = prefix.size() + offset;
    std::ostringstream os;
    os << "ext(";
    for (int c : prefix) os << c;
    os << ")&has(";
    for (int c : factor) os << c;
    os << ")@" << from;
    r.name = os.str();
    r.covers = [m, prefix, factor, from](Index i) {
        auto w = m->word(i);
        return is_prefix(prefix, w) && has_factor_from(w, factor, from);
    };
    r.misses = [m, prefix](Index i) { return !compatible(prefix, m->word(i)); };
    r.contains = [prefix, factor, from](const Point& x) {
        auto* p = std::get_if<WordPoint>(&x);
        if (!p) return false;
        // occurrences in the periodic part repeat with the cycle length
        std::size_t n = std::max(from, p->prefix.size()) + p->cycle.size() + factor.size();
        auto w = p->first(n);
        return is_prefix(prefix, w) && has_factor_from(w, factor, from);
    };
    return r;
}

Region cylinder_prefix_region(std::shared_ptr<const CylinderModel> m, std::vector<int> prefix) {
    Region r;
    r.name = "ext";
    for (int c : prefix) r.name += std::to_string(c);
    r.covers = [m, prefix](Index i) { return is_prefix(prefix, m->word(i)); };
    r.misses = [m, prefix](Index i) { return !compatible(prefix, m->word(i)); };
    r.contains = [prefix](const Point& x) {
        auto* p = std::get_if<WordPoint>(&x);
        return p && is_prefix(prefix, p->first(prefix.size()));
    };
    return r;
}

std::vector<Point> cylinder_points(int alphabet, int depth, const std::vector<std::vector<int>>& cycles) {
    std::vector<Point> pts;
    std::vector<int> w(depth, 0);
    while (true) {
        for (const auto& c : cycles) pts.push_back(WordPoint{w, c});
        int j = depth - 1;
        while (j >= 0 && w[j] == alphabet - 1) w[j--] = 0;
        if (j < 0) break;
        ++w[j];
    }
    return pts;
}

std::vector<std::vector<int>> short_cycles(int alphabet) {
    std::vector<std::vector<int>> out;
    for (int a = 0; a < alphabet; ++a) out.push_back({a});
    for (int a = 0; a < alphabet; ++a)
        for (int b = 0; b < alphabet; ++b)
            if (a != b) out.push_back({a, b});
    return out;
}

DenseConstraint random_cylinder_constraint(std::shared_ptr<const CylinderModel> m, std::mt19937_64& rng) {
    const int k = m->alphabet();
    std::vector<int> prefix(1 + rng() % 2), factor(1 + rng() % 3);
    for (int& c : prefix) c = static_cast<int>(rng() % k);
    for (int& c : factor) c = static_cast<int>(rng() % k);
    const int offset = static_cast<int>(rng() % 4);
    return {cylinder_factor_region(m, prefix, factor, offset), cylinder_prefix_region(m, prefix)};
}

// ---- Baire witness -------------------------------------------------------

std::string baire_status_str(BaireStatus s) {
    switch (s) {
        case BaireStatus::Ok: return "OK";
        case BaireStatus::BudgetExceeded: return "BUDGET_EXCEEDED";
        default: return "DENSITY_VIOLATION";
    }
}

BaireResult baire_witness(const SpaceModel& m, const std::vector<DenseConstraint>& dense, Index target,
                          const std::function<int(int)>& schedule, int rounds, std::uint64_t budget) {
    constexpr std::uint64_t kSearchCap = 2048;
    BaireResult r;
    auto first_successor = [&](Index u) -> std::optional<Index> {
        std::optional<Index> out;
        r.steps += m.for_each_successor(u, budget - r.steps, [&](Index v) {
            out = v;
            return true;
        });
        return out;
    };

    auto o0 = first_successor(target);
    if (!o0) {
        r.status = BaireStatus::BudgetExceeded;
        return r;
    }
    r.chain.push_back(*o0);

    for (int n = 1; n <= rounds; ++n) {
        const int j = schedule(n);
        if (j < 0 || j >= static_cast<int>(dense.size())) throw std::out_of_range("schedule index");
        if (std::find(r.scheduled.begin(), r.scheduled.end(), j) == r.scheduled.end()) r.scheduled.push_back(j);
        const auto& c = dense[j];

        auto w = first_successor(r.chain.back());
        if (!w) {
            r.status = BaireStatus::BudgetExceeded;
            return r;
        }
        // Every point of W already satisfies the constraint.
        if (c.open.covers(*w) || c.closed_complement.misses(*w)) {
            r.chain.push_back(*w);
            continue;
        }
        std::optional<Index> star;
        bool meets_g = c.closed_complement.covers(*w);
        const std::uint64_t cap = std::min(kSearchCap, budget - r.steps);
        const std::uint64_t used = m.for_each_successor(*w, cap, [&](Index v) {
            if (c.open.covers(v)) {
                star = v;
                return true;
            }
            if (c.closed_complement.covers(v)) meets_g = true;
            return false;
        });
        r.steps += used;
        if (star) {
            r.chain.push_back(*star);
            continue;
        }
        if (r.steps >= budget) {
            r.status = BaireStatus::BudgetExceeded;
            r.chain.push_back(*w);
            return r;
        }
        // No W* inside U: the point must end up in F, so W may not meet the
        // open complement of F.
        if (!c.closed_complement.misses(*w) && meets_g) {
            r.status = BaireStatus::DensityViolation;
            r.failed_constraint = j;
            r.failed_round = n;
            r.chain.push_back(*w);
            return r;
        }
        r.chain.push_back(*w);
    }

    try {
        Point x = m.chain_point(r.chain);
        r.point = x;
        bool ok = m.member(x, target);
        for (Index i : r.chain) ok = ok && m.member(x, i);
        for (int j : r.scheduled) {
            if (!dense[j].contains(x)) {
                ok = false;
                if (r.failed_constraint < 0) r.failed_constraint = j;
            }
        }
        r.verified = ok;
        if (!ok) r.status = BaireStatus::DensityViolation;
    } catch (const ModelError&) {
        r.status = BaireStatus::DensityViolation;
    }
    return r;
}

bool spot_check_dense(const SpaceModel& m, const DenseConstraint& c, const std::vector<Index>& samples,
                      std::uint64_t limit) {
    for (Index t : samples) {
        if (c.open.covers(t) || c.closed_complement.misses(t)) continue;
        bool ok = false;
        m.for_each_successor(t, limit, [&](Index v) {
            ok = c.open.covers(v) || c.closed_complement.misses(v);
            return ok;
        });
        if (!ok) return false;
    }
    return true;
}

// ---- axioms --------------------------------------------------------------

AxiomReport check_axioms(const SpaceModel& m, const std::vector<Index>& basis, const std::vector<Point>& points) {
    AxiomReport rep;
    const std::size_t n = basis.size();
    std::vector<char> rel(n * n), sub(n * n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            rel[a * n + b] = m.ll(basis[a], basis[b]);
            sub[a * n + b] = m.subset(basis[a], basis[b]);
        }
    auto fail = [&](bool& flag, const std::string& why) {
        if (flag && rep.first_failure.empty()) rep.first_failure = why;
        flag = false;
    };
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = 0; v < n; ++v) {
            if (!rel[u * n + v]) continue;
            if (!sub[v * n + u])
                fail(rep.refinement, "(1) " + m.describe(basis[u]) + " << " + m.describe(basis[v]));
            for (std::size_t t = 0; t < n; ++t)
                if (sub[u * n + t] && !rel[t * n + v])
                    fail(rep.enlargement, "(2) " + m.describe(basis[u]) + " inside " + m.describe(basis[t]) +
                                              " but not << " + m.describe(basis[v]));
        }
    for (Index u : basis)
        for (const Point& x : points) {
            if (!m.member(x, u)) continue;
            auto w = m.least_successor(u, x);
            if (!w || !m.member(x, *w) || !m.ll(u, *w))
                fail(rep.point_refinable, "(3) " + m.describe(u) + " at " + point_str(x));
        }
    return rep;
}

// ---- JSON ----------------------------------------------------------------

namespace {

std::uint64_t bits_of(const nlohmann::json& arr) {
    std::uint64_t s = 0;
    for (int i : arr.get<std::vector<int>>()) {
        if (i < 0 || i > 63) throw std::invalid_argument("set element outside 0..63");
        s |= std::uint64_t{1} << i;
    }
    return s;
}

}  // namespace

std::unique_ptr<SpaceModel> model_from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "pn") return std::make_unique<PowerSetModel>();
    if (kind == "pinf") return std::make_unique<ClauseModel>(ClauseModel::pinf());
    if (kind == "clauses") {
        std::vector<ClauseRow> rows;
        for (const auto& r : j.at("rows")) {
            ClauseRow row;
            row.alpha = bits_of(r.at("alpha"));
            for (const auto& w : r.at("witnesses")) row.witnesses.push_back(bits_of(w));
            rows.push_back(row);
        }
        return std::make_unique<ClauseModel>(std::move(rows));
    }
    if (kind == "cylinder") return std::make_unique<CylinderModel>(j.value("alphabet", 2));
    if (kind == "poset") {
        auto cover = j.value("cover", std::vector<std::pair<int, int>>{});
        return std::make_unique<FinitePosetModel>(FinitePoset(j.at("n").get<int>(), cover));
    }
    throw std::invalid_argument("unknown model kind '" + kind + "'");
}

}  // namespace hier
