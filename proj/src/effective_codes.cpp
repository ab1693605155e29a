#include "hier/effective_codes.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace hier {

// ---- Borel codes ---------------------------------------------------------

namespace {

bool node_meaning(const WfTree& t, const std::vector<int>& rank, int n, const SpaceModel& m, const Point& x) {
    const auto& node = t.node(n);
    if (rank[n] == 0) return n != t.root() && m.member(x, node.last);
    if (rank[n] == 1) {
        for (int c : node.children)
            if (m.member(x, t.node(c).last)) return true;
        return false;
    }
    for (int c : node.children) {
        const auto lab = t.node(c).last;
        if (lab % 2) continue;
        auto odd = t.find_child(n, lab + 1);
        if (!odd) continue;
        if (node_meaning(t, rank, c, m, x) && !node_meaning(t, rank, *odd, m, x)) return true;
    }
    return false;
}

}  // namespace

bool eval_borel(const BorelCode& code, const SpaceModel& m, Side side, const Point& x) {
    const bool in = node_meaning(code.tree, code.tree.ranks(), code.tree.root(), m, x);
    return side == Side::Sigma ? in : !in;
}

BorelCode borel_union(const std::vector<Index>& opens) {
    BorelCode c;
    for (Index i : opens) c.tree.child(c.tree.root(), i);
    return c;
}

nlohmann::json borel_to_json(const BorelCode& code) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& s : code.tree.sequences()) nodes.push_back(s);
    return {{"nodes", nodes}};
}

BorelCode borel_from_json(const nlohmann::json& j) {
    if (!j.contains("nodes") || !j["nodes"].is_array()) throw std::invalid_argument("borel code: missing \"nodes\"");
    return BorelCode{WfTree::from_sequences(j["nodes"].get<std::vector<std::vector<std::uint64_t>>>())};
}

// ---- Hausdorff codes -----------------------------------------------------

std::vector<std::uint64_t> parity_set_for(const Ordinal& alpha, const std::vector<Ordinal>& order) {
    std::vector<std::uint64_t> p;
    for (std::size_t n = 0; n < order.size(); ++n)
        if (order[n].odd() != alpha.odd()) p.push_back(n);
    return p;
}

void HausdorffCode::validate() const {
    if (order.size() != trees.size()) throw std::invalid_argument("hausdorff code: order and trees differ in size");
    std::set<Ordinal> seen;
    for (const auto& o : order) {
        if (!(o < alpha)) throw std::invalid_argument("hausdorff code: position " + o.str() + " not below alpha");
        if (!seen.insert(o).second) throw std::invalid_argument("hausdorff code: repeated position " + o.str());
    }
    auto p = parity_set;
    std::sort(p.begin(), p.end());
    if (p != parity_set_for(alpha, order)) throw std::invalid_argument("hausdorff code: parity set disagrees with the order");
}

bool eval_hausdorff_code(const HausdorffCode& code, const SpaceModel& m, const Point& x) {
    std::vector<std::size_t> by_pos(code.order.size());
    for (std::size_t i = 0; i < by_pos.size(); ++i) by_pos[i] = i;
    std::sort(by_pos.begin(), by_pos.end(), [&](auto a, auto b) { return code.order[a] < code.order[b]; });
    for (auto n : by_pos)
        if (eval_borel(code.trees[n], m, Side::Sigma, x))
            return std::find(code.parity_set.begin(), code.parity_set.end(), n) != code.parity_set.end();
    return false;
}

HausdorffCode hausdorff_from_diff(const DiffCode& code, const FinitePosetModel& m) {
    if (code.polarity == Polarity::CoD) return hausdorff_from_diff(embed_co(code, m.poset().carrier()), m);
    HausdorffCode h;
    h.alpha = code.alpha;
    for (const auto& e : code.entries) {
        std::vector<Index> inside;
        for (Index i = 0; i < m.basis().size(); ++i)
            if (hier::subset(m.open(i), e.set)) inside.push_back(i);
        h.order.push_back(e.index);
        h.trees.push_back(borel_union(inside));
    }
    h.parity_set = parity_set_for(h.alpha, h.order);
    return h;
}

bool eval_index_code(const IndexDiffCode& code, const SpaceModel& m, const Point& x) {
    return code.eval([&](Index i) { return m.member(x, i); });
}

HausdorffCode hausdorff_from_index_code(const IndexDiffCode& code) {
    if (code.polarity != Polarity::D) throw std::invalid_argument("hausdorff code: expects a D code");
    HausdorffCode h;
    h.alpha = code.alpha;
    for (const auto& e : code.entries) {
        h.order.push_back(e.index);
        h.trees.push_back(borel_union({e.set}));
    }
    h.parity_set = parity_set_for(h.alpha, h.order);
    return h;
}

nlohmann::json hausdorff_to_json(const HausdorffCode& code) {
    nlohmann::json order = nlohmann::json::array(), trees = nlohmann::json::array();
    for (const auto& o : code.order) order.push_back(o.str());
    for (const auto& t : code.trees) trees.push_back(borel_to_json(t));
    return {{"alpha", code.alpha.str()}, {"order", order}, {"parity_set", code.parity_set}, {"trees", trees}};
}

HausdorffCode hausdorff_from_json(const nlohmann::json& j) {
    HausdorffCode h;
    h.alpha = Ordinal::parse(j.at("alpha").get<std::string>());
    for (const auto& o : j.at("order")) h.order.push_back(o.is_number() ? Ordinal(o.get<std::uint64_t>()) : Ordinal::parse(o.get<std::string>()));
    for (const auto& t : j.at("trees")) h.trees.push_back(borel_from_json(t));
    if (j.contains("parity_set"))
        h.parity_set = j["parity_set"].get<std::vector<std::uint64_t>>();
    else
        h.parity_set = parity_set_for(h.alpha, h.order);
    h.validate();
    return h;
}

// ---- Staged presentations ------------------------------------------------

namespace {

Union below(const Union& u, std::uint64_t t) {
    Union out;
    for (Index i : u)
        if (i < t) out.push_back(i);
    return out;
}

}  // namespace

StagedPresentation rows_presentation(std::string name, std::vector<Union> rows1, std::vector<Union> rows0,
                                     const SpaceModel& m) {
    if (rows1.empty() || rows0.empty()) throw std::invalid_argument("presentation: each side needs a row");
    for (auto* rows : {&rows1, &rows0})
        for (auto& r : *rows) r = make_union(r);
    StagedPresentation p;
    p.name = std::move(name);
    p.stable_from = [s0 = rows0.size() - 1, s1 = rows1.size() - 1](int eps, std::uint64_t) -> std::optional<std::uint64_t> {
        return eps ? s1 : s0;
    };
    p.row = [rows1, rows0](int eps, std::uint64_t n, std::uint64_t t) {
        const auto& rows = eps ? rows1 : rows0;
        return below(rows[std::min<std::uint64_t>(n, rows.size() - 1)], t);
    };
    std::vector<Index> all;
    for (const auto* rows : {&rows1, &rows0})
        for (const auto& r : *rows) all.insert(all.end(), r.begin(), r.end());
    all = make_union(all);
    p.next_event = [all](std::uint64_t t) {
        auto it = std::lower_bound(all.begin(), all.end(), t);
        return it == all.end() ? ~std::uint64_t{0} : *it + 1;
    };
    p.truth = [rows1, &m](const Point& x) {
        return std::all_of(rows1.begin(), rows1.end(), [&](const Union& r) { return m.member(x, r); });
    };
    return p;
}

StagedPresentation first_one_presentation(const CylinderModel& m) {
    if (m.alphabet() != 3) throw std::invalid_argument("first-one presentation needs the alphabet {0,1,2}");
    StagedPresentation p;
    p.name = "first-one";
    // Side 0: once [0^n] is not yet enumerated, neither is any [0^k 2] with
    // k >= n - 1, so later rows repeat row n.
    p.stable_from = [m](int eps, std::uint64_t t) -> std::optional<std::uint64_t> {
        if (eps) return 0;
        for (int n = 0; n <= m.max_length(); ++n)
            if (m.index(std::vector<int>(n, 0)) >= t) return n;
        return std::nullopt;
    };
    // Indices grow with k, so each family stops at the first index >= t.
    auto family = [m](std::vector<int> w, int letter, std::uint64_t count, std::uint64_t t, Union& out) {
        for (std::uint64_t k = 0; k < count; ++k, w.push_back(0)) {
            auto v = w;
            if (letter >= 0) v.push_back(letter);
            if (static_cast<int>(v.size()) > m.max_length()) return;
            Index i = m.index(v);
            if (i >= t) return;
            out.push_back(i);
        }
    };
    p.row = [m, family](int eps, std::uint64_t n, std::uint64_t t) {
        Union out;
        if (eps) {
            family({}, 1, ~std::uint64_t{0}, t, out);
        } else {
            if (static_cast<int>(n) <= m.max_length()) {
                Index i = m.index(std::vector<int>(n, 0));
                if (i < t) out.push_back(i);
            }
            family({}, 2, n, t, out);
        }
        return make_union(out);
    };
    p.next_event = [m](std::uint64_t t) {
        std::uint64_t best = ~std::uint64_t{0};
        for (int k = 0; k < m.max_length(); ++k) {
            std::vector<int> w(k, 0);
            for (int last : {-1, 1, 2}) {
                auto v = w;
                if (last >= 0) v.push_back(last);
                Index i = m.index(v);
                if (i >= t) best = std::min<std::uint64_t>(best, i + 1);
            }
        }
        return best;
    };
    p.truth = [](const Point& x) {
        auto* w = std::get_if<WordPoint>(&x);
        if (!w) return false;
        for (std::size_t i = 0; i < w->prefix.size() + w->cycle.size(); ++i)
            if (int c = w->at(i)) return c == 1;
        return false;
    };
    return p;
}

StagedPresentation presentation_from_json(const nlohmann::json& j, const SpaceModel& m) {
    if (j.contains("builtin")) {
        const auto name = j["builtin"].get<std::string>();
        if (name != "first-one") throw std::invalid_argument("unknown presentation \"" + name + "\"");
        auto* cm = dynamic_cast<const CylinderModel*>(&m);
        if (!cm) throw std::invalid_argument("first-one presentation needs a cylinder model");
        return first_one_presentation(*cm);
    }
    auto rows = [&](const char* key) {
        if (!j.contains(key)) throw std::invalid_argument(std::string("presentation: missing \"") + key + "\"");
        return j[key].get<std::vector<Union>>();
    };
    return rows_presentation(j.value("name", "rows"), rows("rows1"), rows("rows0"), m);
}

std::vector<PresentationIssue> check_presentation(const StagedPresentation& pres, const SpaceModel& m,
                                                  const std::vector<Point>& points, std::uint64_t rows,
                                                  std::uint64_t stage) {
    std::vector<PresentationIssue> out;
    for (const auto& x : points) {
        bool in[2] = {true, true};
        for (int eps = 0; eps < 2; ++eps)
            for (std::uint64_t n = 0; n < rows && in[eps]; ++n) in[eps] = m.member(x, pres.row(eps, n, stage));
        if (in[0] == in[1]) out.push_back({x, in[1], in[0]});
    }
    return out;
}

// ---- Effective transform -------------------------------------------------

std::uint64_t compute_F(const StagedPresentation& pres, const SpaceModel& m, Index idx, std::uint64_t t, int eps) {
    const auto stable = pres.stable_from ? pres.stable_from(eps, t) : std::nullopt;
    for (std::uint64_t q = 0; q < t; ++q) {
        if (!m.union_ll_at(pres.row(eps, q, t), idx, t)) return q;
        if (stable && q >= *stable) return t;
    }
    return t;
}

std::uint64_t FTable::F(Index idx, std::uint64_t t, int eps) {
    const std::uint64_t key = (idx << 32) ^ t;
    auto& memo = memo_[eps];
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    return memo[key] = compute_F(pres_, m_, idx, t, eps);
}

namespace {

Index m_limit(const SpaceModel& m, std::uint64_t budget) { return std::min<Index>(budget, m.basis_size().value_or(budget)); }

}  // namespace

PairTree build_alt_tree(const StagedPresentation& pres, const SpaceModel& m, std::uint64_t budget,
                        std::size_t node_cap) {
    FTable f(pres, m);
    PairTree pt;
    pt.budget = budget;
    pt.m = {0};
    pt.t = {0};
    pt.type = {-1};
    pt.cut = {false};
    const Index mend = m_limit(m, budget);
    std::vector<int> todo{0};
    while (!todo.empty()) {
        const int n = todo.back();
        todo.pop_back();
        const bool root = n == 0;
        for (Index mi = root ? 0 : pt.m[n] + 1; mi < mend; ++mi) {
            for (std::uint64_t ti = root ? 0 : pt.t[n] + 1; ti < budget; ++ti) {
                if (!root && !m.ll_at(pt.m[n], mi, ti)) continue;
                const int ty = f.type(mi, ti);
                if (ty < 0 || (!root && ty == pt.type[n])) continue;
                if (static_cast<std::size_t>(pt.tree.size()) >= node_cap) {
                    pt.cut[n] = true;
                    pt.truncated = true;
                    goto next_node;
                }
                const int c = pt.tree.child(n, mi * (budget + 1) + ti);
                pt.m.push_back(mi);
                pt.t.push_back(ti);
                pt.type.push_back(ty);
                pt.cut.push_back(false);
                todo.push_back(c);
            }
        }
    next_node:;
    }
    return pt;
}

TransformResult effective_hausdorff_transform(const StagedPresentation& pres, const SpaceModel& m,
                                              std::uint64_t budget, std::size_t node_cap) {
    TransformResult r;
    r.tree = build_alt_tree(pres, m, budget, node_cap);
    if (r.tree.truncated) throw ModelError("transform: tree exceeds " + std::to_string(node_cap) + " nodes");
    r.kb = r.tree.tree.kleene_brouwer();
    const Ordinal block = ord_add(Ordinal::omega(), Ordinal(2));
    const std::vector<Ordinal> gammas{Ordinal(0), Ordinal(1), Ordinal(2), Ordinal::omega(),
                                      ord_add(Ordinal::omega(), Ordinal(1))};
    Ordinal start(0);
    for (int n : r.kb) {
        for (const auto& g : gammas) {
            if (ord_add(start, g).odd() != g.odd() && r.parity_ok) {
                r.parity_ok = false;
                r.parity_failure = "node " + std::to_string(n) + ", copy " + g.str();
            }
        }
        if (n != r.tree.tree.root())
            r.code.entries.push_back({ord_add(start, ord_add(Ordinal::omega(), Ordinal(r.tree.type[n]))), r.tree.m[n]});
        start = ord_add(start, block);
    }
    r.xi = start;
    if (r.xi.odd() && r.parity_ok) {
        r.parity_ok = false;
        r.parity_failure = "order type " + r.xi.str() + " is odd";
    }
    r.code.alpha = r.xi;
    r.code.validate();
    return r;
}

namespace {

std::optional<PathStep> next_step(FTable& f, const Point& x, const std::optional<PathStep>& cur,
                                  std::uint64_t budget) {
    const SpaceModel& m = f.model();
    const Index mend = m_limit(m, budget);
    std::optional<PathStep> found;
    m.for_each_containing(x, mend, [&](Index mi) {
        if (cur && (mi <= cur->m || !m.ll(cur->m, mi))) return false;
        std::uint64_t ti = cur ? std::max(cur->t, std::max(cur->m, mi)) + 1 : 0;
        // jump between stages where F can change
        for (; ti < budget; ti = f.next_change(mi, ti)) {
            const int ty = f.type(mi, ti);
            if (ty < 0 || (cur && ty == cur->type)) continue;
            found = PathStep{mi, ti, ty, f.F(mi, ti, 0), f.F(mi, ti, 1)};
            return true;
        }
        return false;
    });
    return found;
}

}  // namespace

LazyEval lazy_eval(FTable& f, const Point& x, std::uint64_t budget) {
    LazyEval r;
    std::optional<PathStep> cur;
    while (auto s = next_step(f, x, cur, budget)) {
        const std::uint64_t l = r.path.size();
        if (std::min(s->f0, s->f1) < l / 2) r.growth_ok = false;
        r.path.push_back(*s);
        cur = s;
    }
    r.value = !r.path.empty() && r.path.back().type == 1;
    return r;
}

std::optional<PathStep> opposite_extension(FTable& f, const Point& x, const PathStep& node, std::uint64_t budget) {
    return next_step(f, x, node, budget);
}

namespace {

VerifyReport verify_with(FTable& f, const std::vector<Point>& points, std::uint64_t budget, std::uint64_t lookahead) {
    VerifyReport rep;
    rep.budget = budget;
    rep.lookahead = lookahead;
    for (const auto& x : points) {
        VerifyRow row;
        row.x = x;
        auto a = lazy_eval(f, x, budget);
        auto b = lazy_eval(f, x, lookahead * budget);
        row.value = a.value;
        row.stable = a.value == b.value;
        row.growth_ok = a.growth_ok && b.growth_ok;
        if (f.pres().truth) row.truth = f.pres().truth(x);
        if (!row.stable) {
            rep.incomplete = true;
            // the least doubling that flips the answer
            for (std::uint64_t nb = 2 * budget; nb <= lookahead * budget; nb *= 2)
                if (lazy_eval(f, x, nb).value != a.value) {
                    if (!rep.next_budget || nb < rep.next_budget) rep.next_budget = nb;
                    break;
                }
        } else if (row.truth && *row.truth != row.value) {
            ++rep.disagreements;
        }
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

}  // namespace

VerifyReport verify_transform(const StagedPresentation& pres, const SpaceModel& m, const std::vector<Point>& points,
                              std::uint64_t budget, std::uint64_t lookahead) {
    FTable f(pres, m);
    return verify_with(f, points, budget, lookahead);
}

VerifyReport transform_until_stable(const StagedPresentation& pres, const SpaceModel& m,
                                    const std::vector<Point>& points, std::uint64_t start,
                                    std::uint64_t max_budget, std::uint64_t lookahead) {
    FTable f(pres, m);
    for (std::uint64_t b = std::max<std::uint64_t>(start, 1);; b *= 2) {
        auto rep = verify_with(f, points, b, lookahead);
        if (!rep.incomplete || 2 * b > max_budget) return rep;
    }
}

}  // namespace hier
