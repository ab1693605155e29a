#include "hier/games.hpp"

#include <algorithm>

namespace hier {

std::string game_str(GameKind g) { return g == GameKind::Choquet ? "choquet" : "banach-mazur"; }

std::string outcome_str(Outcome o) {
    switch (o) {
        case Outcome::NonemptyWins: return "NONEMPTY_WINS";
        case Outcome::EmptyWins: return "EMPTY_WINS";
        default: return "UNDECIDED";
    }
}

Strategy stationary_from_relation(const SpaceModel& m) {
    return [&m](const Point& x, const Union& u) -> Union {
        if (!m.member(x, u)) throw std::invalid_argument("strategy: point " + point_str(x) + " not in the open");
        auto c = m.least_inside(x, u);
        if (!c) throw ModelError("strategy: no basic open around the point inside U");
        auto b = m.least_successor(*c, x);
        if (!b) throw ModelError("strategy: no <<-successor of " + m.describe(*c) + " around the point");
        return {*b};
    };
}

Strategy least_inside_strategy(const SpaceModel& m) {
    return [&m](const Point& x, const Union& u) -> Union {
        if (!m.member(x, u)) throw std::invalid_argument("strategy: point not in the open");
        auto c = m.least_inside(x, u);
        if (!c) throw ModelError("strategy: no basic open around the point inside U");
        return {*c};
    };
}

BMStrategy bm_adapter(const SpaceModel& m, Strategy sigma) {
    return [&m, sigma](const Union& u) -> Union {
        if (u.empty()) throw std::invalid_argument("bm adapter: empty open");
        return sigma(m.some_point(u.front()), u);
    };
}

namespace {

// A starting basic open: the whole space where the basis has one, else a
// random element.
Index first_open(const SpaceModel& m, std::mt19937_64& rng) {
    if (auto n = m.basis_size()) return rng() % *n;
    return 0;
}

bool empty_open(const SpaceModel& m, const Union& u) {
    if (u.empty()) return true;
    if (auto* fp = dynamic_cast<const FinitePosetModel*>(&m)) return fp->open_set(u) == 0;
    return false;
}

}  // namespace

EmptyStrategy random_empty(const SpaceModel& m, std::uint64_t seed) {
    auto rng = std::make_shared<std::mt19937_64>(seed);
    return [&m, rng](const std::optional<Union>& prev, int) -> EmptyMove {
        Index v = prev ? prev->front() : first_open(m, *rng);
        Index base = (*rng)() % 4 == 0 ? v : m.random_refinement(v, *rng);
        Union u{base};
        if ((*rng)() % 3 == 0) u.push_back(m.random_refinement(v, *rng));
        u = make_union(u);
        return {m.random_point(base, *rng), u};
    };
}

EmptyStrategy deepest_descent_empty(const SpaceModel& m, std::uint64_t seed) {
    auto rng = std::make_shared<std::mt19937_64>(seed);
    return [&m, rng](const std::optional<Union>& prev, int) -> EmptyMove {
        Index v = prev ? prev->front() : first_open(m, *rng);
        Point x = m.random_point(v, *rng);
        Index deep = v;
        try {
            for (int k = 0; k < 3; ++k)
                if (auto s = m.least_successor(deep, x)) deep = *s;
        } catch (const CapacityError&) {
        }
        return {x, {deep}};
    };
}

EmptyStrategy clause_chasing_empty(const SpaceModel& m, std::uint64_t seed) {
    auto* cm = dynamic_cast<const ClauseModel*>(&m);
    if (!cm || !cm->infinite_points()) return random_empty(m, seed);
    return [](const std::optional<Union>& prev, int round) -> EmptyMove {
        Index v = prev ? prev->front() : 0;
        int far = std::max(62 - round, 1 + (v ? 63 - __builtin_clzll(v) : 0));
        return {SetPoint{v, std::min(far, 63)}, {v}};
    };
}

namespace {

void decide(Transcript& t, const SpaceModel& m) {
    if (auto* fp = dynamic_cast<const FinitePosetModel*>(&m)) {
        PointSet meet = fp->poset().carrier();
        for (const auto& r : t.rounds) meet &= fp->open_set(r.v);
        if (meet) {
            t.outcome = Outcome::NonemptyWins;
            t.witness = members(meet).front();
        } else {
            t.outcome = Outcome::EmptyWins;
            t.reason = "intersection of the played opens is empty";
        }
        return;
    }
    std::vector<Index> chain;
    for (const auto& r : t.rounds) {
        if (r.v.size() != 1) {
            t.outcome = Outcome::Undecided;
            t.reason = "non-basic move, no limit construction";
            return;
        }
        chain.push_back(r.v.front());
    }
    try {
        Point x = m.chain_point(chain);
        for (const auto& r : t.rounds)
            if (!m.member(x, r.v) || !m.member(x, r.u)) throw ModelError("limit point misses a move");
        t.outcome = Outcome::NonemptyWins;
        t.witness = x;
    } catch (const ModelError& e) {
        t.outcome = Outcome::Undecided;
        t.reason = e.what();
    }
}

template <class Respond>
Transcript run(GameKind game, const EmptyStrategy& empty, Respond&& respond, const SpaceModel& m, int rounds) {
    Transcript t;
    t.game = game;
    std::optional<Union> prev;
    auto forfeit = [&](const std::string& who, const std::string& why) {
        t.forfeit = who;
        t.reason = why;
        if (who == "nonempty") {
            t.outcome = Outcome::EmptyWins;
        } else {
            t.outcome = Outcome::NonemptyWins;
            if (!t.rounds.empty()) {
                Transcript done = t;
                decide(done, m);
                t.witness = done.witness;
            }
        }
        return t;
    };
    for (int i = 0; i < rounds; ++i) {
        EmptyMove mv;
        try {
            mv = empty(prev, i);
        } catch (const std::exception& e) {
            return forfeit("empty", std::string("no move: ") + e.what());
        }
        Round r;
        r.u = mv.u;
        if (game == GameKind::Choquet) r.x = mv.x;
        if (empty_open(m, mv.u)) return forfeit("empty", "empty open in round " + std::to_string(i));
        if (game == GameKind::Choquet && (!m.valid_point(mv.x) || !m.member(mv.x, mv.u)))
            return forfeit("empty", "point outside its open in round " + std::to_string(i));
        if (prev && !m.subset(mv.u, *prev))
            return forfeit("empty", "open not inside the previous move in round " + std::to_string(i));
        try {
            r.v = respond(mv);
        } catch (const CapacityError& e) {
            t.rounds.push_back(r);
            t.outcome = Outcome::Undecided;
            t.reason = std::string("representation limit: ") + e.what();
            return t;
        } catch (const std::exception& e) {
            t.rounds.push_back(r);
            return forfeit("nonempty", std::string("no move: ") + e.what());
        }
        t.rounds.push_back(r);
        if (empty_open(m, r.v)) return forfeit("nonempty", "empty open in round " + std::to_string(i));
        if (!m.subset(r.v, r.u)) return forfeit("nonempty", "open not inside Empty's move in round " + std::to_string(i));
        if (game == GameKind::Choquet && !m.member(mv.x, r.v))
            return forfeit("nonempty", "open misses Empty's point in round " + std::to_string(i));
        prev = r.v;
    }
    decide(t, m);
    return t;
}

}  // namespace

Transcript play(GameKind game, const EmptyStrategy& empty, const Strategy& nonempty, const SpaceModel& m,
                int rounds) {
    if (game == GameKind::BanachMazur) return play_bm(empty, bm_adapter(m, nonempty), m, rounds);
    return run(game, empty, [&](const EmptyMove& mv) { return nonempty(mv.x, mv.u); }, m, rounds);
}

Transcript play_bm(const EmptyStrategy& empty, const BMStrategy& nonempty, const SpaceModel& m, int rounds) {
    return run(GameKind::BanachMazur, empty, [&](const EmptyMove& mv) { return nonempty(mv.u); }, m, rounds);
}

Relation relation_from_strategy(const Strategy& tau, const FinitePosetModel& m) {
    const std::size_t n = m.basis().size();
    Relation rel(n, std::vector<bool>(n, false));
    for (Index d = 0; d < n; ++d) {
        for (int x : members(m.open(d))) {
            PointSet image = m.open_set(tau(x, Union{d}));
            for (Index b = 0; b < n; ++b) {
                if (!hier::subset(m.open(d), m.open(b))) continue;
                for (Index c = 0; c < n; ++c)
                    if (contains(m.open(c), x) && hier::subset(m.open(c), image)) rel[b][c] = true;
            }
        }
    }
    return rel;
}

AxiomReport check_finite_relation(const FinitePosetModel& m, const Relation& rel) {
    AxiomReport rep;
    const std::size_t n = rel.size();
    auto fail = [&](bool& flag, const std::string& why) {
        if (flag && rep.first_failure.empty()) rep.first_failure = why;
        flag = false;
    };
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = 0; v < n; ++v) {
            if (!rel[u][v]) continue;
            if (!hier::subset(m.open(v), m.open(u))) fail(rep.refinement, "(1) at " + m.describe(u));
            for (std::size_t t = 0; t < n; ++t)
                if (hier::subset(m.open(u), m.open(t)) && !rel[t][v]) fail(rep.enlargement, "(2) at " + m.describe(t));
        }
    for (std::size_t u = 0; u < n; ++u)
        for (int x : members(m.open(u))) {
            bool ok = false;
            for (std::size_t w = 0; w < n && !ok; ++w) ok = rel[u][w] && contains(m.open(w), x);
            if (!ok) fail(rep.point_refinable, "(3) at " + m.describe(u) + ", point " + std::to_string(x));
        }
    // Under (1) chains decrease, so an infinite chain with empty meet has to
    // cycle through empty basic opens.
    std::vector<int> state(n, 0);
    std::function<bool(std::size_t)> cyc = [&](std::size_t u) {
        state[u] = 1;
        for (std::size_t v = 0; v < n; ++v) {
            if (!rel[u][v] || m.open(v) != 0) continue;
            if (state[v] == 1 || (state[v] == 0 && cyc(v))) return true;
        }
        state[u] = 2;
        return false;
    };
    for (std::size_t u = 0; u < n; ++u)
        if (m.open(u) == 0 && state[u] == 0 && cyc(u)) fail(rep.chains_meet, "(4) empty cycle at " + m.describe(u));
    return rep;
}

std::pair<int, int> convergence_audit(const SpaceModel& m, const Transcript& t, const std::vector<Index>& nbhds) {
    int refined = 0, containing = 0;
    if (!t.witness) return {0, 0};
    for (Index n : nbhds) {
        if (!m.member(*t.witness, n)) continue;
        ++containing;
        for (const auto& r : t.rounds)
            if (m.subset(r.v, Union{n})) {
                ++refined;
                break;
            }
    }
    return {refined, containing};
}

}  // namespace hier
