#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hier/space_models.hpp"

namespace hier {

enum class GameKind { Choquet, BanachMazur };
enum class Outcome { NonemptyWins, EmptyWins, Undecided };

std::string game_str(GameKind g);
std::string outcome_str(Outcome o);

struct Round {
    std::optional<Point> x;  // absent in Banach-Mazur
    Union u;
    Union v;
};

struct Transcript {
    GameKind game = GameKind::Choquet;
    std::vector<Round> rounds;
    Outcome outcome = Outcome::Undecided;
    // Set for NonemptyWins reached by play; a forfeit by Empty carries one
    // only when Nonempty had already moved.
    std::optional<Point> witness;
    std::string forfeit;   // "", "empty" or "nonempty"
    std::string reason;
};

// Nonempty's stationary strategy: (x, U) -> V.
using Strategy = std::function<Union(const Point& x, const Union& u)>;
// Nonempty in Banach-Mazur: U -> V.
using BMStrategy = std::function<Union(const Union& u)>;

struct EmptyMove {
    Point x;
    Union u;
};
// Empty sees Nonempty's previous open (nullopt before the first round).
using EmptyStrategy = std::function<EmptyMove(const std::optional<Union>& prev, int round)>;

// sigma(x, U) = B with C least basic, x in C inside U, and B least basic
// with C << B and x in B. Throws std::invalid_argument if x is not in U and
// ModelError if a search comes back empty.
Strategy stationary_from_relation(const SpaceModel& m);
// The refinement strategy: least basic open around x inside U.
Strategy least_inside_strategy(const SpaceModel& m);
// Plays sigma at a canonical point of U.
BMStrategy bm_adapter(const SpaceModel& m, Strategy sigma);

// Seeded random legal moves.
EmptyStrategy random_empty(const SpaceModel& m, std::uint64_t seed);
// Jumps several << steps deeper each round.
EmptyStrategy deepest_descent_empty(const SpaceModel& m, std::uint64_t seed);
// Set models: keeps the point's extra elements far out so every refinement
// has to chase them. Falls back to random moves on other models.
EmptyStrategy clause_chasing_empty(const SpaceModel& m, std::uint64_t seed);

Transcript play(GameKind game, const EmptyStrategy& empty, const Strategy& nonempty, const SpaceModel& m,
                int rounds);
Transcript play_bm(const EmptyStrategy& empty, const BMStrategy& nonempty, const SpaceModel& m, int rounds);

// Finite carriers: B << C iff some basic D inside B and x in D have
// x in C inside tau(x, D). Indexed [B][C] over the model's basis.
using Relation = std::vector<std::vector<bool>>;
Relation relation_from_strategy(const Strategy& tau, const FinitePosetModel& m);
// Conditions (1)-(4) for an explicit relation on a finite basis.
AxiomReport check_finite_relation(const FinitePosetModel& m, const Relation& rel);

// Neighbourhoods among `nbhds` containing the witness that some played V
// refines; returns (refined, containing).
std::pair<int, int> convergence_audit(const SpaceModel& m, const Transcript& t, const std::vector<Index>& nbhds);

}  // namespace hier
