#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "hier/finite_space.hpp"

namespace hier {

using Index = std::uint64_t;
// Finite set of basis indices standing for the union of their opens. Sorted,
// no duplicates; the empty union is the empty set.
using Union = std::vector<Index>;

Union make_union(std::vector<Index> ids);

// Subset of N given by bits below 64 plus, when tail_from >= 0, every
// natural >= tail_from.
struct SetPoint {
    std::uint64_t core = 0;
    int tail_from = -1;
    bool operator==(const SetPoint&) const = default;
};

// prefix followed by cycle repeated forever (cycle non-empty).
struct WordPoint {
    std::vector<int> prefix;
    std::vector<int> cycle{0};
    bool operator==(const WordPoint&) const = default;
    int at(std::size_t i) const;
    std::vector<int> first(std::size_t n) const;
};

using Point = std::variant<int, SetPoint, WordPoint>;

std::string point_str(const Point& x);
// Bits of a set point restricted to 0..63.
std::uint64_t point_bits(const SetPoint& x);

class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The 64-bit index space ran out before the construction did.
class CapacityError : public ModelError {
public:
    using ModelError::ModelError;
};

// Effectively presented space: enumerated basis, decidable membership and
// containment, and a staged approximation relation.
class SpaceModel {
public:
    virtual ~SpaceModel() = default;

    virtual std::string kind() const = 0;
    virtual std::string describe(Index i) const = 0;
    // Number of basis elements, or nullopt for an infinite basis.
    virtual std::optional<Index> basis_size() const { return std::nullopt; }

    virtual bool valid_point(const Point& x) const = 0;
    virtual bool member(const Point& x, Index i) const = 0;
    bool member(const Point& x, const Union& u) const;

    // O_a is contained in O_b.
    virtual bool subset(Index a, Index b) const = 0;
    // Every O_a (a in u) lies inside some O_b (b in v); override when a basic
    // open can be covered by several others.
    virtual bool subset(const Union& u, const Union& v) const;

    virtual bool ll(Index u, Index v) const = 0;
    // Stage-t fragment of the relation: both indices enumerated before t.
    bool ll_at(Index u, Index v, std::uint64_t t) const { return u < t && v < t && ll(u, v); }
    // Lifted relation on unions: some basic U, V below t with
    // c contains U, U << V, and V contains O_d.
    virtual bool union_ll_at(const Union& c, Index d, std::uint64_t t) const;
    // Least stage after t at which union_ll_at(c, d, .) may change for some c.
    virtual std::uint64_t next_event(Index d, std::uint64_t t) const { (void)d; return t + 1; }

    // Visits basic opens v with u << v by increasing index until `visit`
    // returns true or `limit` candidates were examined. Returns the count.
    virtual std::uint64_t for_each_successor(Index u, std::uint64_t limit,
                                             const std::function<bool(Index)>& visit) const;
    // Basic opens containing x by increasing index, below `bound`.
    virtual void for_each_containing(const Point& x, Index bound,
                                     const std::function<bool(Index)>& visit) const;

    // Least basic open C with x in C and C inside u.
    virtual std::optional<Index> least_inside(const Point& x, const Union& u, Index bound = 1u << 16) const;
    // Least basic open B with c << B and x in B.
    virtual std::optional<Index> least_successor(Index c, const Point& x, Index bound = 1u << 16) const;

    virtual Point some_point(Index i) const = 0;
    virtual Point random_point(Index i, std::mt19937_64& rng) const = 0;
    // Random basic open strictly deeper than i (or i itself on finite models).
    virtual Index random_refinement(Index i, std::mt19937_64& rng) const = 0;

    // A point in every element of a <<-chain, verified against each element.
    virtual Point chain_point(const std::vector<Index>& chain) const;
};

// Finite poset with the upset topology. Default basis: principal upsets
// ordered by (size, element). Relation: V non-empty and V inside U.
class FinitePosetModel : public SpaceModel {
public:
    explicit FinitePosetModel(FinitePoset p);
    FinitePosetModel(FinitePoset p, std::vector<PointSet> basis);

    const FinitePoset& poset() const { return p_; }
    PointSet open(Index i) const { return basis_.at(i); }
    PointSet open_set(const Union& u) const;
    // All basis elements inside the open set s.
    Union union_of(PointSet s) const;
    const std::vector<PointSet>& basis() const { return basis_; }

    std::string kind() const override { return "poset"; }
    std::string describe(Index i) const override;
    std::optional<Index> basis_size() const override { return basis_.size(); }
    bool valid_point(const Point& x) const override;
    bool member(const Point& x, Index i) const override;
    using SpaceModel::member;
    bool subset(Index a, Index b) const override;
    bool subset(const Union& u, const Union& v) const override;
    using SpaceModel::subset;
    bool ll(Index u, Index v) const override;
    bool union_ll_at(const Union& c, Index d, std::uint64_t t) const override;
    std::uint64_t next_event(Index d, std::uint64_t t) const override;
    Point some_point(Index i) const override;
    Point random_point(Index i, std::mt19937_64& rng) const override;
    Index random_refinement(Index i, std::mt19937_64& rng) const override;
    Point chain_point(const std::vector<Index>& chain) const override;

private:
    FinitePoset p_;
    std::vector<PointSet> basis_;
};

// P(N) with basis O_A = {X : A inside X}, index = bitmask of A, relation
// A inside B (inclusion of the opens reversed).
class PowerSetModel : public SpaceModel {
public:
    std::string kind() const override { return "pn"; }
    std::string describe(Index i) const override;
    bool valid_point(const Point& x) const override;
    bool member(const Point& x, Index i) const override;
    using SpaceModel::member;
    bool subset(Index a, Index b) const override { return (b & ~a) == 0; }
    using SpaceModel::subset;
    bool ll(Index u, Index v) const override { return (u & ~v) == 0; }
    std::uint64_t for_each_successor(Index u, std::uint64_t limit,
                                     const std::function<bool(Index)>& visit) const override;
    void for_each_containing(const Point& x, Index bound,
                             const std::function<bool(Index)>& visit) const override;
    std::optional<Index> least_inside(const Point& x, const Union& u, Index bound = 1u << 16) const override;
    std::optional<Index> least_successor(Index c, const Point& x, Index bound = 1u << 16) const override;
    Point some_point(Index i) const override;
    Point random_point(Index i, std::mt19937_64& rng) const override;
    Index random_refinement(Index i, std::mt19937_64& rng) const override;
    Point chain_point(const std::vector<Index>& chain) const override;
};

struct ClauseRow {
    std::uint64_t alpha = 0;
    std::vector<std::uint64_t> witnesses;  // the family I_n
};

enum class ClauseStatus { NotAClause, Unsolved, Solved };

// Subspace {X : for all n, alpha_n inside X implies some witness inside X}
// of P(N). Basic opens are the traces of O_beta, index = bitmask of beta;
// containment is read syntactically (beta' contains beta).
class ClauseModel : public SpaceModel {
public:
    explicit ClauseModel(std::vector<ClauseRow> rows, bool infinite_points = false);
    // Rows alpha_n = {} and I_n = {{j} : n <= j < 64}, n < 64.
    static ClauseModel pinf();

    const std::vector<ClauseRow>& rows() const { return rows_; }
    bool infinite_points() const { return infinite_; }

    ClauseStatus clause_status(Index u, std::size_t n) const;
    // Least unsolved u-clause among the stored rows; nullopt stands for INF.
    std::optional<std::size_t> n_u(Index u) const;
    bool clause_ll(Index u, Index v) const;
    // V with x in V and u << V, following the witness choice of the proof.
    Index refine_witness(const Point& x, Index u) const;
    // Limit point of a <<-chain; throws ModelError naming the failing step.
    SetPoint chain_limit(const std::vector<Index>& chain) const;
    // First row violated by x, if any.
    std::optional<std::size_t> violated_row(const SetPoint& x) const;

    std::string kind() const override { return infinite_ ? "pinf" : "clauses"; }
    std::string describe(Index i) const override;
    bool valid_point(const Point& x) const override;
    bool member(const Point& x, Index i) const override;
    using SpaceModel::member;
    bool subset(Index a, Index b) const override { return (b & ~a) == 0; }
    using SpaceModel::subset;
    bool ll(Index u, Index v) const override { return clause_ll(u, v); }
    std::uint64_t for_each_successor(Index u, std::uint64_t limit,
                                     const std::function<bool(Index)>& visit) const override;
    void for_each_containing(const Point& x, Index bound,
                             const std::function<bool(Index)>& visit) const override;
    std::optional<Index> least_inside(const Point& x, const Union& u, Index bound = 1u << 16) const override;
    std::optional<Index> least_successor(Index c, const Point& x, Index bound = 1u << 16) const override;
    Point some_point(Index i) const override;
    Point random_point(Index i, std::mt19937_64& rng) const override;
    Index random_refinement(Index i, std::mt19937_64& rng) const override;
    Point chain_point(const std::vector<Index>& chain) const override;

private:
    bool solved_by(std::size_t n, std::uint64_t bits) const;
    std::vector<ClauseRow> rows_;
    bool infinite_;
};

// Infinite words over {0..k-1}; basis = cylinders [w] in length-lex order
// (index 0 is the empty word). Relation: proper extension.
class CylinderModel : public SpaceModel {
public:
    explicit CylinderModel(int alphabet);

    int alphabet() const { return k_; }
    // Longest word with a 64-bit index.
    int max_length() const { return max_len_; }
    std::vector<int> word(Index i) const;
    Index index(const std::vector<int>& w) const;

    std::string kind() const override { return "cylinder"; }
    std::string describe(Index i) const override;
    bool valid_point(const Point& x) const override;
    bool member(const Point& x, Index i) const override;
    using SpaceModel::member;
    bool subset(Index a, Index b) const override;
    // Exact cover test for finite unions of cylinders.
    bool subset(const Union& u, const Union& v) const override;
    bool ll(Index u, Index v) const override;
    bool union_ll_at(const Union& c, Index d, std::uint64_t t) const override;
    std::uint64_t next_event(Index d, std::uint64_t t) const override;
    std::uint64_t for_each_successor(Index u, std::uint64_t limit,
                                     const std::function<bool(Index)>& visit) const override;
    void for_each_containing(const Point& x, Index bound,
                             const std::function<bool(Index)>& visit) const override;
    std::optional<Index> least_inside(const Point& x, const Union& u, Index bound = 1u << 16) const override;
    std::optional<Index> least_successor(Index c, const Point& x, Index bound = 1u << 16) const override;
    Point some_point(Index i) const override;
    Point random_point(Index i, std::mt19937_64& rng) const override;
    Index random_refinement(Index i, std::mt19937_64& rng) const override;
    Point chain_point(const std::vector<Index>& chain) const override;

    // [w] is covered by the union of the listed cylinders.
    bool covers(const std::vector<std::vector<int>>& ws, const std::vector<int>& w) const;

private:
    int k_;
    int max_len_;  // longest word whose index fits in 64 bits
};

// Every word of length `depth` followed by each listed cycle.
std::vector<Point> cylinder_points(int alphabet, int depth, const std::vector<std::vector<int>>& cycles);
// The tail rules c^w and (ab)^w for letters c and a != b.
std::vector<std::vector<int>> short_cycles(int alphabet);

// Three-valued answer for bounded searches.
enum class Tri { False, True, Unknown };
std::string tri_str(Tri v);

// Lift of a relation to another basis: C <<< D iff some U, V
// among `candidates` satisfy C contains U, U << V, V contains D. `exhaustive`
// states that the candidate list already contains every useful witness, so a
// failed search means False rather than Unknown.
Tri lift_relation(const SpaceModel& base, const std::vector<Index>& candidates, bool exhaustive,
                  const std::function<bool(Index)>& inside_c, const std::function<bool(Index)>& covers_d);

// Decidable description of an open region.
struct Region {
    std::string name;
    std::function<bool(Index)> covers;         // O_i inside the region (sound)
    std::function<bool(Index)> misses;         // O_i disjoint from the region (sound)
    std::function<bool(const Point&)> contains;
};

Region union_region(std::shared_ptr<const SpaceModel> m, Union u);
Region whole_region();
Region empty_region();

// U together with the closed complement of `closed_complement`.
struct DenseConstraint {
    Region open;
    Region closed_complement;
    bool contains(const Point& x) const { return open.contains(x) || !closed_complement.contains(x); }
};

// Cylinder regions: words extending `prefix` and containing `factor` at a
// position >= prefix.size() + offset.
Region cylinder_factor_region(std::shared_ptr<const CylinderModel> m, std::vector<int> prefix,
                              std::vector<int> factor, int offset);
Region cylinder_prefix_region(std::shared_ptr<const CylinderModel> m, std::vector<int> prefix);
// Words extending a random prefix (1-2 letters) contain a random factor (1-3
// letters) after an offset of 0..3, or do not extend the prefix at all.
DenseConstraint random_cylinder_constraint(std::shared_ptr<const CylinderModel> m, std::mt19937_64& rng);

enum class BaireStatus { Ok, BudgetExceeded, DensityViolation };
std::string baire_status_str(BaireStatus s);

struct BaireResult {
    BaireStatus status = BaireStatus::Ok;
    std::vector<Index> chain;
    std::optional<Point> point;
    std::vector<int> scheduled;      // constraints visited at least once
    std::uint64_t steps = 0;
    int failed_constraint = -1;      // density violation or failed final check
    int failed_round = -1;
    bool verified = false;           // point in O, in the chain, in every scheduled constraint
};

// Builds O_0 << O_1 << ... with round n serving constraint schedule(n).
BaireResult baire_witness(const SpaceModel& m, const std::vector<DenseConstraint>& dense, Index target,
                          const std::function<int(int)>& schedule, int rounds, std::uint64_t budget);

// Density spot-check: every basic open among `samples` has a successor in U
// or one missing the closed complement, within `limit` candidates each.
bool spot_check_dense(const SpaceModel& m, const DenseConstraint& c, const std::vector<Index>& samples,
                      std::uint64_t limit);

struct AxiomReport {
    bool refinement = true;   // U << V implies V inside U
    bool enlargement = true;  // U inside T and U << V imply T << V
    bool point_refinable = true;
    bool chains_meet = true;
    std::string first_failure;
    bool ok() const { return refinement && enlargement && point_refinable && chains_meet; }
};

// Conditions (1)-(3) over all pairs/triples from `basis`, (3) at the given
// sample points. Condition (4) is left to the caller.
AxiomReport check_axioms(const SpaceModel& m, const std::vector<Index>& basis, const std::vector<Point>& points);

std::unique_ptr<SpaceModel> model_from_json(const std::string& text);

}  // namespace hier
