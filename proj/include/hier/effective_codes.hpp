#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "hier/alt_trees.hpp"
#include "hier/diff_hierarchy.hpp"
#include "hier/ordinal.hpp"
#include "hier/space_models.hpp"

namespace hier {

// ---- Borel codes ---------------------------------------------------------

enum class Side { Sigma, Pi };

// Well-founded tree; node meaning by rank:
//   0 at the root: empty; 0 elsewhere: O_last;
//   1: union of O_n over the children n;
//   >= 2: union over child pairs (2n, 2n+1) of [2n] minus [2n+1].
struct BorelCode {
    WfTree tree;
};

bool eval_borel(const BorelCode& code, const SpaceModel& m, Side side, const Point& x);
// The union of the listed basic opens as a rank <= 1 code.
BorelCode borel_union(const std::vector<Index>& opens);

nlohmann::json borel_to_json(const BorelCode& code);
BorelCode borel_from_json(const nlohmann::json& j);

// ---- Hausdorff codes -----------------------------------------------------

// Well-order given by position: element n sits at order[n] < alpha. Elements
// of alpha not listed carry the empty tree. parity_set holds the n whose
// position has parity opposite to alpha.
struct HausdorffCode {
    Ordinal alpha;
    std::vector<Ordinal> order;
    std::vector<std::uint64_t> parity_set;
    std::vector<BorelCode> trees;

    // Throws std::invalid_argument on repeated or out-of-range positions, a
    // size mismatch or a parity set that disagrees with the order.
    void validate() const;
};

std::vector<std::uint64_t> parity_set_for(const Ordinal& alpha, const std::vector<Ordinal>& order);
// The least element (in the well-order) whose Sigma set holds x decides.
bool eval_hausdorff_code(const HausdorffCode& code, const SpaceModel& m, const Point& x);
// Each entry becomes the union of the basic opens inside it. co-D codes are
// embedded one level up first.
HausdorffCode hausdorff_from_diff(const DiffCode& code, const FinitePosetModel& m);

using IndexDiffCode = BasicDiffCode<Index>;
bool eval_index_code(const IndexDiffCode& code, const SpaceModel& m, const Point& x);
HausdorffCode hausdorff_from_index_code(const IndexDiffCode& code);

nlohmann::json hausdorff_to_json(const HausdorffCode& code);
HausdorffCode hausdorff_from_json(const nlohmann::json& j);

// ---- Staged presentations ------------------------------------------------

// A = meet_n join_{i in rows(1,n)} O_i, complement likewise with side 0.
// row(eps, n, t) is the part enumerated after t steps.
struct StagedPresentation {
    std::string name;
    std::function<Union(int eps, std::uint64_t n, std::uint64_t t)> row;
    // At stage t, rows n >= stable_from(eps, t) coincide with that row.
    std::function<std::optional<std::uint64_t>(int eps, std::uint64_t t)> stable_from;
    // Least stage after t at which some row gains an element; unset means t + 1.
    std::function<std::uint64_t(std::uint64_t t)> next_event;
    // Ground truth where known.
    std::function<bool(const Point&)> truth;
};

// Finite row lists, last row repeated. Index i is enumerated from stage i + 1.
StagedPresentation rows_presentation(std::string name, std::vector<Union> rows1, std::vector<Union> rows0,
                                     const SpaceModel& m);
// Cylinders over {0,1,2}: some 1 occurs before any 2. Side 1 rows are all
// {[0^k 1]}; side 0 row n is [0^n] together with [0^k 2] for k < n.
StagedPresentation first_one_presentation(const CylinderModel& m);
// {"rows1": [[...],...], "rows0": [[...],...]} or {"builtin": "first-one"}.
StagedPresentation presentation_from_json(const nlohmann::json& j, const SpaceModel& m);

struct PresentationIssue {
    Point x;
    bool in1 = false;
    bool in0 = false;
};
// Points lying in both or neither presented set, judged on the first `rows`
// rows at stage `stage`.
std::vector<PresentationIssue> check_presentation(const StagedPresentation& pres, const SpaceModel& m,
                                                  const std::vector<Point>& points, std::uint64_t rows,
                                                  std::uint64_t stage);

// ---- Effective transform -------------------------------------------------

// Largest p <= t such that O_m sits << below the union of row q at stage t
// for every q < p.
std::uint64_t compute_F(const StagedPresentation& pres, const SpaceModel& m, Index idx, std::uint64_t t, int eps);

// Memoized F values; type is the side with the larger F, -1 on a tie.
class FTable {
public:
    FTable(const StagedPresentation& pres, const SpaceModel& m) : pres_(pres), m_(m) {}
    std::uint64_t F(Index idx, std::uint64_t t, int eps);
    int type(Index idx, std::uint64_t t) {
        auto f0 = F(idx, t, 0), f1 = F(idx, t, 1);
        return f0 == f1 ? -1 : (f1 > f0 ? 1 : 0);
    }
    // F(idx, .) is constant on [t, next_change(idx, t)).
    std::uint64_t next_change(Index idx, std::uint64_t t) const {
        return std::min(m_.next_event(idx, t), pres_.next_event ? pres_.next_event(t) : t + 1);
    }
    const StagedPresentation& pres() const { return pres_; }
    const SpaceModel& model() const { return m_; }

private:
    const StagedPresentation& pres_;
    const SpaceModel& m_;
    std::unordered_map<std::uint64_t, std::uint64_t> memo_[2];
};

// Tree of ((m_0,t_0),...,(m_k,t_k)) with m and t below the budget, both
// strictly increasing, O_{m_l} << O_{m_{l+1}} at stage t_{l+1}, and types
// defined and alternating. Labels encode (m,t) as m*(budget+1)+t so that the
// label order is lexicographic on pairs.
struct PairTree {
    std::uint64_t budget = 0;
    WfTree tree;
    std::vector<Index> m;           // per node; root entries unused
    std::vector<std::uint64_t> t;
    std::vector<int> type;          // -1 at the root
    std::vector<bool> cut;          // child search stopped by the node cap
    bool truncated = false;
};

PairTree build_alt_tree(const StagedPresentation& pres, const SpaceModel& m, std::uint64_t budget,
                        std::size_t node_cap = 200000);

struct TransformResult {
    PairTree tree;
    std::vector<int> kb;            // node ids in Kleene-Brouwer order
    Ordinal xi;
    IndexDiffCode code;
    bool parity_ok = true;          // rank parity of (node, gamma) equals parity of gamma
    std::string parity_failure;
};

// Blocks of omega+2 copies per node in Kleene-Brouwer order; the node's open
// sits at omega+type within its block. Throws ModelError if the node cap cut
// the tree.
TransformResult effective_hausdorff_transform(const StagedPresentation& pres, const SpaceModel& m,
                                              std::uint64_t budget, std::size_t node_cap = 200000);

struct PathStep {
    Index m = 0;
    std::uint64_t t = 0;
    int type = 0;
    std::uint64_t f0 = 0, f1 = 0;
};
struct LazyEval {
    bool value = false;             // type of the last step (false on an empty path)
    std::vector<PathStep> path;
    bool growth_ok = true;          // F values along the path reach floor(l/2)
};

// Evaluates the transform's code at x without building the tree: the least
// entry holding x belongs to the Kleene-Brouwer-first node of the subtree of
// nodes whose open holds x, reached by always taking the least such child.
LazyEval lazy_eval(FTable& f, const Point& x, std::uint64_t budget);

// For a node (m,t) holding x whose type disagrees with the truth, an
// extension of the other type holding x within the budget.
std::optional<PathStep> opposite_extension(FTable& f, const Point& x, const PathStep& node, std::uint64_t budget);

struct VerifyRow {
    Point x;
    bool value = false;
    bool stable = false;            // same value at budget and budget * lookahead
    std::optional<bool> truth;
    bool growth_ok = true;
};
struct VerifyReport {
    std::uint64_t budget = 0;
    std::vector<VerifyRow> rows;
    std::uint64_t lookahead = 2;
    bool incomplete = false;        // some row not stable
    std::uint64_t next_budget = 0;  // budget that changed an answer, when incomplete
    int disagreements = 0;          // stable rows whose value differs from the truth
};

// A row is stable when its value at `budget` survives at budget * lookahead.
VerifyReport verify_transform(const StagedPresentation& pres, const SpaceModel& m, const std::vector<Point>& points,
                              std::uint64_t budget, std::uint64_t lookahead = 2);
// Doubles from `start` until every row is stable or `max_budget` is passed.
VerifyReport transform_until_stable(const StagedPresentation& pres, const SpaceModel& m,
                                    const std::vector<Point>& points, std::uint64_t start,
                                    std::uint64_t max_budget, std::uint64_t lookahead = 2);

}  // namespace hier
