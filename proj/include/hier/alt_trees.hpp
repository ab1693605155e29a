#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hier/diff_hierarchy.hpp"
#include "hier/finite_space.hpp"

namespace hier {

// Finite prefix-closed set of sequences of naturals. Node 0 is the root;
// every other node stores its parent and the last element of its sequence.
class WfTree {
public:
    struct Node {
        int parent = -1;
        std::uint64_t last = 0;
        int depth = 0;
        std::vector<int> children;  // sorted by `last`
    };

    WfTree();
    // Adds every prefix of every listed sequence.
    static WfTree from_sequences(const std::vector<std::vector<std::uint64_t>>& seqs);

    int root() const { return 0; }
    int size() const { return static_cast<int>(nodes_.size()); }
    const Node& node(int i) const { return nodes_[i]; }
    // Child of `parent` labelled `last`, creating it if needed.
    int child(int parent, std::uint64_t last);
    std::optional<int> find_child(int parent, std::uint64_t last) const;
    std::vector<std::uint64_t> sequence(int i) const;
    std::vector<std::vector<std::uint64_t>> sequences() const;

    // Per-node ranks: leaves 0, otherwise sup(child + 1).
    std::vector<int> ranks() const;
    // Nodes in Kleene-Brouwer order: descendants before ancestors, siblings
    // by increasing label.
    std::vector<int> kleene_brouwer() const;

private:
    std::vector<Node> nodes_;
};

// Rank of the root.
int tree_rank(const WfTree& t);
bool kb_less(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b);

struct LabeledAltTree {
    WfTree tree;
    std::vector<int> labels;  // one poset point per node
    PointSet target = 0;
    int root_sign = 1;        // 1 iff labels[root] is in target
};

// Checks increasing labels along edges, alternation, and the root sign.
bool is_alternating(const LabeledAltTree& f, const FinitePoset& p);

struct Pruned {
    LabeledAltTree tree;
    std::vector<int> node_map;  // output node -> node of the input tree
};

// Path of `beta` edges cut out of a longest branch, starting at a node of
// sign eps. Throws std::invalid_argument if beta >= rank(f).
Pruned prune_to_rank(const LabeledAltTree& f, int beta, int eps);

// Longest strictly increasing chain alternating membership in a whose first
// point lies in a iff eps == 1, counted in edges; nullopt when no start exists.
std::optional<int> max_alt_rank(PointSet a, const FinitePoset& p, int eps);
// Per-point length of the longest alternating chain starting there.
std::vector<int> alt_heights(PointSet a, const FinitePoset& p);
// A longest alternating chain witnessing max_alt_rank.
std::vector<int> alt_chain(PointSet a, const FinitePoset& p, int eps);

LevelPair alt_levels(PointSet a, const FinitePoset& p);

// The tree S_b of alternating increasing sequences starting at b, with node
// labels. Throws ResourceLimit beyond `node_limit` nodes.
LabeledAltTree alternating_tree(PointSet a, const FinitePoset& p, int b, std::size_t node_limit = 1u << 20);

DiffCode diff_code_from_trees(PointSet a, const FinitePoset& p);

struct AuditViolation {
    int n = 0;
    std::string kind;  // "least" or "successor"
    PointSet subset = 0;
};

struct AuditReport {
    bool has_least = false;
    int checked_sets = 0;
    std::vector<AuditViolation> violations;
};

AuditReport ambiguity_audit(const FinitePoset& p, int n_max);

// Words of length 1..depth (or 0..depth with the empty word) over
// `alphabet` letters, ordered by prefix. Point ids follow length-lex order.
FinitePoset prefix_poset(int alphabet, int depth, bool with_root);
// Ids of the words of prefix_poset that start with `letter`.
PointSet prefix_cone(int alphabet, int depth, bool with_root, int letter);

}  // namespace hier
