#pragma once

#include <stdexcept>
#include <vector>

#include "hier/diff_hierarchy.hpp"
#include "hier/finite_space.hpp"

namespace hier {

struct ResidueChain {
    std::vector<PointSet> sets;  // F_0 .. F_theta
    int theta = 0;
};

class NotDelta02 : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

ResidueChain residue_sequence(PointSet a, const FinitePoset& p);

struct Decomposition {
    ResidueChain chain;
    DiffCode code;          // entries E \ F_k, alpha = theta + 1
    LevelPair level;        // trimmed sigma / pi levels
    DiffCode trimmed;       // D code of level `level.sigma`
    DiffCode trimmed_co;    // co-D code of level `level.pi`
};

// Throws NotDelta02 if the chain stabilises on a nonempty set.
Decomposition hausdorff_decompose(PointSet a, const FinitePoset& p);

}  // namespace hier
