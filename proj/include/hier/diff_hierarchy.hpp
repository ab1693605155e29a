#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hier/finite_space.hpp"
#include "hier/ordinal.hpp"

namespace hier {

enum class Polarity { D, CoD };

template <class Set>
struct BasicDiffCode {
    struct Entry {
        Ordinal index;
        Set set;
        bool operator==(const Entry&) const = default;
    };

    Ordinal alpha;
    std::vector<Entry> entries;  // strictly increasing indices, all < alpha
    Polarity polarity = Polarity::D;

    bool operator==(const BasicDiffCode&) const = default;

    // Throws std::invalid_argument when indices are out of order or >= alpha.
    void validate() const {
        for (std::size_t i = 0; i < entries.size(); ++i) {
            if (!(entries[i].index < alpha)) throw std::invalid_argument("diff code: index >= alpha");
            if (i > 0 && !(entries[i - 1].index < entries[i].index))
                throw std::invalid_argument("diff code: indices not strictly increasing");
        }
    }

    // Least-index rule: `in(set)` answers whether the point lies in an entry.
    template <class InSet>
    bool eval(InSet&& in) const {
        bool hit = false;
        for (const auto& e : entries) {
            if (in(e.set)) {
                hit = e.index.odd() != alpha.odd();
                break;
            }
        }
        return polarity == Polarity::D ? hit : !hit;
    }
};

using DiffCode = BasicDiffCode<PointSet>;

bool eval_diff(const DiffCode& code, int x);
// Denotation as a point set over the poset's carrier.
PointSet eval_diff_set(const DiffCode& code, const FinitePoset& p);

// D_n over a finite sequence of opens (index i for the i-th set, alpha = n).
DiffCode make_code(const std::vector<PointSet>& sets, Polarity pol = Polarity::D);

DiffCode normalize_monotone(const DiffCode& code);
// Same denotation at level alpha2 >= code.alpha.
DiffCode pad(const DiffCode& code, const Ordinal& alpha2);
// co-D code at level alpha becomes a D code at alpha + 1 by appending the carrier.
DiffCode embed_co(const DiffCode& code, PointSet carrier);

struct LevelPair {
    int sigma = 0;  // least n with a in D_n
    int pi = 0;     // least n with a in co-D_n
    bool operator==(const LevelPair&) const = default;
};

class ResourceLimit : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Exhaustive search over monotone open sequences. Throws ResourceLimit once
// more than `state_limit` distinct (denotation, top) states would be kept.
LevelPair level_bruteforce(PointSet a, const FinitePoset& p, std::size_t state_limit = 1u << 22);

// Length of the longest strict chain in p, in points.
int height(const FinitePoset& p);

}  // namespace hier
