#include "hier/residues.hpp"

namespace hier {

ResidueChain residue_sequence(PointSet a, const FinitePoset& p) {
    ResidueChain rc;
    rc.sets.push_back(p.carrier());
    const PointSet not_a = p.complement(a);
    for (std::size_t k = 0;; ++k) {
        const PointSet side = (k % 2 == 0) ? a : not_a;
        rc.sets.push_back(closure(p, side & rc.sets.back()));
        const auto n = rc.sets.size();
        // Two equal steps in a row (one per side) mean the chain is constant.
        if (n >= 3 && rc.sets[n - 1] == rc.sets[n - 2] && rc.sets[n - 2] == rc.sets[n - 3]) {
            std::size_t first = n - 1;
            while (first > 0 && rc.sets[first - 1] == rc.sets[first]) --first;
            if (first % 2 == 1) ++first;
            rc.theta = static_cast<int>(first);
            rc.sets.resize(first + 1);
            return rc;
        }
    }
}

namespace {

// D code (or co-D code when `complement`) for the set whose membership on
// the slices of the monotone chain `chain` is `in`. Runs of equal labels
// merge; trailing slices outside the coded set become the unlisted rest.
// The chain must end with the carrier.
DiffCode rebuild(const std::vector<PointSet>& chain, const std::vector<bool>& in, bool complement) {
    std::vector<PointSet> tops;
    std::vector<bool> labels;
    for (std::size_t i = 0; i < chain.size(); ++i) {
        const bool b = in[i] != complement;
        if (!labels.empty() && labels.back() == b) {
            tops.back() = chain[i];
        } else {
            tops.push_back(chain[i]);
            labels.push_back(b);
        }
    }
    while (!labels.empty() && !labels.back()) {
        tops.pop_back();
        labels.pop_back();
    }
    return make_code(tops, complement ? Polarity::CoD : Polarity::D);
}

}  // namespace

Decomposition hausdorff_decompose(PointSet a, const FinitePoset& p) {
    Decomposition d;
    d.chain = residue_sequence(a, p);
    if (d.chain.sets.back() != 0)
        throw NotDelta02("hausdorff_decompose: residues stabilise on a nonempty set");
    const PointSet e = p.carrier();
    d.code.alpha = Ordinal(static_cast<std::uint64_t>(d.chain.theta) + 1);
    d.code.polarity = Polarity::D;
    for (int k = 0; k <= d.chain.theta; ++k)
        d.code.entries.push_back({Ordinal(static_cast<std::uint64_t>(k)), e & ~d.chain.sets[k]});

    // Slices of a residue chain: points leaving at step k. For the chain of
    // `s`, slice k lies in s iff k is even.
    auto slices = [&](PointSet s, std::vector<PointSet>& chain, std::vector<bool>& in_a, bool flip) {
        const auto rc = s == a ? d.chain : residue_sequence(s, p);
        if (rc.sets.back() != 0) throw NotDelta02("hausdorff_decompose: residues stabilise on a nonempty set");
        for (int k = 1; k <= rc.theta; ++k) {
            const PointSet open = e & ~rc.sets[k];
            if (open == (e & ~rc.sets[k - 1])) continue;
            chain.push_back(open);
            in_a.push_back((k % 2 == 0) != flip);
        }
    };
    std::vector<PointSet> chain_a, chain_c;
    std::vector<bool> in_a, in_c;
    slices(a, chain_a, in_a, false);
    slices(p.complement(a), chain_c, in_c, true);
    // Either chain yields a D code and a co-D code; keep the shorter ones.
    auto shorter = [](DiffCode x, DiffCode y) { return y.alpha < x.alpha ? y : x; };
    d.trimmed = shorter(rebuild(chain_c, in_c, false), rebuild(chain_a, in_a, false));
    d.trimmed_co = shorter(rebuild(chain_a, in_a, true), rebuild(chain_c, in_c, true));
    d.level = {static_cast<int>(d.trimmed.alpha.to_finite()), static_cast<int>(d.trimmed_co.alpha.to_finite())};
    return d;
}

}  // namespace hier
