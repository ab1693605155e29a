#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace hier {

// Bitmask over the carrier 0..n-1 (n <= 64).
using PointSet = std::uint64_t;

constexpr int kMaxPoints = 64;

inline PointSet singleton(int i) { return PointSet{1} << i; }
inline bool contains(PointSet s, int i) { return (s >> i) & 1U; }
inline bool subset(PointSet a, PointSet b) { return (a & ~b) == 0; }
std::vector<int> members(PointSet s);
std::string set_str(PointSet s);

// Finite partial order with its Scott (upset) topology.
class FinitePoset {
public:
    FinitePoset() = default;
    // Builds the reflexive-transitive closure of `cover` (pairs i <= j).
    // Throws std::invalid_argument if the closure is not antisymmetric.
    FinitePoset(int n, const std::vector<std::pair<int, int>>& cover);

    static FinitePoset chain(int n);
    static FinitePoset antichain(int n);
    // Random DAG (edge i<j kept with probability `density`), relabelled
    // by a random permutation, then closed.
    static FinitePoset random(int n, double density, std::mt19937_64& rng);
    // All posets on n points up to labelled equality of the order relation.
    static std::vector<FinitePoset> enumerate_all(int n);

    int size() const { return n_; }
    PointSet carrier() const { return n_ == 64 ? ~PointSet{0} : (PointSet{1} << n_) - 1; }
    bool leq(int i, int j) const { return contains(up_[i], j); }
    bool lt(int i, int j) const { return i != j && leq(i, j); }
    PointSet up(int i) const { return up_[i]; }
    PointSet down(int i) const { return down_[i]; }

    PointSet up_closure(PointSet s) const;
    PointSet down_closure(PointSet s) const;
    bool is_open(PointSet s) const { return up_closure(s) == s; }
    bool is_closed(PointSet s) const { return down_closure(s) == s; }
    PointSet complement(PointSet s) const { return carrier() & ~s; }
    // Largest open contained in s.
    PointSet interior(PointSet s) const;

    // Least element, or -1.
    int least() const;
    // Covering pairs (i, j): i < j with nothing strictly between.
    std::vector<std::pair<int, int>> covers() const;

    bool operator==(const FinitePoset& o) const { return n_ == o.n_ && up_ == o.up_; }

private:
    void close();

    int n_ = 0;
    std::vector<PointSet> up_;
    std::vector<PointSet> down_;
};

std::vector<PointSet> opens(const FinitePoset& p);
PointSet closure(const FinitePoset& p, PointSet s);
// New element n (the returned poset has n+1 points) placed strictly below
// exactly the points of u. Throws std::invalid_argument if u is not open.
FinitePoset adjoin_point_below(const FinitePoset& p, PointSet u);

// Preimage of s along a map given as an image table.
PointSet preimage(const std::vector<int>& f, PointSet s);
bool is_monotone(const FinitePoset& dom, const FinitePoset& cod, const std::vector<int>& f);

}  // namespace hier
