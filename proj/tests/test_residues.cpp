#include <gtest/gtest.h>

#include <random>

#include "hier/residues.hpp"

using namespace hier;

namespace {

PointSet S(std::initializer_list<int> xs) {
    PointSet s = 0;
    for (int x : xs) s |= singleton(x);
    return s;
}

}  // namespace

TEST(Residues, ChainOnThreeChain) {
    const auto c3 = FinitePoset::chain(3);
    const auto rc = residue_sequence(S({1}), c3);
    EXPECT_EQ(rc.theta, 4);
    ASSERT_EQ(rc.sets.size(), 5u);
    EXPECT_EQ(rc.sets[0], S({0, 1, 2}));
    EXPECT_EQ(rc.sets[1], S({0, 1}));
    EXPECT_EQ(rc.sets[2], S({0}));
    EXPECT_EQ(rc.sets[3], 0u);
    EXPECT_EQ(rc.sets[4], 0u);
}

TEST(Residues, TrivialChains) {
    const auto c3 = FinitePoset::chain(3);
    auto e = residue_sequence(0, c3);
    EXPECT_EQ(e.sets[1], 0u);
    EXPECT_EQ(e.theta, 2);
    auto f = residue_sequence(c3.carrier(), c3);
    EXPECT_EQ(f.sets[1], c3.carrier());
    EXPECT_EQ(f.sets[2], 0u);
    EXPECT_EQ(f.theta, 2);
}

TEST(Residues, DecomposeExamples) {
    const auto c3 = FinitePoset::chain(3);
    const auto d = hausdorff_decompose(S({1}), c3);
    EXPECT_EQ(eval_diff_set(d.code, c3), S({1}));
    EXPECT_EQ(d.code.alpha, Ordinal(5));
    EXPECT_EQ(d.level.sigma, 2);
    EXPECT_EQ(d.trimmed.alpha, Ordinal(2));
    EXPECT_EQ(eval_diff_set(d.trimmed, c3), S({1}));

    for (PointSet u : opens(c3)) EXPECT_LE(hausdorff_decompose(u, c3).level.sigma, 1);
    const PointSet closed = S({0, 1});
    const auto dc = hausdorff_decompose(closed, c3);
    EXPECT_EQ(dc.level.pi, 1);
    EXPECT_LE(dc.level.sigma, 2);
    EXPECT_EQ(eval_diff_set(dc.trimmed_co, c3), closed);
}

TEST(ResiduesProperty, ExactDenotationAndLevels) {
    std::mt19937_64 rng(21);
    for (int n = 0; n <= 4; ++n)
        for (const auto& p : FinitePoset::enumerate_all(n))
            for (PointSet a = 0; a <= p.carrier(); ++a) {
                const auto d = hausdorff_decompose(a, p);
                EXPECT_EQ(eval_diff_set(d.code, p), a);
                EXPECT_EQ(eval_diff_set(d.trimmed, p), a);
                EXPECT_EQ(eval_diff_set(d.trimmed_co, p), a);
                EXPECT_EQ(d.trimmed.alpha, Ordinal(d.level.sigma));
                EXPECT_EQ(d.trimmed_co.alpha, Ordinal(d.level.pi));
                EXPECT_EQ(d.level, level_bruteforce(a, p));
            }
    for (int it = 0; it < 200; ++it) {
        const auto p = FinitePoset::random(5 + static_cast<int>(rng() % 4), 0.3, rng);
        const PointSet a = rng() & p.carrier();
        const auto d = hausdorff_decompose(a, p);
        EXPECT_EQ(eval_diff_set(d.code, p), a);
        for (std::size_t k = 0; k < d.chain.sets.size(); ++k) {
            EXPECT_TRUE(p.is_closed(d.chain.sets[k]));
            if (k > 0) EXPECT_TRUE(subset(d.chain.sets[k], d.chain.sets[k - 1]));
        }
        // Points of a leave the chain at an even index, points outside at an odd one.
        for (int x = 0; x < p.size(); ++x) {
            std::size_t eta = 0;
            while (contains(d.chain.sets[eta], x)) ++eta;
            EXPECT_EQ(eta % 2 == 0, contains(a, x));
        }
    }
}
