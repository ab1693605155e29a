#include <gtest/gtest.h>

#include <random>

#include "hier/effective_codes.hpp"
#include "oracles.hpp"

using namespace hier;

namespace {

std::uint64_t S(std::initializer_list<int> xs) {
    std::uint64_t s = 0;
    for (int x : xs) s |= std::uint64_t{1} << x;
    return s;
}

// 0 < 1 with 2 and 3 isolated; six explicit opens.
FinitePosetModel six_opens() {
    return FinitePosetModel(FinitePoset(4, {{0, 1}}), {S({1}), S({2}), S({3}), S({0, 1}), S({1, 2}), S({2, 3})});
}

BorelCode code_of(const std::vector<std::vector<std::uint64_t>>& seqs) { return {WfTree::from_sequences(seqs)}; }

Index basis_index(const FinitePosetModel& m, PointSet s) {
    for (Index i = 0; i < m.basis().size(); ++i)
        if (m.open(i) == s) return i;
    throw std::logic_error("not a basis element");
}

std::vector<Point> cylinder_points(int depth, const std::vector<std::vector<int>>& cycles) {
    std::vector<Point> pts;
    int total = 1;
    for (int j = 0; j < depth; ++j) total *= 3;
    for (int v = 0; v < total; ++v) {
        std::vector<int> p(depth);
        for (int j = depth - 1, u = v; j >= 0; --j, u /= 3) p[j] = u % 3;
        for (const auto& c : cycles) pts.push_back(WordPoint{p, c});
    }
    return pts;
}

const std::vector<std::vector<int>> kCycles{{0}, {1}, {2}, {0, 1}, {0, 2}, {1, 2}, {2, 1}};

}  // namespace

// ---- Borel codes ----------------------------------------------------------

TEST(BorelCode, RootOnlyIsEmpty) {
    auto m = six_opens();
    auto c = code_of({{}});
    for (int x = 0; x < 4; ++x) {
        EXPECT_FALSE(eval_borel(c, m, Side::Sigma, x));
        EXPECT_TRUE(eval_borel(c, m, Side::Pi, x));
    }
}

TEST(BorelCode, SingleOpen) {
    auto m = six_opens();
    auto c = code_of({{5}});
    for (int x = 0; x < 4; ++x) EXPECT_EQ(eval_borel(c, m, Side::Sigma, x), contains(S({2, 3}), x));
}

TEST(BorelCode, RankTwoDifference) {
    auto m = six_opens();
    // (0) has rank 1 and means O_3; (1) is a leaf meaning O_1
    auto c = code_of({{0}, {1}, {0, 3}});
    ASSERT_EQ(tree_rank(c.tree), 2);
    const PointSet expect = S({0, 1}) & ~S({2});
    for (int x = 0; x < 4; ++x) EXPECT_EQ(eval_borel(c, m, Side::Sigma, x), contains(expect, x)) << x;
}

TEST(BorelCode, UnpairedChildrenAreIgnored) {
    auto m = six_opens();
    auto c = code_of({{2, 0}, {3, 1}});  // children 2 and 3 form a pair
    auto d = code_of({{3, 1}, {4, 0}});  // 3 is odd and 4 has no partner
    for (int x = 0; x < 4; ++x) {
        EXPECT_EQ(eval_borel(c, m, Side::Sigma, x), contains(S({1}) & ~S({2}), x));
        EXPECT_FALSE(eval_borel(d, m, Side::Sigma, x));
    }
}

TEST(BorelCode, MatchesSetComputationOnSmallCodes) {
    auto m = six_opens();
    int checked = 0;
    for (const auto& t : oracle::all_trees(4, 6)) {
        if (oracle::rank(t, {}) > 2) continue;
        BorelCode c{WfTree::from_sequences({t.begin(), t.end()})};
        const PointSet den = oracle::denotation(t, {}, m.basis());
        for (int x = 0; x < 4; ++x) ASSERT_EQ(eval_borel(c, m, Side::Sigma, x), contains(den, x));
        ++checked;
    }
    EXPECT_GT(checked, 300);
}

TEST(BorelCode, JsonRoundTrip) {
    auto c = code_of({{0, 3}, {1}, {4, 2, 7}});
    auto back = borel_from_json(borel_to_json(c));
    EXPECT_EQ(back.tree.sequences(), c.tree.sequences());
    EXPECT_EQ(borel_to_json(borel_from_json(nlohmann::json::parse(R"({"nodes":[[]]})")))["nodes"].size(), 1u);
    EXPECT_THROW(borel_from_json(nlohmann::json::object()), std::invalid_argument);
}

// ---- Hausdorff codes ------------------------------------------------------

TEST(HausdorffCode, SingleTreeIsSigmaSet) {
    auto m = six_opens();
    HausdorffCode h{Ordinal(1), {Ordinal(0)}, {0}, {code_of({{1}, {2}})}};
    h.validate();
    for (int x = 0; x < 4; ++x) EXPECT_EQ(eval_hausdorff_code(h, m, x), contains(S({2, 3}), x));
}

TEST(HausdorffCode, NestedOpensMatchDifferenceCode) {
    FinitePosetModel m(FinitePoset::chain(3));
    DiffCode d = make_code({S({1, 2}), S({0, 1, 2})});
    auto h = hausdorff_from_diff(d, m);
    h.validate();
    EXPECT_EQ(h.parity_set, std::vector<std::uint64_t>{1});
    for (int x = 0; x < 3; ++x) {
        EXPECT_EQ(eval_hausdorff_code(h, m, x), eval_diff(d, x));
        EXPECT_EQ(eval_hausdorff_code(h, m, x), x == 0);
    }
}

TEST(HausdorffCode, PointInNoTreeIsOutside) {
    auto m = six_opens();
    HausdorffCode h{Ordinal(2), {Ordinal(1)}, {0}, {code_of({{2}})}};
    EXPECT_FALSE(eval_hausdorff_code(h, m, 0));
    EXPECT_TRUE(eval_hausdorff_code(h, m, 3));
}

TEST(HausdorffCode, ValidationErrors) {
    HausdorffCode h{Ordinal(2), {Ordinal(0), Ordinal(0)}, {}, {BorelCode{}, BorelCode{}}};
    EXPECT_THROW(h.validate(), std::invalid_argument);
    h.order = {Ordinal(0), Ordinal(2)};
    EXPECT_THROW(h.validate(), std::invalid_argument);
    h.order = {Ordinal(0), Ordinal(1)};
    h.parity_set = {0};
    EXPECT_THROW(h.validate(), std::invalid_argument);
    h.parity_set = {1};
    EXPECT_NO_THROW(h.validate());
    h.trees.pop_back();
    EXPECT_THROW(h.validate(), std::invalid_argument);
}

TEST(HausdorffCode, TranslationAgreesWithDifferenceCodes) {
    std::mt19937_64 rng(17);
    for (int it = 0; it < 300; ++it) {
        FinitePoset p = FinitePoset::random(1 + static_cast<int>(rng() % 7), 0.3, rng);
        FinitePosetModel m(p);
        DiffCode d;
        Ordinal idx(rng() % 2);
        const int k = static_cast<int>(rng() % 5);
        for (int j = 0; j < k; ++j) {
            d.entries.push_back({idx, p.up_closure(rng() & p.carrier())});
            idx = rng() % 3 == 0 ? ord_add(idx, Ordinal::omega()) : idx.succ();
        }
        d.alpha = ord_add(idx, Ordinal(rng() % 2));
        d.polarity = rng() % 2 ? Polarity::D : Polarity::CoD;
        auto h = hausdorff_from_diff(d, m);
        h.validate();
        for (int x = 0; x < p.size(); ++x) ASSERT_EQ(eval_hausdorff_code(h, m, x), eval_diff(d, x));
        auto back = hausdorff_from_json(hausdorff_to_json(h));
        for (int x = 0; x < p.size(); ++x) ASSERT_EQ(eval_hausdorff_code(back, m, x), eval_diff(d, x));
    }
}

// ---- Presentations and F ---------------------------------------------------

TEST(ComputeF, StageZero) {
    CylinderModel m(3);
    auto pres = first_one_presentation(m);
    for (Index i = 0; i < 20; ++i) {
        EXPECT_EQ(compute_F(pres, m, i, 0, 0), 0u);
        EXPECT_EQ(compute_F(pres, m, i, 0, 1), 0u);
    }
}

TEST(ComputeF, SubCylinderOfPresentedOpen) {
    CylinderModel m(3);
    const Index one = m.index({1});
    auto pres = rows_presentation("one", {{one}}, {{m.index({0}), m.index({2})}}, m);
    const Index sub = m.index({1, 0});
    for (std::uint64_t t = sub + 1; t < 40; ++t) EXPECT_EQ(compute_F(pres, m, sub, t, 1), t);
    // [1] itself has no proper prefix inside [1]
    EXPECT_EQ(compute_F(pres, m, one, 30, 1), 0u);
    // [00] is not inside the first union
    EXPECT_EQ(compute_F(pres, m, m.index({0, 0}), 30, 1), 0u);
    EXPECT_EQ(compute_F(pres, m, m.index({0, 0}), 30, 0), 30u);
}

TEST(ComputeF, FirstOneHandValues) {
    CylinderModel m(3);
    auto pres = first_one_presentation(m);
    const Index z = m.index({0});
    EXPECT_EQ(compute_F(pres, m, z, 2, 0), 1u);
    EXPECT_EQ(compute_F(pres, m, z, 2, 1), 0u);
    const Index w = m.index({0, 1, 0});
    EXPECT_EQ(compute_F(pres, m, w, 17, 1), 17u);
    EXPECT_EQ(compute_F(pres, m, w, 17, 0), 2u);
    // the last prefix of [010] is enumerated only from stage 17
    EXPECT_EQ(compute_F(pres, m, w, 16, 1), 0u);
}

TEST(ComputeF, EventSkipsAreExact) {
    CylinderModel m(3);
    auto pres = first_one_presentation(m);
    FTable f(pres, m);
    for (Index i = 0; i < 60; ++i)
        for (std::uint64_t t = 0; t < 200;) {
            const auto nt = f.next_change(i, t);
            ASSERT_GT(nt, t);
            for (std::uint64_t u = t + 1; u < std::min<std::uint64_t>(nt, 200); ++u) {
                ASSERT_EQ(f.type(i, u), f.type(i, t)) << i << " " << t << " " << u;
                ASSERT_EQ(compute_F(pres, m, i, u, 0) == u, f.F(i, t, 0) == t);
            }
            t = nt;
        }
}

TEST(Presentation, FirstOneIsDisjointAndCovering) {
    CylinderModel m(3);
    auto pres = first_one_presentation(m);
    auto pts = cylinder_points(4, kCycles);
    EXPECT_TRUE(check_presentation(pres, m, pts, 8, 1u << 20).empty());
    for (const auto& x : pts) {
        bool in1 = true;
        for (std::uint64_t n = 0; n < 8; ++n) in1 = in1 && m.member(x, pres.row(1, n, 1u << 20));
        EXPECT_EQ(in1, pres.truth(x)) << point_str(x);
    }
}

TEST(Presentation, OpenButNotClosedTargetIsFlagged) {
    FinitePosetModel m(FinitePoset::chain(3));
    // {2} is open but its complement is not, so the whole space is the best
    // open cover of the complement
    auto pres = rows_presentation("top", {{basis_index(m, S({2}))}}, {{basis_index(m, S({0, 1, 2}))}}, m);
    auto issues = check_presentation(pres, m, {Point{0}, Point{1}, Point{2}}, 1, 100);
    ASSERT_EQ(issues.size(), 1u);
    EXPECT_EQ(std::get<int>(issues[0].x), 2);
}

TEST(Presentation, Json) {
    CylinderModel m(3);
    auto a = presentation_from_json(nlohmann::json::parse(R"({"builtin":"first-one"})"), m);
    EXPECT_EQ(a.name, "first-one");
    auto b = presentation_from_json(nlohmann::json::parse(R"({"rows1":[[2]],"rows0":[[1,3]]})"), m);
    EXPECT_EQ(b.row(1, 5, 10), (Union{2}));
    EXPECT_EQ(b.row(0, 0, 2), (Union{1}));
    EXPECT_THROW(presentation_from_json(nlohmann::json::parse(R"({"rows1":[[2]]})"), m), std::invalid_argument);
    FinitePosetModel fm(FinitePoset::chain(2));
    EXPECT_THROW(presentation_from_json(nlohmann::json::parse(R"({"builtin":"first-one"})"), fm), std::invalid_argument);
}

// ---- Tree and transform ----------------------------------------------------

TEST(AltTree, EmptyTargetGivesFlatTree) {
    CylinderModel m(3);
    auto pres = rows_presentation("empty", {{}}, {{0}}, m);
    auto pt = build_alt_tree(pres, m, 24);
    ASSERT_GT(pt.tree.size(), 1);
    for (int n = 1; n < pt.tree.size(); ++n) {
        EXPECT_EQ(pt.type[n], 0);
        EXPECT_EQ(pt.tree.node(n).depth, 1);
    }
}

TEST(AltTree, FirstOneTypesAlternate) {
    CylinderModel m(3);
    auto pres = first_one_presentation(m);
    auto pt = build_alt_tree(pres, m, 24);
    const std::uint64_t enc = pt.budget + 1;
    auto root_child = pt.tree.find_child(0, m.index({0}) * enc + 2);
    ASSERT_TRUE(root_child);
    EXPECT_EQ(pt.type[*root_child], 0);
    auto grand = pt.tree.find_child(*root_child, m.index({0, 1, 0}) * enc + 17);
    ASSERT_TRUE(grand);
    EXPECT_EQ(pt.type[*grand], 1);
    int depth = 0;
    for (int n = 1; n < pt.tree.size(); ++n) {
        const int par = pt.tree.node(n).parent;
        depth = std::max(depth, pt.tree.node(n).depth);
        if (par == 0) continue;
        EXPECT_NE(pt.type[n], pt.type[par]);
        EXPECT_LT(pt.m[par], pt.m[n]);
        EXPECT_LT(pt.t[par], pt.t[n]);
        EXPECT_TRUE(m.ll_at(pt.m[par], pt.m[n], pt.t[n]));
    }
    // a type-1 open lies inside the target, so nothing of type 0 sits below it
    EXPECT_EQ(depth, 2);
}

TEST(AltTree, NodeCapTruncates) {
    CylinderModel m(3);
    auto pres = first_one_presentation(m);
    auto pt = build_alt_tree(pres, m, 32, 50);
    EXPECT_TRUE(pt.truncated);
    EXPECT_LE(pt.tree.size(), 50);
    EXPECT_THROW(effective_hausdorff_transform(pres, m, 32, 50), ModelError);
}

namespace {

struct FiniteInstance {
    const char* name;
    FinitePoset poset;
    PointSet target;
};

// Finite Scott spaces only have unions of components as clopens.
std::vector<FiniteInstance> finite_instances() {
    return {
        {"antichain", FinitePoset::antichain(3), S({2})},
        {"two chains", FinitePoset(4, {{0, 1}, {2, 3}}), S({0, 1})},
        {"chain empty", FinitePoset::chain(3), 0},
        {"chain full", FinitePoset::chain(3), S({0, 1, 2})},
        {"vee and point", FinitePoset(4, {{0, 1}, {0, 2}}), S({0, 1, 2})},
    };
}

// One row per side: the basic opens inside the target and inside its complement.
StagedPresentation clopen_rows(const FinitePosetModel& m, PointSet target) {
    Union in, out;
    for (Index i = 0; i < m.basis().size(); ++i) {
        if (hier::subset(m.open(i), target)) in.push_back(i);
        if (hier::subset(m.open(i), m.poset().complement(target))) out.push_back(i);
    }
    return rows_presentation("clopen", {in}, {out}, m);
}

}  // namespace

TEST(Transform, FiniteClopenInstances) {
    for (const auto& inst : finite_instances()) {
        FinitePosetModel m(inst.poset);
        auto pres = clopen_rows(m, inst.target);
        std::vector<Point> pts;
        for (int x = 0; x < inst.poset.size(); ++x) pts.push_back(x);
        ASSERT_TRUE(check_presentation(pres, m, pts, 1, 64).empty()) << inst.name;
        auto r = effective_hausdorff_transform(pres, m, 16);
        EXPECT_TRUE(r.parity_ok) << r.parity_failure;
        EXPECT_FALSE(r.xi.odd());
        auto h = hausdorff_from_index_code(r.code);
        h.validate();
        FTable f(pres, m);
        for (int x = 0; x < inst.poset.size(); ++x) {
            EXPECT_EQ(eval_index_code(r.code, m, x), contains(inst.target, x)) << inst.name << " at " << x;
            EXPECT_EQ(eval_hausdorff_code(h, m, x), eval_index_code(r.code, m, x));
            EXPECT_EQ(lazy_eval(f, x, 16).value, contains(inst.target, x));
        }
    }
}

TEST(Transform, OrderTypeAndParity) {
    CylinderModel m(3);
    auto pres = first_one_presentation(m);
    auto r = effective_hausdorff_transform(pres, m, 24);
    const auto n = static_cast<std::uint64_t>(r.tree.tree.size());
    EXPECT_EQ(r.xi, ord_add(Ordinal::omega_pow(1, n), Ordinal(2)));
    EXPECT_TRUE(r.parity_ok) << r.parity_failure;
    ASSERT_EQ(r.code.entries.size(), n - 1);
    for (const auto& e : r.code.entries) EXPECT_TRUE(e.index >= Ordinal::omega());
    // root last in Kleene-Brouwer order
    EXPECT_EQ(r.kb.back(), 0);
}

TEST(Transform, LazyMatchesMaterialized) {
    CylinderModel m(3);
    auto pres = first_one_presentation(m);
    auto pts = cylinder_points(3, kCycles);
    for (std::uint64_t b : {12u, 24u, 40u}) {
        auto r = effective_hausdorff_transform(pres, m, b);
        auto h = hausdorff_from_index_code(r.code);
        FTable f(pres, m);
        for (const auto& x : pts) {
            const bool v = eval_index_code(r.code, m, x);
            ASSERT_EQ(lazy_eval(f, x, b).value, v) << point_str(x) << " at " << b;
            ASSERT_EQ(eval_hausdorff_code(h, m, x), v);
        }
    }
}

TEST(Transform, CylinderConvergesByDoubling) {
    CylinderModel m(3);
    auto pres = first_one_presentation(m);
    auto pts = cylinder_points(2, kCycles);
    auto rep = transform_until_stable(pres, m, pts, 4, 1u << 12, 4);
    EXPECT_FALSE(rep.incomplete);
    EXPECT_EQ(rep.disagreements, 0);
    for (const auto& row : rep.rows) {
        EXPECT_TRUE(row.growth_ok);
        EXPECT_EQ(row.value, *row.truth) << point_str(row.x);
    }
}

TEST(Transform, IncompleteNamesTheFlippingBudget) {
    CylinderModel m(3);
    auto pres = first_one_presentation(m);
    // the witness [000010] has index 366
    Point x = WordPoint{{0, 0, 0, 0, 1}, {0}};
    auto rep = verify_transform(pres, m, {x}, 64, 8);
    EXPECT_TRUE(rep.incomplete);
    EXPECT_EQ(rep.next_budget, 512u);
    EXPECT_FALSE(rep.rows[0].stable);
    auto ok = verify_transform(pres, m, {x}, 512, 4);
    EXPECT_FALSE(ok.incomplete);
    EXPECT_TRUE(ok.rows[0].value);
}

TEST(Transform, OppositeExtensionsExist) {
    CylinderModel m(3);
    auto pres = first_one_presentation(m);
    FTable f(pres, m);
    const std::uint64_t budget = 4096;
    for (const auto& x : cylinder_points(3, kCycles)) {
        const bool in = pres.truth(x);
        auto path = lazy_eval(f, x, budget).path;
        ASSERT_FALSE(path.empty());
        for (const auto& step : path) {
            if (step.type == static_cast<int>(in)) continue;
            auto ext = opposite_extension(f, x, step, budget);
            ASSERT_TRUE(ext) << point_str(x);
            EXPECT_EQ(ext->type, static_cast<int>(in));
            EXPECT_TRUE(m.member(x, ext->m));
        }
        EXPECT_EQ(path.back().type, static_cast<int>(in)) << point_str(x);
    }
}

TEST(Transform, GrowthAlongPaths) {
    CylinderModel m(3);
    auto pres = first_one_presentation(m);
    FTable f(pres, m);
    for (const auto& x : cylinder_points(3, kCycles)) {
        auto r = lazy_eval(f, x, 2048);
        EXPECT_TRUE(r.growth_ok);
        for (std::size_t l = 0; l < r.path.size(); ++l)
            EXPECT_GE(std::min(r.path[l].f0, r.path[l].f1), l / 2);
    }
}
