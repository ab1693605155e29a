// hier: command-line front end for the difference-hierarchy library.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <random>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "hier/alt_trees.hpp"
#include "hier/diff_hierarchy.hpp"
#include "hier/effective_codes.hpp"
#include "hier/games.hpp"
#include "hier/io.hpp"
#include "hier/residues.hpp"
#include "hier/space_models.hpp"

using nlohmann::json;
using namespace hier;

namespace {

constexpr int kValidation = 1;
constexpr int kBudget = 2;

struct Failure : std::runtime_error {
    Failure(int code, std::string kind, const std::string& msg, json detail = nullptr)
        : std::runtime_error(msg), code(code), kind(std::move(kind)), detail(std::move(detail)) {}
    int code;
    std::string kind;
    json detail;
};

// Non-zero exit with a full result attached (verification failed, budget ran
// out); the result is still printed.
struct Verdict {
    int code = 0;
    std::string kind;
    std::string message;
};

std::string digest(const json& inputs) {
    // FNV-1a over the canonical dump
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : inputs.dump()) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

json union_json(const SpaceModel& m, const Union& u) {
    json opens = json::array();
    for (Index i : u) opens.push_back(m.describe(i));
    return {{"ids", u}, {"opens", opens}};
}

json sets_json(const std::vector<PointSet>& v) {
    json out = json::array();
    for (auto s : v) out.push_back(set_to_json(s));
    return out;
}

// Canonical form of a model argument for the digest: parsed JSON, or the
// shorthand itself.
json model_input(const std::string& arg) {
    try {
        return json::parse(read_json_arg(arg));
    } catch (const std::exception&) {
        return arg;
    }
}

json level_json(const LevelPair& l) { return {{"sigma", l.sigma}, {"pi", l.pi}}; }

// ---- classify / residues / alt -----------------------------------------

struct SetArgs {
    std::string poset;
    std::string set;
};

json run_classify(const SetArgs& a, const std::string& method, std::uint64_t budget, json& inputs, Verdict& v) {
    auto p = load_poset(a.poset);
    PointSet s = parse_set(a.set, p.size());
    inputs = {{"poset", poset_to_json(p)}, {"set", set_to_json(s)}, {"method", method}, {"budget", budget}};
    const bool all = method == "all";
    if (!all && method != "residues" && method != "alt" && method != "brute")
        throw Failure(kValidation, "validation", "unknown method '" + method + "'");

    json methods = json::object();
    std::vector<LevelPair> levels;
    if (all || method == "residues") {
        auto d = hausdorff_decompose(s, p);
        levels.push_back(d.level);
        methods["residues"] = {{"level", level_json(d.level)},
                               {"chain", sets_json(d.chain.sets)},
                               {"theta", d.chain.theta},
                               {"code", diff_code_to_json(d.trimmed)},
                               {"co_code", diff_code_to_json(d.trimmed_co)}};
    }
    if (all || method == "alt") {
        auto l = alt_levels(s, p);
        levels.push_back(l);
        methods["alt"] = {{"level", level_json(l)},
                          {"chain_from_inside", alt_chain(s, p, 1)},
                          {"chain_from_outside", alt_chain(s, p, 0)}};
    }
    if (all || method == "brute") {
        try {
            auto l = level_bruteforce(s, p, budget);
            levels.push_back(l);
            methods["brute"] = {{"level", level_json(l)}};
        } catch (const ResourceLimit& e) {
            throw Failure(kBudget, "budget", e.what());
        }
    }
    bool agree = std::all_of(levels.begin(), levels.end(), [&](const LevelPair& l) { return l == levels.front(); });
    if (!agree) v = {kValidation, "disagreement", "classifiers disagree"};
    return {{"set", set_to_json(s)},
            {"sigma", levels.front().sigma},
            {"pi", levels.front().pi},
            {"agree", agree},
            {"methods", methods}};
}

json run_residues(const SetArgs& a, json& inputs) {
    auto p = load_poset(a.poset);
    PointSet s = parse_set(a.set, p.size());
    inputs = {{"poset", poset_to_json(p)}, {"set", set_to_json(s)}};
    auto d = hausdorff_decompose(s, p);
    return {{"set", set_to_json(s)},
            {"chain", sets_json(d.chain.sets)},
            {"theta", d.chain.theta},
            {"code", diff_code_to_json(d.code)},
            {"level", level_json(d.level)},
            {"trimmed", diff_code_to_json(d.trimmed)},
            {"trimmed_co", diff_code_to_json(d.trimmed_co)}};
}

json run_alt(const SetArgs& a, int root, json& inputs) {
    auto p = load_poset(a.poset);
    PointSet s = parse_set(a.set, p.size());
    inputs = {{"poset", poset_to_json(p)}, {"set", set_to_json(s)}, {"root", root}};
    auto rank = [&](int eps) -> json {
        auto r = max_alt_rank(s, p, eps);
        return r ? json(*r) : json(nullptr);
    };
    json out = {{"set", set_to_json(s)},
                {"level", level_json(alt_levels(s, p))},
                {"rank_from_inside", rank(1)},
                {"rank_from_outside", rank(0)},
                {"chain_from_inside", alt_chain(s, p, 1)},
                {"chain_from_outside", alt_chain(s, p, 0)},
                {"heights", alt_heights(s, p)},
                {"code", diff_code_to_json(diff_code_from_trees(s, p))}};
    if (root >= 0) {
        if (root >= p.size()) throw Failure(kValidation, "validation", "--root is not a point of the poset");
        try {
            auto t = alternating_tree(s, p, root);
            json seqs = json::array();
            for (int i = 0; i < t.tree.size(); ++i) {
                json labels = json::array();
                for (int k = i; k != -1; k = t.tree.node(k).parent) labels.insert(labels.begin(), t.labels[k]);
                seqs.push_back(labels);
            }
            out["tree"] = {{"nodes", t.tree.size()}, {"rank", tree_rank(t.tree)}, {"branches", seqs}};
        } catch (const ResourceLimit& e) {
            throw Failure(kBudget, "budget", e.what());
        }
    }
    return out;
}

// ---- play -------------------------------------------------------------------

json run_play(const std::string& model, const std::string& game, const std::string& nonempty,
              const std::string& empty, int rounds, std::uint64_t seed, json& inputs) {
    auto m = load_model(model);
    inputs = {{"model", model_input(model)},
              {"game", game},
              {"nonempty", nonempty},
              {"empty", empty},
              {"rounds", rounds},
              {"seed", seed}};
    if (rounds < 1) throw Failure(kValidation, "validation", "--rounds must be positive");
    GameKind kind;
    if (game == "choquet") kind = GameKind::Choquet;
    else if (game == "bm" || game == "banach-mazur") kind = GameKind::BanachMazur;
    else throw Failure(kValidation, "validation", "unknown game '" + game + "'");

    Strategy sigma;
    if (nonempty == "relation") sigma = stationary_from_relation(*m);
    else if (nonempty == "refinement") sigma = least_inside_strategy(*m);
    else throw Failure(kValidation, "validation", "unknown Nonempty strategy '" + nonempty + "'");

    EmptyStrategy e;
    if (empty == "random") e = random_empty(*m, seed);
    else if (empty == "deepest") e = deepest_descent_empty(*m, seed);
    else if (empty == "chase") e = clause_chasing_empty(*m, seed);
    else throw Failure(kValidation, "validation", "unknown Empty strategy '" + empty + "'");

    auto t = play(kind, e, sigma, *m, rounds);
    json rs = json::array();
    for (const auto& r : t.rounds) {
        json row = {{"u", union_json(*m, r.u)}, {"v", union_json(*m, r.v)}};
        if (r.x) row["x"] = point_str(*r.x);
        rs.push_back(row);
    }
    return {{"game", game_str(t.game)},
            {"model", m->kind()},
            {"rounds", rs},
            {"outcome", outcome_str(t.outcome)},
            {"witness", t.witness ? json(point_str(*t.witness)) : json(nullptr)},
            {"forfeit", t.forfeit},
            {"reason", t.reason}};
}

// ---- baire ------------------------------------------------------------------

json run_baire(const std::string& model, int count, int rounds, std::uint64_t budget, long long target,
               std::uint64_t seed, json& inputs, Verdict& v) {
    auto base = load_model(model);
    auto cyl = std::dynamic_pointer_cast<const CylinderModel>(std::shared_ptr<const SpaceModel>(std::move(base)));
    if (!cyl) throw Failure(kValidation, "validation", "baire needs a cylinder model");
    if (count < 1) throw Failure(kValidation, "validation", "--constraints must be positive");
    if (rounds < 0) rounds = 4 * count;
    std::mt19937_64 rng(seed);
    std::vector<DenseConstraint> dense;
    json names = json::array();
    for (int i = 0; i < count; ++i) {
        dense.push_back(random_cylinder_constraint(cyl, rng));
        names.push_back({{"open", dense.back().open.name}, {"closed_complement", dense.back().closed_complement.name}});
    }
    Index tgt = target >= 0 ? static_cast<Index>(target) : rng() % 40;
    inputs = {{"model", model_input(model)}, {"constraints", count}, {"rounds", rounds}, {"budget", budget},
              {"target", tgt}, {"seed", seed}};
    auto r = baire_witness(*cyl, dense, tgt, [count](int n) { return (n - 1) % count; }, rounds, budget);
    json chain = json::array();
    for (Index i : r.chain) chain.push_back(cyl->describe(i));
    if (r.status == BaireStatus::BudgetExceeded) v = {kBudget, "budget", "step budget exhausted"};
    else if (r.status == BaireStatus::DensityViolation) v = {kValidation, "density", "constraint is not dense"};
    else if (!r.verified) v = {kValidation, "verification", "witness point failed verification"};
    return {{"status", baire_status_str(r.status)},
            {"target", cyl->describe(tgt)},
            {"constraints", names},
            {"chain", chain},
            {"point", r.point ? json(point_str(*r.point)) : json(nullptr)},
            {"steps", r.steps},
            {"verified", r.verified},
            {"failed_constraint", r.failed_constraint},
            {"failed_round", r.failed_round}};
}

// ---- eval-code --------------------------------------------------------------

std::vector<Point> all_points(const SpaceModel& m) {
    std::vector<Point> pts;
    if (auto* fp = dynamic_cast<const FinitePosetModel*>(&m))
        for (int i = 0; i < fp->poset().size(); ++i) pts.push_back(i);
    return pts;
}

json run_eval(const std::string& model, const std::string& borel, const std::string& side,
              const std::string& hausdorff, const std::string& diff, const std::vector<std::string>& point_args,
              json& inputs) {
    auto m = load_model(model);
    const int given = !borel.empty() + !hausdorff.empty() + !diff.empty();
    if (given != 1) throw Failure(kValidation, "validation", "give exactly one of --borel, --hausdorff, --diff");
    std::vector<Point> pts;
    for (const auto& s : point_args) pts.push_back(parse_point(*m, s));
    if (point_args.empty()) pts = all_points(*m);
    if (pts.empty()) throw Failure(kValidation, "validation", "--point is required on infinite models");

    json code;
    std::function<bool(const Point&)> eval;
    if (!borel.empty()) {
        if (side != "sigma" && side != "pi") throw Failure(kValidation, "validation", "--side is sigma or pi");
        auto c = borel_from_json(json::parse(read_json_arg(borel)));
        code = borel_to_json(c);
        Side sd = side == "sigma" ? Side::Sigma : Side::Pi;
        eval = [c, sd, &m](const Point& x) { return eval_borel(c, *m, sd, x); };
    } else if (!hausdorff.empty()) {
        auto c = hausdorff_from_json(json::parse(read_json_arg(hausdorff)));
        c.validate();
        code = hausdorff_to_json(c);
        eval = [c, &m](const Point& x) { return eval_hausdorff_code(c, *m, x); };
    } else {
        auto* fp = dynamic_cast<const FinitePosetModel*>(m.get());
        if (!fp) throw Failure(kValidation, "validation", "--diff codes need a poset model");
        auto c = diff_code_from_json(json::parse(read_json_arg(diff)), fp->poset().size());
        code = diff_code_to_json(c);
        eval = [c](const Point& x) { return eval_diff(c, std::get<int>(x)); };
    }
    inputs = {{"model", model_input(model)}, {"code", code}, {"side", side}};
    json values = json::array();
    for (const auto& x : pts) {
        values.push_back({{"point", point_str(x)}, {"value", eval(x)}});
        inputs["points"].push_back(point_str(x));
    }
    return {{"code", code}, {"values", values}};
}

// ---- transform --------------------------------------------------------------

json run_transform(const std::string& model, const std::string& presentation, std::uint64_t budget,
                   std::uint64_t max_budget, std::uint64_t lookahead, int depth,
                   const std::vector<std::string>& point_args, json& inputs, Verdict& v) {
    auto m = load_model(model);
    json pj = presentation == "first-one" ? json{{"builtin", "first-one"}} : json::parse(read_json_arg(presentation));
    auto pres = presentation_from_json(pj, *m);
    std::vector<Point> pts;
    for (const auto& s : point_args) pts.push_back(parse_point(*m, s));
    if (pts.empty()) {
        if (auto* cm = dynamic_cast<const CylinderModel*>(m.get()))
            pts = cylinder_points(cm->alphabet(), depth, short_cycles(cm->alphabet()));
        else
            pts = all_points(*m);
    }
    if (pts.empty()) throw Failure(kValidation, "validation", "--point is required on this model");
    if (budget < 1 || lookahead < 2) throw Failure(kValidation, "validation", "--budget >= 1 and --lookahead >= 2");
    inputs = {{"model", model_input(model)}, {"presentation", pj}, {"budget", budget}, {"max_budget", max_budget},
              {"lookahead", lookahead}, {"points", json::array()}};
    for (const auto& x : pts) inputs["points"].push_back(point_str(x));

    // Word points are decided by rows a little longer than their description.
    std::uint64_t rows = 0;
    for (const auto& x : pts)
        if (auto* w = std::get_if<WordPoint>(&x)) rows = std::max<std::uint64_t>(rows, w->prefix.size() + w->cycle.size() + 2);
    auto issues = check_presentation(pres, *m, pts, rows ? rows : 32, std::uint64_t{1} << 24);
    if (!issues.empty()) {
        json bad = json::array();
        for (const auto& i : issues) bad.push_back({{"point", point_str(i.x)}, {"in1", i.in1}, {"in0", i.in0}});
        throw Failure(kValidation, "presentation", "the two presented sets do not partition the points",
                      {{"points", bad}});
    }

    auto rep = transform_until_stable(pres, *m, pts, budget, max_budget, lookahead);
    json table = json::array();
    for (const auto& r : rep.rows)
        table.push_back({{"point", point_str(r.x)},
                         {"value", r.value},
                         {"truth", r.truth ? json(*r.truth) : json(nullptr)},
                         {"stable", r.stable},
                         {"growth_ok", r.growth_ok}});
    json out = {{"presentation", pres.name},
                {"budget", rep.budget},
                {"lookahead", rep.lookahead},
                {"incomplete", rep.incomplete},
                {"disagreements", rep.disagreements},
                {"table", table}};
    if (rep.incomplete) out["next_budget"] = rep.next_budget;
    // The explicit code is only built when the tree stays small.
    try {
        auto t = effective_hausdorff_transform(pres, *m, rep.budget, 20000);
        out["code"] = {{"xi", t.xi.str()},
                       {"nodes", t.tree.tree.size()},
                       {"entries", t.code.entries.size()},
                       {"parity_ok", t.parity_ok}};
        if (!t.parity_ok) v = {kValidation, "parity", t.parity_failure};
    } catch (const ModelError& e) {
        out["code"] = {{"skipped", e.what()}};
    }
    if (rep.disagreements > 0) v = {kValidation, "disagreement", "transform disagrees with the ground truth"};
    if (rep.incomplete) v = {kBudget, "budget", "INCOMPLETE: answers still change at the maximum budget"};
    return out;
}

// ---- audit --------------------------------------------------------------------

json run_audit(int max_n, int level_max, int threads, json& inputs, Verdict& v) {
    if (max_n < 1 || max_n > 5) throw Failure(kValidation, "validation", "--exhaustive must be in 1..5");
    inputs = {{"exhaustive", max_n}, {"n_max", level_max}};
    std::vector<FinitePoset> posets;
    for (int n = 1; n <= max_n; ++n)
        for (auto& p : FinitePoset::enumerate_all(n)) posets.push_back(std::move(p));

    struct PerPoset {
        int subsets = 0;
        std::vector<json> disagreements;
        AuditReport audit;
    };
    std::vector<PerPoset> res(posets.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i; (i = next++) < posets.size();) {
            const auto& p = posets[i];
            auto& r = res[i];
            for (PointSet s = 0; s <= p.carrier(); ++s) {
                ++r.subsets;
                auto a = hausdorff_decompose(s, p).level, b = alt_levels(s, p), c = level_bruteforce(s, p);
                if (!(a == b && b == c))
                    r.disagreements.push_back({{"poset", poset_to_json(p)},
                                               {"set", set_to_json(s)},
                                               {"residues", level_json(a)},
                                               {"alt", level_json(b)},
                                               {"brute", level_json(c)}});
            }
            r.audit = ambiguity_audit(p, level_max);
        }
    };
    threads = std::max(1, threads);
    std::vector<std::thread> pool;
    for (int k = 1; k < threads; ++k) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();

    int subsets = 0, audited = 0, least_bad = 0, succ_bad = 0;
    json disagreements = json::array(), examples = json::array();
    for (std::size_t i = 0; i < posets.size(); ++i) {
        subsets += res[i].subsets;
        audited += res[i].audit.checked_sets;
        for (auto& d : res[i].disagreements) disagreements.push_back(d);
        for (const auto& viol : res[i].audit.violations) {
            (viol.kind == "least" ? least_bad : succ_bad)++;
            if (examples.size() < 10)
                examples.push_back({{"poset", poset_to_json(posets[i])},
                                    {"kind", viol.kind},
                                    {"n", viol.n},
                                    {"set", set_to_json(viol.subset)}});
        }
    }
    const int total = static_cast<int>(disagreements.size()) + least_bad + succ_bad;
    if (total > 0) v = {kValidation, "violations", std::to_string(total) + " violations"};
    return {{"posets", posets.size()},
            {"subsets", subsets},
            {"classifier_disagreements", disagreements},
            {"ambiguity", {{"checked_sets", audited},
                           {"least_violations", least_bad},
                           {"successor_violations", succ_bad},
                           {"examples", examples}}},
            {"violations", total}};
}

// ---- gen ------------------------------------------------------------------------

json run_gen(const std::string& kind, int n, double density, int size, std::uint64_t seed, json& inputs) {
    inputs = {{"kind", kind}, {"n", n}, {"density", density}, {"size", size}, {"seed", seed}};
    if (n < 1 || n > kMaxPoints) throw Failure(kValidation, "validation", "--n must be in 1..64");
    std::mt19937_64 rng(seed);
    if (kind == "poset") return poset_to_json(FinitePoset::random(n, density, rng));
    if (kind == "model") {
        auto j = poset_to_json(FinitePoset::random(n, density, rng));
        j["kind"] = "poset";
        return j;
    }
    if (kind == "set") {
        auto p = FinitePoset::random(n, density, rng);
        return {{"poset", poset_to_json(p)}, {"set", set_to_json(rng() & p.carrier())}};
    }
    if (kind == "code") {
        // nested opens give a D_size code
        auto p = FinitePoset::random(n, density, rng);
        std::vector<PointSet> sets;
        PointSet cur = 0;
        for (int i = 0; i < size; ++i) {
            cur = p.up_closure(cur | (rng() & p.carrier()));
            sets.push_back(cur);
        }
        return {{"poset", poset_to_json(p)}, {"code", diff_code_to_json(make_code(sets))}};
    }
    if (kind == "borel") {
        // random tree over basic-open labels 0..n-1
        std::vector<std::vector<std::uint64_t>> seqs;
        for (int i = 0; i < size; ++i) {
            std::vector<std::uint64_t> s(1 + rng() % 2);
            for (auto& e : s) e = rng() % n;
            seqs.push_back(s);
        }
        return borel_to_json(BorelCode{WfTree::from_sequences(seqs)});
    }
    throw Failure(kValidation, "validation", "unknown --kind '" + kind + "'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Difference-hierarchy toolkit"};
    app.require_subcommand(1);

    std::uint64_t seed = 1;
    std::string json_out;
    auto common = [&](CLI::App* sub) {
        sub->add_option("--seed", seed, "Random seed");
        sub->add_option("--json-out", json_out, "Also write the report to this file");
    };

    SetArgs sa;
    std::string method = "all", model, game = "choquet", nonempty = "relation", empty = "random";
    std::string borel, side = "sigma", hausdorff, diff, presentation = "first-one", kind = "poset";
    std::vector<std::string> points;
    std::uint64_t budget = 0, baire_budget = 10000, transform_budget = 16, max_budget = 1u << 16, lookahead = 2;
    std::string baire_model = R"({"kind":"cylinder","alphabet":3})", eval_model = R"({"kind":"pn"})";
    std::string transform_model = baire_model;
    int baire_rounds = -1;
    int rounds = 20, root = -1, constraints = 3, depth = 2, exhaustive = 4, level_max = 3, n = 6, size = 3;
    int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    long long target = -1;
    double density = 0.3;

    auto* classify = app.add_subcommand("classify", "Difference levels of a subset of a finite poset");
    auto* residues = app.add_subcommand("residues", "Residue chain and difference code");
    auto* alt = app.add_subcommand("alt", "Alternating chains and trees");
    for (auto* sub : {classify, residues, alt}) {
        sub->add_option("--poset", sa.poset, "Poset JSON, file, or chainN/antichainN/prefixK.D")->required();
        sub->add_option("--set", sa.set, "Subset, e.g. \"1,2\"")->required();
        common(sub);
    }
    classify->add_option("--method", method, "residues, alt, brute or all");
    classify->add_option("--budget", budget, "State limit of the brute-force search");
    alt->add_option("--root", root, "Also build the alternating tree from this point");

    auto* playc = app.add_subcommand("play", "Play a Choquet or Banach-Mazur game");
    playc->add_option("--model", model, "Model JSON, file or poset shorthand")->required();
    playc->add_option("--game", game, "choquet or bm");
    playc->add_option("--nonempty", nonempty, "relation or refinement");
    playc->add_option("--empty", empty, "random, deepest or chase");
    playc->add_option("--rounds", rounds, "Number of rounds");
    common(playc);

    auto* baire = app.add_subcommand("baire", "Witness for dense open-or-closed constraints on a cylinder");
    baire->add_option("--model", baire_model, "Cylinder model");
    baire->add_option("--constraints", constraints, "Number of random dense constraints");
    baire->add_option("--rounds", baire_rounds, "Chain length (default 4 per constraint)");
    baire->add_option("--budget", baire_budget, "Step budget");
    baire->add_option("--target", target, "Index of the target basic open (default: seeded)");
    common(baire);

    auto* evalc = app.add_subcommand("eval-code", "Evaluate a Borel, Hausdorff or difference code");
    evalc->add_option("--model", eval_model, "Model (default P(N))");
    evalc->add_option("--borel", borel, "Borel code JSON or file");
    evalc->add_option("--side", side, "sigma or pi");
    evalc->add_option("--hausdorff", hausdorff, "Hausdorff code JSON or file");
    evalc->add_option("--diff", diff, "Difference code JSON or file (poset models)");
    evalc->add_option("--point", points, "Point(s); all points of a finite model by default");
    common(evalc);

    auto* transform = app.add_subcommand("transform", "Effective Hausdorff transform with verification table");
    transform->add_option("--model", transform_model, "Model (default cylinders over 3 letters)");
    transform->add_option("--presentation", presentation, "first-one, or rows JSON / file");
    transform->add_option("--budget", transform_budget, "Starting stage budget");
    transform->add_option("--max-budget", max_budget, "Largest budget tried by doubling");
    transform->add_option("--lookahead", lookahead, "Stability factor");
    transform->add_option("--depth", depth, "Prefix length of cylinder test points");
    transform->add_option("--point", points, "Explicit test points");
    common(transform);

    auto* audit = app.add_subcommand("audit", "Exhaustive classifier and ambiguity audit");
    audit->add_option("--exhaustive", exhaustive, "All posets with up to this many points");
    audit->add_option("--n-max", level_max, "Largest level in the ambiguity check");
    audit->add_option("--threads", threads, "Worker threads");
    common(audit);

    auto* gen = app.add_subcommand("gen", "Seeded random posets, models and codes");
    gen->add_option("--kind", kind, "poset, model, set, code or borel");
    gen->add_option("--n", n, "Points (or basic opens for borel)");
    gen->add_option("--density", density, "Edge probability");
    gen->add_option("--size", size, "Code length / tree branches");
    common(gen);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cout << json{{"error", {{"kind", "usage"}, {"message", e.what()}}}}.dump(2) << "\n";
        return kValidation;
    }

    auto* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    json inputs, result;
    Verdict verdict;
    int code = 0;
    const auto t0 = std::chrono::steady_clock::now();
    json report = {{"command", name}, {"argv", std::vector<std::string>(argv + 1, argv + argc)}, {"seed", seed}};
    try {
        if (name == "classify") {
            result = run_classify(sa, method, budget ? budget : (1u << 22), inputs, verdict);
        } else if (name == "residues") {
            result = run_residues(sa, inputs);
        } else if (name == "alt") {
            result = run_alt(sa, root, inputs);
        } else if (name == "play") {
            result = run_play(model, game, nonempty, empty, rounds, seed, inputs);
        } else if (name == "baire") {
            result = run_baire(baire_model, constraints, baire_rounds, baire_budget, target, seed, inputs, verdict);
        } else if (name == "eval-code") {
            result = run_eval(eval_model, borel, side, hausdorff, diff, points, inputs);
        } else if (name == "transform") {
            result = run_transform(transform_model, presentation, transform_budget, max_budget, lookahead, depth, points, inputs, verdict);
        } else if (name == "audit") {
            result = run_audit(exhaustive, level_max, threads, inputs, verdict);
        } else {
            result = run_gen(kind, n, density, size, seed, inputs);
        }
        report["inputs_digest"] = digest(inputs);
        report["result"] = result;
        if (verdict.code) {
            report["error"] = {{"kind", verdict.kind}, {"message", verdict.message}};
            code = verdict.code;
        }
    } catch (const Failure& f) {
        report["error"] = {{"kind", f.kind}, {"message", f.what()}};
        if (!f.detail.is_null()) report["error"]["detail"] = f.detail;
        code = f.code;
    } catch (const ResourceLimit& e) {
        report["error"] = {{"kind", "budget"}, {"message", e.what()}};
        code = kBudget;
    } catch (const std::exception& e) {
        // malformed JSON, bad points, invalid codes, unsupported models
        report["error"] = {{"kind", "validation"}, {"message", e.what()}};
        code = kValidation;
    }
    const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

    const std::string text = report.dump(2);
    std::cout << text << "\n";
    if (!json_out.empty()) {
        // gen writes the bare artifact so it can be passed back as an input
        std::ofstream out(json_out);
        out << (name == "gen" && code == 0 ? result.dump(2) : text) << "\n";
    }
    std::cerr << name << ": " << ms << " ms\n";
    return code;
}
