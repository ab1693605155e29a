#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <random>

#include "hier/alt_trees.hpp"
#include "hier/diff_hierarchy.hpp"
#include "hier/effective_codes.hpp"
#include "hier/games.hpp"
#include "hier/io.hpp"
#include "hier/ordinal.hpp"
#include "hier/residues.hpp"
#include "hier/space_models.hpp"

namespace py = pybind11;
using namespace hier;
using nlohmann::json;

namespace {

PointSet to_set(const std::vector<int>& xs, const FinitePoset& p) {
    PointSet s = 0;
    for (int x : xs) {
        if (x < 0 || x >= p.size()) throw py::value_error("point " + std::to_string(x) + " is not in the poset");
        s |= singleton(x);
    }
    return s;
}

py::object to_py(const json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

py::dict levels(const LevelPair& l) {
    py::dict d;
    d["sigma"] = l.sigma;
    d["pi"] = l.pi;
    return d;
}

}  // namespace

PYBIND11_MODULE(_hier, m) {
    m.doc() = "Difference hierarchies on finite posets and effectively presented spaces";

    py::register_exception<ModelError>(m, "ModelError");
    py::register_exception<ResourceLimit>(m, "ResourceLimit");

    py::class_<Ordinal>(m, "Ordinal")
        .def(py::init<std::uint64_t>(), py::arg("n") = 0)
        .def_static("parse", [](const std::string& s) { return Ordinal::parse(s); })
        .def_static("omega", &Ordinal::omega)
        .def("odd", &Ordinal::odd)
        .def("__add__", [](const Ordinal& a, const Ordinal& b) { return ord_add(a, b); })
        .def("__lt__", [](const Ordinal& a, const Ordinal& b) { return a < b; })
        .def("__eq__", [](const Ordinal& a, const Ordinal& b) { return a == b; })
        .def("__str__", &Ordinal::str)
        .def("__repr__", [](const Ordinal& a) { return "Ordinal('" + a.str() + "')"; });

    py::class_<FinitePoset>(m, "Poset")
        .def(py::init<int, const std::vector<std::pair<int, int>>&>(), py::arg("n"), py::arg("cover"))
        .def_static("chain", &FinitePoset::chain)
        .def_static("antichain", &FinitePoset::antichain)
        .def_static("load", &load_poset, "JSON text, file path or chainN/antichainN/prefixK.D")
        .def_static("random",
                    [](int n, double density, std::uint64_t seed) {
                        std::mt19937_64 rng(seed);
                        return FinitePoset::random(n, density, rng);
                    },
                    py::arg("n"), py::arg("density"), py::arg("seed"))
        .def_static("enumerate_all", &FinitePoset::enumerate_all)
        .def_property_readonly("size", &FinitePoset::size)
        .def("leq", &FinitePoset::leq)
        .def("covers", &FinitePoset::covers)
        .def("least", &FinitePoset::least)
        .def("is_open", [](const FinitePoset& p, const std::vector<int>& s) { return p.is_open(to_set(s, p)); })
        .def("is_closed", [](const FinitePoset& p, const std::vector<int>& s) { return p.is_closed(to_set(s, p)); })
        .def("up_closure",
             [](const FinitePoset& p, const std::vector<int>& s) { return members(p.up_closure(to_set(s, p))); })
        .def("down_closure",
             [](const FinitePoset& p, const std::vector<int>& s) { return members(p.down_closure(to_set(s, p))); })
        .def("opens",
             [](const FinitePoset& p) {
                 std::vector<std::vector<int>> out;
                 for (auto s : opens(p)) out.push_back(members(s));
                 return out;
             })
        .def("to_json", [](const FinitePoset& p) { return to_py(poset_to_json(p)); })
        .def("__eq__", [](const FinitePoset& a, const FinitePoset& b) { return a == b; });

    m.def("level_bruteforce", [](const FinitePoset& p, const std::vector<int>& a) {
        return levels(level_bruteforce(to_set(a, p), p));
    });
    m.def("alt_levels", [](const FinitePoset& p, const std::vector<int>& a) {
        return levels(alt_levels(to_set(a, p), p));
    });
    m.def("alt_chain", [](const FinitePoset& p, const std::vector<int>& a, int eps) {
        return alt_chain(to_set(a, p), p, eps);
    });
    m.def("residues", [](const FinitePoset& p, const std::vector<int>& a) {
        auto d = hausdorff_decompose(to_set(a, p), p);
        json chain = json::array();
        for (auto s : d.chain.sets) chain.push_back(members(s));
        return to_py({{"chain", chain},
                      {"theta", d.chain.theta},
                      {"code", diff_code_to_json(d.code)},
                      {"level", {{"sigma", d.level.sigma}, {"pi", d.level.pi}}},
                      {"trimmed", diff_code_to_json(d.trimmed)},
                      {"trimmed_co", diff_code_to_json(d.trimmed_co)}});
    });
    m.def("classify", [](const FinitePoset& p, const std::vector<int>& a) {
        const PointSet s = to_set(a, p);
        py::dict d;
        d["residues"] = levels(hausdorff_decompose(s, p).level);
        d["alt"] = levels(alt_levels(s, p));
        d["brute"] = levels(level_bruteforce(s, p));
        return d;
    });
    m.def("eval_diff", [](const FinitePoset& p, const std::string& code) {
        auto c = diff_code_from_json(json::parse(code), p.size());
        return members(eval_diff_set(c, p));
    }, "Denotation of a difference code given as JSON text");
    m.def("ambiguity_audit", [](const FinitePoset& p, int n_max) {
        auto r = ambiguity_audit(p, n_max);
        py::list viol;
        for (const auto& v : r.violations) {
            py::dict d;
            d["n"] = v.n;
            d["kind"] = v.kind;
            d["set"] = members(v.subset);
            viol.append(d);
        }
        py::dict d;
        d["has_least"] = r.has_least;
        d["checked_sets"] = r.checked_sets;
        d["violations"] = viol;
        return d;
    });

    m.def("eval_borel",
          [](const std::string& model, const std::string& code, const std::string& point, const std::string& side) {
              auto sm = load_model(model);
              if (side != "sigma" && side != "pi") throw py::value_error("side is 'sigma' or 'pi'");
              return eval_borel(borel_from_json(json::parse(code)), *sm, side == "sigma" ? Side::Sigma : Side::Pi,
                                parse_point(*sm, point));
          },
          py::arg("model"), py::arg("code"), py::arg("point"), py::arg("side") = "sigma");
    m.def("eval_hausdorff",
          [](const std::string& model, const std::string& code, const std::string& point) {
              auto sm = load_model(model);
              auto c = hausdorff_from_json(json::parse(code));
              c.validate();
              return eval_hausdorff_code(c, *sm, parse_point(*sm, point));
          },
          py::arg("model"), py::arg("code"), py::arg("point"));

    m.def("play",
          [](const std::string& model, int rounds, std::uint64_t seed, const std::string& empty) {
              auto sm = load_model(model);
              EmptyStrategy e = empty == "deepest" ? deepest_descent_empty(*sm, seed)
                                : empty == "chase" ? clause_chasing_empty(*sm, seed)
                                                   : random_empty(*sm, seed);
              auto t = play(GameKind::Choquet, e, stationary_from_relation(*sm), *sm, rounds);
              py::dict d;
              d["outcome"] = outcome_str(t.outcome);
              d["witness"] = t.witness ? py::object(py::str(point_str(*t.witness))) : py::object(py::none());
              d["rounds"] = t.rounds.size();
              d["reason"] = t.reason;
              return d;
          },
          py::arg("model"), py::arg("rounds") = 20, py::arg("seed") = 1, py::arg("empty") = "random");

    m.def("baire",
          [](int constraints, std::uint64_t seed, std::uint64_t budget) {
              auto cyl = std::make_shared<const CylinderModel>(3);
              std::mt19937_64 rng(seed);
              std::vector<DenseConstraint> dense;
              for (int i = 0; i < constraints; ++i) dense.push_back(random_cylinder_constraint(cyl, rng));
              const Index target = rng() % 40;
              auto r = baire_witness(*cyl, dense, target, [constraints](int n) { return (n - 1) % constraints; },
                                     4 * constraints, budget);
              py::dict d;
              d["status"] = baire_status_str(r.status);
              d["point"] = r.point ? py::object(py::str(point_str(*r.point))) : py::object(py::none());
              d["verified"] = r.verified;
              d["steps"] = r.steps;
              return d;
          },
          py::arg("constraints") = 3, py::arg("seed") = 1, py::arg("budget") = 10000);

    m.def("first_one_transform",
          [](const std::vector<std::string>& points, std::uint64_t start, std::uint64_t max_budget,
             std::uint64_t lookahead) {
              CylinderModel cyl(3);
              auto pres = first_one_presentation(cyl);
              std::vector<Point> pts;
              for (const auto& s : points) pts.push_back(parse_point(cyl, s));
              auto rep = transform_until_stable(pres, cyl, pts, start, max_budget, lookahead);
              py::list rows;
              for (const auto& r : rep.rows) {
                  py::dict d;
                  d["point"] = point_str(r.x);
                  d["value"] = r.value;
                  d["truth"] = r.truth ? py::object(py::bool_(*r.truth)) : py::object(py::none());
                  d["stable"] = r.stable;
                  rows.append(d);
              }
              py::dict d;
              d["budget"] = rep.budget;
              d["incomplete"] = rep.incomplete;
              d["disagreements"] = rep.disagreements;
              d["rows"] = rows;
              return d;
          },
          py::arg("points"), py::arg("start") = 16, py::arg("max_budget") = 1u << 16, py::arg("lookahead") = 4,
          "Transform of the cylinder set 'some 1 before any 2' over {0,1,2}, verified at the given points");
}
