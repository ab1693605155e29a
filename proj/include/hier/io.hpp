#pragma once

#include <string>

#include <json.hpp>

#include "hier/diff_hierarchy.hpp"
#include "hier/finite_space.hpp"
#include "hier/space_models.hpp"

namespace hier {

// {"n": int, "cover": [[i, j], ...]}
FinitePoset poset_from_json(const nlohmann::json& j);
nlohmann::json poset_to_json(const FinitePoset& p);

// A JSON literal when the argument starts with '{' or '[', else a file.
std::string read_json_arg(const std::string& arg);
// Also accepts chainN, antichainN and prefixK.D ("chain:3" etc. work too).
FinitePoset load_poset(const std::string& arg);
// Poset shorthands and poset JSON become poset models.
std::unique_ptr<SpaceModel> load_model(const std::string& arg);

// "1,2", "{1, 2}", "" or "{}"; every element must be below n.
PointSet parse_set(const std::string& text, int n);
nlohmann::json set_to_json(PointSet s);
PointSet set_from_json(const nlohmann::json& j, int n);

// {"alpha": "<ordinal>", "polarity": "D"|"coD", "entries": [{"index", "set"}]}
nlohmann::json diff_code_to_json(const DiffCode& c);
DiffCode diff_code_from_json(const nlohmann::json& j, int n);

// Inverse of point_str: "3" on posets, "{0,2}" or "{0}+[5,inf)" on set
// models, "01(2)^w" or "01(2)" on cylinders. Throws std::invalid_argument
// when the text is malformed or not a point of the model.
Point parse_point(const SpaceModel& m, const std::string& text);

}  // namespace hier
