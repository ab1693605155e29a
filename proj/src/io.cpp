#include "hier/io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "hier/alt_trees.hpp"

namespace hier {

using nlohmann::json;

FinitePoset poset_from_json(const json& j) {
    const int n = j.at("n").get<int>();
    if (n < 0 || n > kMaxPoints) throw std::invalid_argument("poset: n outside 0..64");
    std::vector<std::pair<int, int>> cover;
    for (const auto& e : j.value("cover", json::array())) {
        auto a = e.at(0).get<int>(), b = e.at(1).get<int>();
        if (a < 0 || a >= n || b < 0 || b >= n) throw std::invalid_argument("poset: cover pair out of range");
        cover.emplace_back(a, b);
    }
    return FinitePoset(n, cover);
}

json poset_to_json(const FinitePoset& p) {
    json cover = json::array();
    for (auto [a, b] : p.covers()) cover.push_back({a, b});
    return {{"n", p.size()}, {"cover", cover}};
}

std::string read_json_arg(const std::string& arg) {
    auto first = arg.find_first_not_of(" \t\n");
    if (first != std::string::npos && (arg[first] == '{' || arg[first] == '[')) return arg;
    std::ifstream in(arg);
    if (!in) throw std::invalid_argument("cannot read '" + arg + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

namespace {

std::optional<FinitePoset> shorthand(std::string s) {
    s.erase(std::remove(s.begin(), s.end(), ':'), s.end());
    auto num = [&](std::size_t from) -> std::optional<int> {
        if (from >= s.size()) return std::nullopt;
        for (std::size_t i = from; i < s.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(s[i]))) return std::nullopt;
        int n = std::stoi(s.substr(from));
        if (n < 1 || n > kMaxPoints) throw std::invalid_argument("poset size outside 1..64");
        return n;
    };
    if (s.rfind("antichain", 0) == 0) {
        if (auto n = num(9)) return FinitePoset::antichain(*n);
    } else if (s.rfind("chain", 0) == 0) {
        if (auto n = num(5)) return FinitePoset::chain(*n);
    } else if (s.rfind("prefix", 0) == 0) {
        // prefixK.D: words of length 1..D over K letters
        auto dot = s.find('.');
        auto all_digits = [](const std::string& t) {
            return !t.empty() && std::all_of(t.begin(), t.end(), [](char c) { return std::isdigit(c); });
        };
        if (dot != std::string::npos && all_digits(s.substr(6, dot - 6)) && all_digits(s.substr(dot + 1)))
            return prefix_poset(std::stoi(s.substr(6, dot - 6)), std::stoi(s.substr(dot + 1)), false);
    }
    return std::nullopt;
}

}  // namespace

FinitePoset load_poset(const std::string& arg) {
    if (auto p = shorthand(arg)) return *p;
    auto j = json::parse(read_json_arg(arg));
    if (j.contains("kind") && j.at("kind") != "poset") throw std::invalid_argument("not a poset descriptor");
    return poset_from_json(j);
}

std::unique_ptr<SpaceModel> load_model(const std::string& arg) {
    if (auto p = shorthand(arg)) return std::make_unique<FinitePosetModel>(*p);
    auto text = read_json_arg(arg);
    auto j = json::parse(text);
    if (!j.contains("kind")) return std::make_unique<FinitePosetModel>(poset_from_json(j));
    return model_from_json(text);
}

PointSet parse_set(const std::string& text, int n) {
    PointSet s = 0;
    std::string cur;
    auto flush = [&] {
        if (cur.empty()) return;
        std::size_t used = 0;
        int i = std::stoi(cur, &used);
        if (used != cur.size() || i < 0 || i >= n)
            throw std::invalid_argument("set element '" + cur + "' is not a point of the poset");
        s |= singleton(i);
        cur.clear();
    };
    for (char c : text) {
        if (c == '{' || c == '}' || c == ' ') continue;
        if (c == ',') {
            flush();
        } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '-') {
            cur += c;
        } else {
            throw std::invalid_argument(std::string("unexpected '") + c + "' in set");
        }
    }
    flush();
    return s;
}

json set_to_json(PointSet s) { return members(s); }

PointSet set_from_json(const json& j, int n) {
    PointSet s = 0;
    for (int i : j.get<std::vector<int>>()) {
        if (i < 0 || i >= n) throw std::invalid_argument("set element out of range");
        s |= singleton(i);
    }
    return s;
}

json diff_code_to_json(const DiffCode& c) {
    json entries = json::array();
    for (const auto& e : c.entries) entries.push_back({{"index", e.index.str()}, {"set", set_to_json(e.set)}});
    return {{"alpha", c.alpha.str()}, {"polarity", c.polarity == Polarity::D ? "D" : "coD"}, {"entries", entries}};
}

DiffCode diff_code_from_json(const json& j, int n) {
    auto ord = [](const json& v) {
        return v.is_string() ? Ordinal::parse(v.get<std::string>()) : Ordinal(v.get<std::uint64_t>());
    };
    DiffCode c;
    c.alpha = ord(j.at("alpha"));
    auto pol = j.value("polarity", std::string("D"));
    if (pol != "D" && pol != "coD") throw std::invalid_argument("polarity must be D or coD");
    c.polarity = pol == "D" ? Polarity::D : Polarity::CoD;
    for (const auto& e : j.at("entries")) c.entries.push_back({ord(e.at("index")), set_from_json(e.at("set"), n)});
    c.validate();
    return c;
}

namespace {

std::vector<int> digits(const std::string& s) {
    std::vector<int> out;
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) throw std::invalid_argument("bad letter in word point");
        out.push_back(c - '0');
    }
    return out;
}

Point parse_word(const std::string& text) {
    std::string t = text;
    if (t.size() >= 2 && t.substr(t.size() - 2) == "^w") t.resize(t.size() - 2);
    WordPoint w;
    auto open = t.find('(');
    if (open == std::string::npos) {
        // a bare word is followed by zeros
        w.prefix = digits(t);
        return w;
    }
    if (t.back() != ')') throw std::invalid_argument("word point: expected prefix(cycle)");
    w.prefix = digits(t.substr(0, open));
    w.cycle = digits(t.substr(open + 1, t.size() - open - 2));
    if (w.cycle.empty()) throw std::invalid_argument("word point: empty cycle");
    return w;
}

Point parse_set_point(const std::string& text) {
    SetPoint x;
    std::string core = text;
    auto plus = text.find('+');
    if (plus != std::string::npos) {
        core = text.substr(0, plus);
        auto tail = text.substr(plus + 1);
        auto l = tail.find('['), c = tail.find(',');
        if (l == std::string::npos || c == std::string::npos) throw std::invalid_argument("set point: bad tail");
        x.tail_from = std::stoi(tail.substr(l + 1, c - l - 1));
        if (x.tail_from < 0 || x.tail_from > 63) throw std::invalid_argument("set point: tail outside 0..63");
    }
    x.core = parse_set(core, 64);
    return x;
}

}  // namespace

Point parse_point(const SpaceModel& m, const std::string& text) {
    Point x;
    try {
        if (dynamic_cast<const FinitePosetModel*>(&m)) {
            std::size_t used = 0;
            x = std::stoi(text, &used);
            if (used != text.size()) throw std::invalid_argument("trailing characters");
        } else if (dynamic_cast<const CylinderModel*>(&m)) {
            x = parse_word(text);
        } else {
            x = parse_set_point(text);
        }
    } catch (const std::logic_error& e) {
        throw std::invalid_argument("cannot parse point '" + text + "': " + e.what());
    }
    if (!m.valid_point(x)) throw std::invalid_argument("'" + text + "' is not a point of the " + m.kind() + " model");
    return x;
}

}  // namespace hier
