#pragma once

// Abstract decomposition data from JSON:
//   {"order": n, "table": [[...]], "D_inf": [...], "D_ell": [...]}
// Optional keys: "labels" (strings, one per element) and "name". D_inf and
// D_ell list generators of each subgroup (a full element list also works),
// as element indices or as labels when "labels" is present.

#include "lognorm/errors.hpp"
#include "lognorm/groups.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <string>

namespace lognorm::groups {

struct AbstractGroupData {
    FiniteGroup group;
    Subgroup d_inf;
    Subgroup d_ell;
};

namespace detail {

inline Subgroup subgroup_from_json(const FiniteGroup& g, const nlohmann::json& j, const char* key)
{
    if (!j.contains(key) || !j.at(key).is_array())
        throw ParseError(std::string("group JSON: missing array '") + key + "'");
    std::vector<int> elems;
    for (const auto& e : j.at(key)) {
        if (e.is_number_integer()) {
            int x = e.get<int>();
            if (x < 0 || x >= g.order())
                throw ParseError(std::string("group JSON: element out of range in '") + key + "'");
            elems.push_back(x);
        } else if (e.is_string()) {
            auto x = g.find_label(e.get<std::string>());
            if (!x)
                throw ParseError("group JSON: unknown label '" + e.get<std::string>() + "'");
            elems.push_back(*x);
        } else {
            throw ParseError(std::string("group JSON: bad element in '") + key + "'");
        }
    }
    return generated_subgroup(g, elems);
}

}  // namespace detail

inline AbstractGroupData abstract_group_from_json(const nlohmann::json& j)
{
    if (!j.is_object())
        throw ParseError("group JSON: top level must be an object");
    if (!j.contains("order") || !j.at("order").is_number_integer())
        throw ParseError("group JSON: missing integer 'order'");
    const int n = j.at("order").get<int>();
    if (n > kMaxOrder)
        throw UnsupportedInput("group JSON: order exceeds the cap of " + std::to_string(kMaxOrder));
    if (!j.contains("table") || !j.at("table").is_array())
        throw ParseError("group JSON: missing 'table'");
    std::vector<std::vector<int>> table;
    try {
        table = j.at("table").get<std::vector<std::vector<int>>>();
    } catch (const nlohmann::json::exception&) {
        throw ParseError("group JSON: 'table' must be an array of integer arrays");
    }
    if (static_cast<int>(table.size()) != n)
        throw ParseError("group JSON: table size does not match 'order'");
    std::vector<std::string> labels;
    if (j.contains("labels")) {
        try {
            labels = j.at("labels").get<std::vector<std::string>>();
        } catch (const nlohmann::json::exception&) {
            throw ParseError("group JSON: 'labels' must be an array of strings");
        }
    }
    std::string name = j.value("name", std::string{});
    std::optional<FiniteGroup> g;
    try {
        g = FiniteGroup::from_table(std::move(table), std::move(labels), std::move(name));
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("group JSON: invalid group table (") + e.what() + ")");
    }
    Subgroup d_inf = detail::subgroup_from_json(*g, j, "D_inf");
    Subgroup d_ell = detail::subgroup_from_json(*g, j, "D_ell");
    return AbstractGroupData{std::move(*g), std::move(d_inf), std::move(d_ell)};
}

inline AbstractGroupData load_abstract_group(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open group file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("group file '" + path + "': " + e.what());
    }
    return abstract_group_from_json(j);
}

inline nlohmann::json abstract_group_to_json(const FiniteGroup& g, const Subgroup& d_inf, const Subgroup& d_ell)
{
    nlohmann::json j;
    j["order"] = g.order();
    j["table"] = g.table();
    if (!g.labels().empty())
        j["labels"] = g.labels();
    if (!g.name().empty())
        j["name"] = g.name();
    j["D_inf"] = d_inf.elements();
    j["D_ell"] = d_ell.elements();
    return j;
}

}  // namespace lognorm::groups
