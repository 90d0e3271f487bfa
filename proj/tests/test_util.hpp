#pragma once

#include <set>
#include <string>

#include "klm/tableau.hpp"

namespace klm::testing {

// Every leaf reachable from the root is an axiom: an atom and its negation
// (at the same label in R) or a relational clash.
inline bool leaves_are_axioms(const Trace& t) {
    auto j = t.to_json();
    if (j.empty()) return false;
    for (const auto& n : j) {
        if (!n["children"].empty()) continue;
        if (n["rule"] != "ax") return false;
        std::set<std::string> fs(n["formulas"].begin(), n["formulas"].end());
        bool clash = false;
        for (const auto& f : fs) {
            auto colon = f.find(": ");
            std::string prefix = colon == std::string::npos ? "" : f.substr(0, colon + 2);
            std::string body = f.substr(prefix.size());
            if (body.size() > 1 && body[0] == '~' && fs.count(prefix + body.substr(1))) {
                std::string atom = body.substr(1);
                clash = clash || atom.find_first_of(" ~&|()[") == std::string::npos;
            }
        }
        if (n.contains("relations")) {
            std::set<std::string> rs(n["relations"].begin(), n["relations"].end());
            for (const auto& r : rs) {
                auto lt = r.find(" < ");
                std::string x = r.substr(0, lt), y = r.substr(lt + 3);
                clash = clash || x == y || rs.count(y + " < " + x);
            }
        }
        if (!clash) return false;
    }
    return true;
}

}  // namespace klm::testing
