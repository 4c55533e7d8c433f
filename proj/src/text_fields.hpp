#ifndef PPLIST_SRC_TEXT_FIELDS_HPP
#define PPLIST_SRC_TEXT_FIELDS_HPP

// "name: value" line format shared by key, pseudonym, transcript and
// accumulator files.

#include <map>
#include <sstream>
#include <string>
#include <string_view>

#include "pplist/groups.hpp"

namespace pplist::detail {

// Blank lines ignored, duplicates rejected.
inline std::map<std::string, std::string> parse_fields(std::string_view text, std::string_view what = "key file") {
    std::map<std::string, std::string> fields;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto colon = line.find(':');
        if (colon == std::string::npos)
            throw Error(std::string(what) + " line " + std::to_string(lineno) + ": expected 'name: value'");
        std::string name = line.substr(0, colon);
        std::string value = line.substr(colon + 1);
        auto first = value.find_first_not_of(' ');
        value = first == std::string::npos ? "" : value.substr(first);
        if (!fields.emplace(name, value).second)
            throw Error(std::string(what) + " line " + std::to_string(lineno) + ": duplicate field '" + name +
                        "'");
    }
    return fields;
}

inline const std::string& field(const std::map<std::string, std::string>& fields, const std::string& name,
                                std::string_view what = "key file") {
    auto it = fields.find(name);
    if (it == fields.end()) throw Error(std::string(what) + ": missing field '" + name + "'");
    return it->second;
}

}  // namespace pplist::detail

#endif  // PPLIST_SRC_TEXT_FIELDS_HPP
