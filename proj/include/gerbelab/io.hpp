#pragma once

// JSON formats for loops, disk maps and sphere maps.
//
//   {"group":"U1","lift":[...]}
//   {"group":"SU2","samples":[[w,x,y,z],...]}
//   {"kind":"disk","collar":c,"grid":[[[w,x,y,z],...],...]}   R+1 rows of M, centre first
//   {"kind":"sphere","grid":[[[w,x,y,z],...],...]}            P+1 rows of M, north pole first
// "kind" is optional on input.

#include <json.hpp>
#include <string>
#include <variant>

#include "gerbelab/su2geom.hpp"

namespace gerbelab {

using Json = nlohmann::json;
using LoopValue = std::variant<LoopU1, LoopSU2>;

// Parsers throw SchemaError naming the offending field as a JSON pointer.
LoopValue loop_from_json(const Json& j);
Json loop_to_json(const LoopValue& loop);
DiskMap disk_from_json(const Json& j);
Json disk_to_json(const DiskMap& d);
SphereMap sphere_from_json(const Json& j);
Json sphere_to_json(const SphereMap& s);

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

// Rows of "i,j,w,x,y,z".
std::string grid_to_csv(const std::vector<Quat>& grid, int columns);

}  // namespace gerbelab
