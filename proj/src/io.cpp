#include "gerbelab/io.hpp"

#include <fstream>
#include <sstream>

#include "gerbelab/errors.hpp"

namespace gerbelab {

namespace {

const Json& field(const Json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(path + "/" + key + ": missing field");
  return *it;
}

std::vector<Quat> quats(const Json& arr, const std::string& path) {
  if (!arr.is_array()) throw SchemaError(path + ": expected an array");
  std::vector<Quat> out;
  out.reserve(arr.size());
  for (std::size_t k = 0; k < arr.size(); ++k) {
    const Json& q = arr[k];
    const std::string p = path + "/" + std::to_string(k);
    if (!q.is_array() || q.size() != 4) throw SchemaError(p + ": expected [w,x,y,z]");
    for (std::size_t c = 0; c < 4; ++c)
      if (!q[c].is_number()) throw SchemaError(p + "/" + std::to_string(c) + ": expected a number");
    out.emplace_back(q[0].get<double>(), q[1].get<double>(), q[2].get<double>(), q[3].get<double>());
  }
  return out;
}

Json quat_array(const std::vector<Quat>& g) {
  Json a = Json::array();
  for (const Quat& q : g) a.push_back({q.w(), q.x(), q.y(), q.z()});
  return a;
}

}  // namespace

LoopValue loop_from_json(const Json& j) {
  const Json& g = field(j, "group", "");
  if (!g.is_string()) throw SchemaError("/group: expected a string");
  const std::string group = g.get<std::string>();
  try {
    if (group == "U1") {
      const Json& lift = field(j, "lift", "");
      if (!lift.is_array()) throw SchemaError("/lift: expected an array");
      std::vector<double> v;
      for (std::size_t k = 0; k < lift.size(); ++k) {
        if (!lift[k].is_number()) throw SchemaError("/lift/" + std::to_string(k) + ": expected a number");
        v.push_back(lift[k].get<double>());
      }
      return LoopU1{RealLift::make(std::move(v), false)};
    }
    if (group == "SU2") return LoopSU2::make(quats(field(j, "samples", ""), "/samples"));
  } catch (const SchemaError&) {
    throw;
  } catch (const Error& e) {
    throw SchemaError(std::string(group == "U1" ? "/lift" : "/samples") + ": " + e.what());
  }
  throw SchemaError("/group: expected \"U1\" or \"SU2\"");
}

Json loop_to_json(const LoopValue& loop) {
  if (const auto* u = std::get_if<LoopU1>(&loop)) return Json{{"group", "U1"}, {"lift", u->lift.values}};
  return Json{{"group", "SU2"}, {"samples", quat_array(std::get<LoopSU2>(loop).samples)}};
}

namespace {

// Rows of equal length; returns the row count and width.
std::vector<Quat> rows(const Json& j, int& nrows, int& width) {
  const Json& g = field(j, "grid", "");
  if (!g.is_array() || g.empty()) throw SchemaError("/grid: expected a non-empty array of rows");
  nrows = static_cast<int>(g.size());
  width = -1;
  std::vector<Quat> out;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const std::string p = "/grid/" + std::to_string(i);
    std::vector<Quat> row = quats(g[i], p);
    if (width < 0) width = static_cast<int>(row.size());
    if (static_cast<int>(row.size()) != width) throw SchemaError(p + ": row length differs from /grid/0");
    out.insert(out.end(), row.begin(), row.end());
  }
  return out;
}

Json row_array(const std::vector<Quat>& g, int width) {
  Json a = Json::array();
  for (std::size_t i = 0; i < g.size(); i += width)
    a.push_back(quat_array(std::vector<Quat>(g.begin() + i, g.begin() + i + width)));
  return a;
}

void check_kind(const Json& j, const char* expected) {
  if (!j.is_object()) throw SchemaError(": expected an object");
  auto it = j.find("kind");
  if (it != j.end() && *it != expected) throw SchemaError(std::string("/kind: expected \"") + expected + "\"");
}

}  // namespace

DiskMap disk_from_json(const Json& j) {
  check_kind(j, "disk");
  const Json& c = field(j, "collar", "");
  if (!c.is_number()) throw SchemaError("/collar: expected a number");
  int n = 0, M = 0;
  std::vector<Quat> g = rows(j, n, M);
  try {
    return DiskMap::make(n - 1, M, c.get<double>(), std::move(g));
  } catch (const Error& e) {
    throw SchemaError(std::string("/grid: ") + e.what());
  }
}

Json disk_to_json(const DiskMap& d) {
  return Json{{"kind", "disk"}, {"collar", d.collar}, {"grid", row_array(d.grid, d.M)}};
}

SphereMap sphere_from_json(const Json& j) {
  check_kind(j, "sphere");
  int n = 0, M = 0;
  std::vector<Quat> g = rows(j, n, M);
  try {
    return SphereMap::make(n - 1, M, std::move(g));
  } catch (const Error& e) {
    throw SchemaError(std::string("/grid: ") + e.what());
  }
}

Json sphere_to_json(const SphereMap& s) { return Json{{"kind", "sphere"}, {"grid", row_array(s.grid, s.M)}}; }

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw SchemaError(std::string("malformed JSON: ") + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write " + path);
  out << text;
}

std::string grid_to_csv(const std::vector<Quat>& grid, int columns) {
  std::ostringstream os;
  os.precision(17);
  os << "i,j,w,x,y,z\n";
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const Quat& q = grid[k];
    os << k / columns << ',' << k % columns << ',' << q.w() << ',' << q.x() << ',' << q.y() << ',' << q.z() << '\n';
  }
  return os.str();
}

}  // namespace gerbelab
