#include "walkopt/instance_io.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "walkopt/errors.hpp"

namespace walkopt {

namespace {

using nlohmann::json;

const json& expect(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError("missing required key '" + key + "' at " + path);
  return *it;
}

double expect_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw SchemaError(path + ": expected a number");
  return j.get<double>();
}

std::int64_t expect_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw SchemaError(path + ": expected an integer");
  return j.get<std::int64_t>();
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("write failed for " + path.string());
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("not valid JSON: ") + e.what());
  }
}

}  // namespace

Instance instance_from_json_text(const std::string& text) {
  json j = parse_json(text);
  if (!j.is_object()) throw SchemaError("top level: expected an object");

  Instance inst;
  if (j.contains("meta")) {
    const json& meta = j["meta"];
    if (!meta.is_object()) throw SchemaError("meta: expected an object");
    if (meta.contains("name")) inst.name = meta["name"].get<std::string>();
    if (meta.contains("crs")) inst.crs = meta["crs"].get<std::string>();
    if (meta.contains("units") && meta["units"].get<std::string>() != "meters")
      throw SchemaError("meta.units: only \"meters\" is supported");
  }

  const json& residents = expect(j, "residents", "top level");
  if (!residents.is_array()) throw SchemaError("residents: expected an array");
  std::vector<std::size_t> resident_order;  // file index per canonical slot
  for (std::size_t i = 0; i < residents.size(); ++i) {
    const std::string path = "residents[" + std::to_string(i) + "]";
    NodeId id = expect_int(expect(residents[i], "id", path), path + ".id");
    inst.residents.push_back(id);
    if (residents[i].contains("lon") && residents[i].contains("lat"))
      inst.coords[id] = {expect_number(residents[i]["lon"], path + ".lon"),
                         expect_number(residents[i]["lat"], path + ".lat")};
  }
  resident_order.resize(inst.residents.size());
  std::iota(resident_order.begin(), resident_order.end(), std::size_t{0});
  std::sort(resident_order.begin(), resident_order.end(),
            [&](std::size_t a, std::size_t b) { return inst.residents[a] < inst.residents[b]; });
  {
    std::vector<NodeId> sorted;
    sorted.reserve(inst.residents.size());
    for (std::size_t idx : resident_order) sorted.push_back(inst.residents[idx]);
    inst.residents = std::move(sorted);
  }

  const json& candidates = expect(j, "candidates", "top level");
  if (!candidates.is_array()) throw SchemaError("candidates: expected an array");
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    const std::string path = "candidates[" + std::to_string(c) + "]";
    Candidate cand;
    cand.id = expect_int(expect(candidates[c], "id", path), path + ".id");
    cand.capacity =
        static_cast<int>(expect_int(expect(candidates[c], "capacity", path), path + ".capacity"));
    inst.candidates.push_back(cand);
    if (candidates[c].contains("lon") && candidates[c].contains("lat"))
      inst.coords[cand.id] = {expect_number(candidates[c]["lon"], path + ".lon"),
                              expect_number(candidates[c]["lat"], path + ".lat")};
  }
  std::sort(inst.candidates.begin(), inst.candidates.end(),
            [](const Candidate& a, const Candidate& b) { return a.id < b.id; });

  const json& types = expect(j, "amenity_types", "top level");
  if (!types.is_array()) throw SchemaError("amenity_types: expected an array");
  for (std::size_t t = 0; t < types.size(); ++t) {
    const std::string path = "amenity_types[" + std::to_string(t) + "]";
    AmenityTypeSpec spec;
    spec.id = static_cast<int>(expect_int(expect(types[t], "id", path), path + ".id"));
    spec.name = expect(types[t], "name", path).get<std::string>();
    const json& weights = expect(types[t], "raw_weights", path);
    if (!weights.is_array()) throw SchemaError(path + ".raw_weights: expected an array");
    for (std::size_t p = 0; p < weights.size(); ++p)
      spec.raw_weights.push_back(
          expect_number(weights[p], path + ".raw_weights[" + std::to_string(p) + "]"));
    spec.budget = static_cast<int>(expect_int(expect(types[t], "budget", path), path + ".budget"));
    inst.types.push_back(std::move(spec));
  }
  std::sort(inst.types.begin(), inst.types.end(),
            [](const AmenityTypeSpec& a, const AmenityTypeSpec& b) { return a.id < b.id; });

  const json& existing = expect(j, "existing", "top level");
  if (!existing.is_object()) throw SchemaError("existing: expected an object");
  inst.existing.resize(inst.types.size());
  for (auto it = existing.begin(); it != existing.end(); ++it) {
    int type_id = 0;
    try {
      type_id = std::stoi(it.key());
    } catch (...) {
      throw SchemaError("existing: key '" + it.key() + "' is not a type id");
    }
    int t = inst.type_index_of(type_id);
    if (t < 0) throw SchemaError("existing: unknown type id " + it.key());
    if (!it->is_array()) throw SchemaError("existing." + it.key() + ": expected an array");
    for (std::size_t e = 0; e < it->size(); ++e)
      inst.existing[t].push_back(
          expect_int((*it)[e], "existing." + it.key() + "[" + std::to_string(e) + "]"));
    std::sort(inst.existing[t].begin(), inst.existing[t].end());
  }

  const json& curve = expect(j, "curve", "top level");
  if (!curve.is_array()) throw SchemaError("curve: expected an array of [distance, score]");
  for (std::size_t b = 0; b < curve.size(); ++b) {
    const std::string path = "curve[" + std::to_string(b) + "]";
    if (!curve[b].is_array() || curve[b].size() != 2)
      throw SchemaError(path + ": expected [distance, score]");
    inst.curve.breakpoints.push_back(
        {expect_number(curve[b][0], path + "[0]"), expect_number(curve[b][1], path + "[1]")});
  }

  inst.d_infinity = expect_number(expect(j, "d_infinity", "top level"), "d_infinity");

  const json& dist = expect(j, "distances", "top level");
  if (!dist.is_array()) throw SchemaError("distances: expected an array of rows");
  if (dist.size() != inst.residents.size())
    throw SchemaError("distances: row count " + std::to_string(dist.size()) +
                      " does not match residents (" + std::to_string(inst.residents.size()) + ")");
  const std::size_t cols = inst.num_columns();
  inst.dist = Matrix(inst.residents.size(), cols);
  for (std::size_t slot = 0; slot < resident_order.size(); ++slot) {
    // Row `resident_order[slot]` in the file belongs to canonical row `slot`.
    const json& row = dist[resident_order[slot]];
    const std::string path = "distances[" + std::to_string(resident_order[slot]) + "]";
    if (!row.is_array() || row.size() != cols)
      throw SchemaError(path + ": expected " + std::to_string(cols) + " columns");
    for (std::size_t c = 0; c < cols; ++c)
      inst.dist(slot, c) = expect_number(row[c], path + "[" + std::to_string(c) + "]");
  }

  {
    auto violations = validate_instance(inst);
    if (!violations.empty()) {
      std::ostringstream msg;
      msg << "instance file is invalid:";
      for (const auto& v : violations) msg << " [" << v.code << " at " << v.where << "]";
      throw ValidationError(msg.str());
    }
  }
  return inst;
}

Instance read_instance(const std::filesystem::path& path) {
  return instance_from_json_text(read_file(path));
}

std::string instance_to_json_text(const Instance& inst) {
  json j;
  j["meta"] = {{"name", inst.name}, {"crs", inst.crs}, {"units", "meters"}};

  json residents = json::array();
  for (NodeId id : inst.residents) {
    json r = {{"id", id}};
    if (auto it = inst.coords.find(id); it != inst.coords.end()) {
      r["lon"] = it->second.lon;
      r["lat"] = it->second.lat;
    }
    residents.push_back(std::move(r));
  }
  j["residents"] = std::move(residents);

  json candidates = json::array();
  for (const auto& c : inst.candidates) {
    json r = {{"id", c.id}, {"capacity", c.capacity}};
    if (auto it = inst.coords.find(c.id); it != inst.coords.end()) {
      r["lon"] = it->second.lon;
      r["lat"] = it->second.lat;
    }
    candidates.push_back(std::move(r));
  }
  j["candidates"] = std::move(candidates);

  json types = json::array();
  for (const auto& spec : inst.types)
    types.push_back({{"id", spec.id},
                     {"name", spec.name},
                     {"raw_weights", spec.raw_weights},
                     {"budget", spec.budget}});
  j["amenity_types"] = std::move(types);

  json existing = json::object();
  for (std::size_t t = 0; t < inst.types.size(); ++t)
    existing[std::to_string(inst.types[t].id)] = inst.existing[t];
  j["existing"] = std::move(existing);

  json curve = json::array();
  for (const auto& bp : inst.curve.breakpoints) curve.push_back({bp.distance, bp.score});
  j["curve"] = std::move(curve);

  j["d_infinity"] = inst.d_infinity;

  json rows = json::array();
  for (std::size_t i = 0; i < inst.dist.rows(); ++i) {
    json row = json::array();
    for (std::size_t c = 0; c < inst.dist.cols(); ++c) row.push_back(inst.dist(i, c));
    rows.push_back(std::move(row));
  }
  j["distances"] = std::move(rows);

  return j.dump();
}

void write_instance(const Instance& inst, const std::filesystem::path& path) {
  write_file(path, instance_to_json_text(inst));
}

Allocation read_allocation(const std::filesystem::path& path, const Instance& inst) {
  json j = parse_json(read_file(path));
  const json& placements = expect(j, "placements", "top level");
  if (!placements.is_array()) throw SchemaError("placements: expected an array");
  Allocation alloc;
  for (std::size_t p = 0; p < placements.size(); ++p) {
    const std::string where = "placements[" + std::to_string(p) + "]";
    int type_id = static_cast<int>(expect_int(expect(placements[p], "type", where), where + ".type"));
    NodeId node = expect_int(expect(placements[p], "node", where), where + ".node");
    int count = placements[p].contains("count")
                    ? static_cast<int>(expect_int(placements[p]["count"], where + ".count"))
                    : 1;
    int cand = inst.candidate_index_of(node);
    if (cand < 0)
      throw SchemaError(where + ".node: " + std::to_string(node) + " is not a candidate node");
    alloc.add(type_id, cand, count);
  }
  check_feasible(inst, alloc);
  return alloc;
}

void write_allocation(const Allocation& alloc, const Instance& inst,
                      const std::filesystem::path& path) {
  json placements = json::array();
  for (const auto& [key, count] : alloc.placements())
    placements.push_back({{"type", key.first},
                          {"node", inst.candidates[key.second].id},
                          {"count", count}});
  json j = {{"placements", std::move(placements)}};
  write_file(path, j.dump(2) + "\n");
}

}  // namespace walkopt
