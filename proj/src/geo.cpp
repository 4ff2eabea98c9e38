#include "walkopt/geo.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <queue>
#include <sstream>
#include <unordered_map>

#include "json.hpp"
#include "walkopt/errors.hpp"
#include "walkopt/parallel.hpp"

namespace walkopt::geo {

namespace {

using nlohmann::json;

double deg2rad(double deg) { return deg * std::numbers::pi / 180.0; }

json load_feature_collection(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + " is not valid JSON: " + e.what());
  }
  if (!j.is_object() || j.value("type", "") != "FeatureCollection" || !j.contains("features") ||
      !j["features"].is_array())
    throw SchemaError(path.string() + ": expected a GeoJSON FeatureCollection");
  return j;
}

}  // namespace

double haversine_m(LonLat a, LonLat b) {
  const double phi1 = deg2rad(a.lat);
  const double phi2 = deg2rad(b.lat);
  const double dphi = deg2rad(b.lat - a.lat);
  const double dlam = deg2rad(b.lon - a.lon);
  const double s = std::sin(dphi / 2.0) * std::sin(dphi / 2.0) +
                   std::cos(phi1) * std::cos(phi2) * std::sin(dlam / 2.0) * std::sin(dlam / 2.0);
  return 2.0 * kEarthRadiusM * std::asin(std::min(1.0, std::sqrt(s)));
}

int PedGraph::add_or_get_node(LonLat pos) {
  auto key = std::make_pair(pos.lon, pos.lat);
  auto it = index_.find(key);
  if (it != index_.end()) return it->second;
  int id = static_cast<int>(nodes.size());
  nodes.push_back({static_cast<NodeId>(id), pos});
  adjacency.emplace_back();
  index_[key] = id;
  return id;
}

void PedGraph::add_edge(int u, int v, double meters) {
  adjacency[u].push_back({v, meters});
  adjacency[v].push_back({u, meters});
}

std::size_t PedGraph::num_edges() const {
  std::size_t n = 0;
  for (const auto& a : adjacency) n += a.size();
  return n / 2;
}

std::vector<int> PedGraph::isolated_nodes() const {
  std::vector<int> out;
  for (std::size_t v = 0; v < adjacency.size(); ++v)
    if (adjacency[v].empty()) out.push_back(static_cast<int>(v));
  return out;
}

PedGraph load_network_geojson(const std::filesystem::path& path, LoadStats* stats) {
  json j = load_feature_collection(path);
  PedGraph graph;
  LoadStats local;
  for (const auto& feature : j["features"]) {
    if (!feature.is_object() || !feature.contains("geometry") ||
        !feature["geometry"].is_object()) {
      ++local.skipped_features;
      continue;
    }
    const json& geom = feature["geometry"];
    if (geom.value("type", "") != "LineString") {
      ++local.skipped_features;
      continue;
    }
    const json& coords = geom["coordinates"];
    if (!coords.is_array() || coords.size() < 2)
      throw SchemaError(path.string() + ": LineString needs at least two coordinates");
    int prev = -1;
    for (const auto& c : coords) {
      if (!c.is_array() || c.size() < 2)
        throw SchemaError(path.string() + ": coordinate must be [lon, lat]");
      LonLat pos{c[0].get<double>(), c[1].get<double>()};
      if (!std::isfinite(pos.lon) || !std::isfinite(pos.lat))
        throw SchemaError(path.string() + ": non-finite coordinate");
      int node = graph.add_or_get_node(pos);
      if (prev >= 0) {
        if (node == prev) {
          ++local.dropped_zero_length;
        } else {
          double len = haversine_m(graph.nodes[prev].pos, graph.nodes[node].pos);
          if (len <= 0.0) {
            ++local.dropped_zero_length;
          } else {
            graph.add_edge(prev, node, len);
            ++local.edges;
          }
        }
      }
      prev = node;
    }
  }
  if (stats) *stats = local;
  return graph;
}

PointLayer load_points_geojson(const std::filesystem::path& path) {
  json j = load_feature_collection(path);
  PointLayer layer;
  std::size_t index = 0;
  for (const auto& feature : j["features"]) {
    const std::string where = path.string() + ": features[" + std::to_string(index++) + "]";
    if (!feature.is_object() || !feature.contains("geometry")) continue;
    const json& geom = feature["geometry"];
    if (geom.value("type", "") != "Point") continue;
    const json& c = geom["coordinates"];
    if (!c.is_array() || c.size() < 2) throw SchemaError(where + ": coordinate must be [lon, lat]");
    TypedPoint point;
    point.pos = {c[0].get<double>(), c[1].get<double>()};
    if (!std::isfinite(point.pos.lon) || !std::isfinite(point.pos.lat))
      throw SchemaError(where + ": non-finite coordinate");
    if (!feature.contains("properties") || !feature["properties"].is_object() ||
        !feature["properties"].contains("role"))
      throw SchemaError(where + ": point feature is missing the 'role' property");
    std::string role = feature["properties"]["role"].get<std::string>();
    if (role == "residence") {
      point.role = PointRole::residence;
    } else if (role == "candidate") {
      point.role = PointRole::candidate;
    } else if (role.rfind("existing:", 0) == 0) {
      point.role = PointRole::existing;
      point.type_token = role.substr(9);
      if (point.type_token.empty()) throw SchemaError(where + ": empty type in role '" + role + "'");
    } else {
      throw SchemaError(where + ": unknown role '" + role + "'");
    }
    layer.points.push_back(std::move(point));
  }
  return layer;
}

std::pair<PedGraph, PointLayer> load_geojson(const std::filesystem::path& network_path,
                                             const std::filesystem::path& points_path,
                                             LoadStats* stats) {
  return {load_network_geojson(network_path, stats), load_points_geojson(points_path)};
}

namespace {

// Uniform lon/lat grid over the graph nodes for nearest-node queries.
class SnapGrid {
 public:
  explicit SnapGrid(const PedGraph& graph) : graph_(graph) {
    for (std::size_t v = 0; v < graph.nodes.size(); ++v) {
      auto k = key(graph.nodes[v].pos);
      cells_[k].push_back(static_cast<int>(v));
      min_x_ = std::min(min_x_, k.first);
      max_x_ = std::max(max_x_, k.first);
      min_y_ = std::min(min_y_, k.second);
      max_y_ = std::max(max_y_, k.second);
    }
  }

  int nearest(LonLat p, double* best_dist_out) const {
    int best = -1;
    double best_dist = std::numeric_limits<double>::infinity();
    const auto [cx, cy] = key(p);
    const long max_ring = std::max({std::abs(cx - min_x_), std::abs(max_x_ - cx),
                                    std::abs(cy - min_y_), std::abs(max_y_ - cy)});
    // Smallest metric extent of one cell step around p; a ring at Chebyshev
    // distance r is at least (r - 1) * cell_floor_m away.
    const double cell_m = kCell * (std::numbers::pi / 180.0) * kEarthRadiusM;
    const double cell_floor_m = cell_m * std::min(1.0, std::abs(std::cos(deg2rad(p.lat))));
    auto visit = [&](long x, long y) {
      auto it = cells_.find({x, y});
      if (it == cells_.end()) return;
      for (int v : it->second) {
        double d = haversine_m(p, graph_.nodes[v].pos);
        if (d < best_dist || (d == best_dist && graph_.nodes[v].id < graph_.nodes[best].id)) {
          best_dist = d;
          best = v;
        }
      }
    };
    for (long ring = 0; ring <= max_ring; ++ring) {
      if (best >= 0 && static_cast<double>(ring - 1) * cell_floor_m > best_dist) break;
      if (ring == 0) {
        visit(cx, cy);
        continue;
      }
      for (long x = cx - ring; x <= cx + ring; ++x) {
        visit(x, cy - ring);
        visit(x, cy + ring);
      }
      for (long y = cy - ring + 1; y <= cy + ring - 1; ++y) {
        visit(cx - ring, y);
        visit(cx + ring, y);
      }
    }
    if (best_dist_out) *best_dist_out = best_dist;
    return best;
  }

 private:
  static constexpr double kCell = 0.002;  // about 200 m in latitude

  std::pair<long, long> key(LonLat p) const {
    return {static_cast<long>(std::floor(p.lon / kCell)),
            static_cast<long>(std::floor(p.lat / kCell))};
  }

  const PedGraph& graph_;
  std::map<std::pair<long, long>, std::vector<int>> cells_;
  long min_x_ = std::numeric_limits<long>::max();
  long max_x_ = std::numeric_limits<long>::min();
  long min_y_ = std::numeric_limits<long>::max();
  long max_y_ = std::numeric_limits<long>::min();
};

}  // namespace

SnapResult snap_points(const PedGraph& graph, const PointLayer& layer, double warn_threshold_m) {
  if (graph.nodes.empty()) throw ValidationError("cannot snap points to an empty network");
  SnapGrid grid(graph);
  SnapResult out;
  out.node_index.reserve(layer.points.size());
  out.displacement_m.reserve(layer.points.size());
  for (const auto& point : layer.points) {
    double dist = 0.0;
    int v = grid.nearest(point.pos, &dist);
    out.node_index.push_back(v);
    out.displacement_m.push_back(dist);
    if (dist > warn_threshold_m) ++out.far_count;
  }
  return out;
}

Matrix distance_matrix(const PedGraph& graph, std::span<const int> sources,
                       std::span<const int> targets, double unreachable_value, int threads) {
  Matrix out(targets.size(), sources.size());
  const double inf = std::numeric_limits<double>::infinity();
  parallel_for(sources.size(), threads, [&](std::size_t begin, std::size_t end) {
    std::vector<double> dist(graph.num_nodes());
    using QueueItem = std::pair<double, int>;
    for (std::size_t s = begin; s < end; ++s) {
      std::fill(dist.begin(), dist.end(), inf);
      std::priority_queue<QueueItem, std::vector<QueueItem>, std::greater<>> queue;
      dist[sources[s]] = 0.0;
      queue.push({0.0, sources[s]});
      while (!queue.empty()) {
        auto [d, u] = queue.top();
        queue.pop();
        if (d > dist[u]) continue;
        for (auto [v, len] : graph.adjacency[u]) {
          double nd = d + len;
          if (nd < dist[v]) {
            dist[v] = nd;
            queue.push({nd, v});
          }
        }
      }
      for (std::size_t r = 0; r < targets.size(); ++r)
        out(r, s) = std::isfinite(dist[targets[r]]) ? dist[targets[r]] : unreachable_value;
    }
  });
  return out;
}

BuildResult build_instance(const PedGraph& graph, const PointLayer& layer,
                           std::vector<AmenityTypeSpec> specs, PwlCurve curve, double d_infinity,
                           const BuildOptions& options) {
  SnapResult snap = snap_points(graph, layer, options.snap_warn_threshold_m);

  auto resolve_type = [&specs](const std::string& token) -> int {
    for (const auto& spec : specs) {
      if (token == std::to_string(spec.id) || token == spec.name) return spec.id;
    }
    throw SchemaError("existing amenity role references unknown type '" + token + "'");
  };

  std::vector<NodeId> residents;
  std::map<NodeId, int> capacities;
  std::map<int, std::vector<NodeId>> existing;
  for (std::size_t p = 0; p < layer.points.size(); ++p) {
    const NodeId node = graph.nodes[snap.node_index[p]].id;
    switch (layer.points[p].role) {
      case PointRole::residence:
        residents.push_back(node);
        break;
      case PointRole::candidate:
        capacities[node] += 1;
        break;
      case PointRole::existing:
        existing[resolve_type(layer.points[p].type_token)].push_back(node);
        break;
    }
  }
  std::sort(residents.begin(), residents.end());
  residents.erase(std::unique(residents.begin(), residents.end()), residents.end());

  // Column node order must match the canonical instance layout: candidates
  // by id, then existing grouped by type id, each sorted by id.
  std::sort(specs.begin(), specs.end(),
            [](const AmenityTypeSpec& a, const AmenityTypeSpec& b) { return a.id < b.id; });
  std::vector<int> source_nodes;
  for (const auto& [node, cap] : capacities) source_nodes.push_back(static_cast<int>(node));
  for (auto& [type_id, nodes] : existing) {
    std::sort(nodes.begin(), nodes.end());
    for (NodeId nd : nodes) source_nodes.push_back(static_cast<int>(nd));
  }
  std::vector<int> target_nodes;
  for (NodeId nd : residents) target_nodes.push_back(static_cast<int>(nd));

  Matrix dist = distance_matrix(graph, source_nodes, target_nodes, d_infinity, options.threads);

  Instance inst;
  inst.name = options.name;
  inst.curve = std::move(curve);
  inst.d_infinity = d_infinity;
  inst.residents = residents;
  for (const auto& [node, cap] : capacities) inst.candidates.push_back({node, cap});
  inst.types = specs;
  inst.existing.resize(inst.types.size());
  for (const auto& [type_id, nodes] : existing) {
    int t = inst.type_index_of(type_id);
    inst.existing[t] = nodes;
  }
  inst.dist = std::move(dist);
  for (NodeId nd : residents) inst.coords[nd] = graph.nodes[nd].pos;
  for (const auto& [node, cap] : capacities) inst.coords[node] = graph.nodes[node].pos;
  for (const auto& [type_id, nodes] : existing)
    for (NodeId nd : nodes) inst.coords[nd] = graph.nodes[nd].pos;

  require_valid(inst);
  return {std::move(inst), std::move(snap)};
}

}  // namespace walkopt::geo
