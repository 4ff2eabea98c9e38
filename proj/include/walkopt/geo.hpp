#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "walkopt/instance.hpp"

namespace walkopt::geo {

inline constexpr double kEarthRadiusM = 6371008.8;  // mean Earth radius

// Great-circle distance in meters.
double haversine_m(LonLat a, LonLat b);

// Undirected pedestrian network; node ids are dense indices assigned in
// order of first appearance.
struct PedGraph {
  struct Node {
    NodeId id = 0;
    LonLat pos;
  };
  std::vector<Node> nodes;
  std::vector<std::vector<std::pair<int, double>>> adjacency;  // (node index, meters)

  int add_or_get_node(LonLat pos);
  void add_edge(int u, int v, double meters);
  std::size_t num_nodes() const { return nodes.size(); }
  std::size_t num_edges() const;
  std::vector<int> isolated_nodes() const;

 private:
  std::map<std::pair<double, double>, int> index_;
};

enum class PointRole { residence, candidate, existing };

struct TypedPoint {
  PointRole role = PointRole::residence;
  std::string type_token;  // for existing points: the raw type id or name
  LonLat pos;
};

struct PointLayer {
  std::vector<TypedPoint> points;
};

struct LoadStats {
  std::size_t edges = 0;
  std::size_t dropped_zero_length = 0;
  std::size_t skipped_features = 0;
};

// Reads a GeoJSON FeatureCollection of LineStrings; consecutive coordinates
// become undirected edges with haversine lengths, duplicate coordinates
// share one node.
PedGraph load_network_geojson(const std::filesystem::path& path, LoadStats* stats = nullptr);

// Reads a GeoJSON FeatureCollection of Points carrying a `role` property:
// "residence", "candidate", or "existing:<type>".
PointLayer load_points_geojson(const std::filesystem::path& path);

// Convenience wrapper loading both files.
std::pair<PedGraph, PointLayer> load_geojson(const std::filesystem::path& network_path,
                                             const std::filesystem::path& points_path,
                                             LoadStats* stats = nullptr);

struct SnapResult {
  std::vector<int> node_index;        // per point
  std::vector<double> displacement_m; // per point
  std::size_t far_count = 0;          // displacements above the warn threshold
};

// Maps every point to its geodesically nearest graph node; equal distances
// go to the lower node id.
SnapResult snap_points(const PedGraph& graph, const PointLayer& layer,
                       double warn_threshold_m = 500.0);

// Shortest-path distances over the undirected graph, one Dijkstra run per
// source; rows follow `targets`, columns `sources`. Unreachable pairs get
// `unreachable_value`.
Matrix distance_matrix(const PedGraph& graph, std::span<const int> sources,
                       std::span<const int> targets, double unreachable_value, int threads = 0);

struct BuildOptions {
  std::string name;
  double snap_warn_threshold_m = 500.0;
  int threads = 0;
};

struct BuildResult {
  Instance instance;
  SnapResult snap;
};

// Full pipeline: snap points, derive residents / capacitated candidates /
// existing amenities, compute the distance matrix, and assemble a valid
// instance. Residential nodes are the distinct nodes receiving at least one
// residence; candidate capacity is the number of candidate points snapped to
// the node.
BuildResult build_instance(const PedGraph& graph, const PointLayer& layer,
                           std::vector<AmenityTypeSpec> specs, PwlCurve curve, double d_infinity,
                           const BuildOptions& options = {});

}  // namespace walkopt::geo
