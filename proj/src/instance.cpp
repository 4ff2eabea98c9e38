#include "walkopt/instance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "walkopt/errors.hpp"

namespace walkopt {

double PwlCurve::value(double distance) const {
  const auto& bp = breakpoints;
  if (distance <= bp.front().distance) return bp.front().score;
  if (distance >= bp.back().distance) return bp.back().score;
  auto it = std::upper_bound(bp.begin(), bp.end(), distance,
                             [](double d, const Breakpoint& b) { return d < b.distance; });
  const Breakpoint& hi = *it;
  const Breakpoint& lo = *(it - 1);
  return lo.score +
         (hi.score - lo.score) * ((distance - lo.distance) / (hi.distance - lo.distance));
}

double pwl_score(double distance, const PwlCurve& curve) { return curve.value(distance); }

std::size_t Instance::total_existing() const {
  std::size_t n = 0;
  for (const auto& l : existing) n += l.size();
  return n;
}

std::size_t Instance::existing_col_begin(std::size_t type_index) const {
  std::size_t col = candidates.size();
  for (std::size_t t = 0; t < type_index; ++t) col += existing[t].size();
  return col;
}

int Instance::type_index_of(int type_id) const {
  for (std::size_t t = 0; t < types.size(); ++t)
    if (types[t].id == type_id) return static_cast<int>(t);
  return -1;
}

int Instance::candidate_index_of(NodeId node) const {
  for (std::size_t j = 0; j < candidates.size(); ++j)
    if (candidates[j].id == node) return static_cast<int>(j);
  return -1;
}

namespace {

void check_curve(const PwlCurve& curve, double d_infinity, std::vector<Violation>& out) {
  const auto& bp = curve.breakpoints;
  if (bp.size() < 2) {
    out.push_back({"bad_curve", "curve", "curve needs at least two breakpoints"});
    return;
  }
  if (bp.front().distance != 0.0)
    out.push_back({"bad_curve", "curve[0]", "first breakpoint distance must be 0"});
  for (std::size_t b = 0; b < bp.size(); ++b) {
    if (!std::isfinite(bp[b].distance) || !std::isfinite(bp[b].score))
      out.push_back({"bad_curve", "curve[" + std::to_string(b) + "]", "non-finite breakpoint"});
    if (bp[b].score < 0.0 || bp[b].score > 100.0)
      out.push_back({"bad_curve", "curve[" + std::to_string(b) + "]", "score outside [0, 100]"});
    if (b > 0) {
      if (bp[b].distance <= bp[b - 1].distance)
        out.push_back({"bad_curve", "curve[" + std::to_string(b) + "]",
                       "distances must be strictly increasing"});
      if (bp[b].score > bp[b - 1].score)
        out.push_back({"bad_curve", "curve[" + std::to_string(b) + "]",
                       "scores must be non-increasing"});
    }
  }
  if (bp.back().score != 0.0)
    out.push_back({"bad_curve", "curve", "last breakpoint score must be 0"});
  if (d_infinity != bp.back().distance)
    out.push_back({"bad_d_infinity", "d_infinity",
                   "d_infinity must equal the last breakpoint distance"});
}

void check_spec(const AmenityTypeSpec& spec, const std::string& where,
                std::vector<Violation>& out) {
  if (spec.raw_weights.empty()) {
    out.push_back({"weights_empty", where, "raw_weights must be non-empty"});
    return;
  }
  for (std::size_t p = 0; p < spec.raw_weights.size(); ++p) {
    double w = spec.raw_weights[p];
    if (!(w > 0.0) || !std::isfinite(w))
      out.push_back({"weights_nonpositive", where + ".raw_weights[" + std::to_string(p) + "]",
                     "raw weights must be positive and finite"});
    if (p > 0 && spec.raw_weights[p] > spec.raw_weights[p - 1])
      out.push_back({"weights_increasing", where + ".raw_weights[" + std::to_string(p) + "]",
                     "depth weights must be non-increasing"});
  }
  if (spec.budget < 0)
    out.push_back({"negative_budget", where + ".budget", "budget must be >= 0"});
}

}  // namespace

std::vector<Violation> validate_instance(const Instance& inst) {
  std::vector<Violation> out;

  if (inst.residents.empty())
    out.push_back({"empty_residents", "residents", "at least one residential node is required"});
  if (inst.types.empty())
    out.push_back({"empty_types", "amenity_types", "at least one amenity type is required"});

  if (!(inst.d_infinity > 0.0))
    out.push_back({"bad_d_infinity", "d_infinity", "d_infinity must be > 0"});
  check_curve(inst.curve, inst.d_infinity, out);

  for (std::size_t i = 1; i < inst.residents.size(); ++i)
    if (inst.residents[i] <= inst.residents[i - 1])
      out.push_back({"duplicate_resident", "residents[" + std::to_string(i) + "]",
                     "resident ids must be unique and sorted"});

  for (std::size_t j = 0; j < inst.candidates.size(); ++j) {
    if (inst.candidates[j].capacity < 0)
      out.push_back({"negative_capacity", "candidates[" + std::to_string(j) + "]",
                     "capacity must be >= 0"});
    if (j > 0 && inst.candidates[j].id <= inst.candidates[j - 1].id)
      out.push_back({"duplicate_candidate", "candidates[" + std::to_string(j) + "]",
                     "candidate ids must be unique and sorted"});
  }

  std::map<int, int> seen_type_ids;
  for (std::size_t t = 0; t < inst.types.size(); ++t) {
    const auto& spec = inst.types[t];
    check_spec(spec, "amenity_types[" + std::to_string(t) + "]", out);
    if (seen_type_ids.count(spec.id))
      out.push_back({"duplicate_type_id", "amenity_types[" + std::to_string(t) + "]",
                     "type id " + std::to_string(spec.id) + " appears twice"});
    seen_type_ids[spec.id] = 1;
    if (t > 0 && inst.types[t].id < inst.types[t - 1].id)
      out.push_back({"unsorted_types", "amenity_types[" + std::to_string(t) + "]",
                     "types must be sorted by id"});
  }

  if (inst.existing.size() != inst.types.size())
    out.push_back({"existing_shape", "existing",
                   "existing lists must parallel the amenity types"});

  if (inst.dist.rows() != inst.residents.size() || inst.dist.cols() != inst.num_columns()) {
    std::ostringstream msg;
    msg << "distance matrix is " << inst.dist.rows() << "x" << inst.dist.cols() << ", expected "
        << inst.residents.size() << "x" << inst.num_columns();
    out.push_back({"dimension_mismatch", "distances", msg.str()});
  } else {
    for (std::size_t i = 0; i < inst.dist.rows(); ++i)
      for (std::size_t c = 0; c < inst.dist.cols(); ++c) {
        double d = inst.dist(i, c);
        if (!std::isfinite(d)) {
          out.push_back({"nonfinite_distance",
                         "distances[" + std::to_string(i) + "][" + std::to_string(c) + "]",
                         "distances must be finite"});
        } else if (d < 0.0) {
          out.push_back({"negative_distance",
                         "distances[" + std::to_string(i) + "][" + std::to_string(c) + "]",
                         "distances must be >= 0"});
        }
      }
  }

  // Normalized weights must exist and sum to 1.
  bool weights_ok = true;
  for (const auto& spec : inst.types) {
    if (spec.raw_weights.empty()) weights_ok = false;
    for (double w : spec.raw_weights)
      if (!(w > 0.0) || !std::isfinite(w)) weights_ok = false;
  }
  if (weights_ok && !inst.types.empty()) {
    auto norm = normalize_weights(inst.types);
    double total = 0.0;
    for (const auto& tw : norm)
      for (double w : tw) total += w;
    if (std::abs(total - 1.0) > 1e-12)
      out.push_back({"weights_unnormalized", "amenity_types",
                     "normalized weights do not sum to 1"});
  }

  return out;
}

void require_valid(const Instance& inst) {
  auto violations = validate_instance(inst);
  if (violations.empty()) return;
  std::ostringstream msg;
  msg << "invalid instance:";
  for (const auto& v : violations) msg << " [" << v.code << " at " << v.where << "]";
  throw ValidationError(msg.str());
}

std::vector<std::vector<double>> normalize_weights(const std::vector<AmenityTypeSpec>& specs) {
  if (specs.empty()) throw ValidationError("invalid weights: no amenity types given");
  double grand = 0.0;
  for (const auto& spec : specs) {
    if (spec.raw_weights.empty())
      throw ValidationError("invalid weights: type " + std::to_string(spec.id) +
                            " has no raw weights");
    for (double w : spec.raw_weights) {
      if (!(w > 0.0) || !std::isfinite(w))
        throw ValidationError("invalid weights: type " + std::to_string(spec.id) +
                              " has a non-positive weight");
      grand += w;
    }
  }
  std::vector<std::vector<double>> out(specs.size());
  for (std::size_t t = 0; t < specs.size(); ++t) {
    out[t].reserve(specs[t].raw_weights.size());
    for (double w : specs[t].raw_weights) out[t].push_back(w / grand);
  }
  return out;
}

int available_choices(const AmenityTypeSpec& spec, int existing_count) {
  return std::min(spec.budget + existing_count, spec.options());
}

void Allocation::add(int type_id, int candidate_index, int count) {
  if (count == 0) return;
  auto key = Key{type_id, candidate_index};
  int next = placements_.count(key) ? placements_.at(key) + count : count;
  if (next == 0)
    placements_.erase(key);
  else
    placements_[key] = next;
}

int Allocation::count(int type_id, int candidate_index) const {
  auto it = placements_.find({type_id, candidate_index});
  return it == placements_.end() ? 0 : it->second;
}

int Allocation::total_for_type(int type_id) const {
  int n = 0;
  for (const auto& [key, c] : placements_)
    if (key.first == type_id) n += c;
  return n;
}

int Allocation::total_at(int candidate_index) const {
  int n = 0;
  for (const auto& [key, c] : placements_)
    if (key.second == candidate_index) n += c;
  return n;
}

int Allocation::total() const {
  int n = 0;
  for (const auto& [key, c] : placements_) n += c;
  return n;
}

bool Allocation::lex_less(const Allocation& other) const {
  auto a = placements_.begin();
  auto b = other.placements_.begin();
  int ra = 0, rb = 0;  // remaining copies of the current run
  while (true) {
    if (ra == 0) {
      if (a == placements_.end()) return b != other.placements_.end() || rb > 0;
      ra = a->second;
    }
    if (rb == 0) {
      if (b == other.placements_.end()) return false;
      rb = b->second;
    }
    if (a->first != b->first) return a->first < b->first;
    int step = std::min(ra, rb);
    ra -= step;
    rb -= step;
    if (ra == 0) ++a;
    if (rb == 0) ++b;
  }
}

void check_feasible(const Instance& inst, const Allocation& alloc) {
  std::map<int, int> per_type;
  std::vector<int> per_cand(inst.candidates.size(), 0);
  for (const auto& [key, count] : alloc.placements()) {
    auto [type_id, cand] = key;
    if (count < 0) throw FeasibilityError("negative placement count");
    if (inst.type_index_of(type_id) < 0)
      throw FeasibilityError("unknown amenity type id " + std::to_string(type_id));
    if (cand < 0 || cand >= static_cast<int>(inst.candidates.size()))
      throw FeasibilityError("candidate index " + std::to_string(cand) + " out of range");
    per_type[type_id] += count;
    per_cand[cand] += count;
  }
  for (const auto& [type_id, n] : per_type) {
    const auto& spec = inst.types[inst.type_index_of(type_id)];
    if (n > spec.budget)
      throw FeasibilityError("budget exceeded for type " + std::to_string(type_id) + ": " +
                             std::to_string(n) + " > " + std::to_string(spec.budget));
  }
  for (std::size_t j = 0; j < per_cand.size(); ++j)
    if (per_cand[j] > inst.candidates[j].capacity)
      throw FeasibilityError("capacity exceeded at candidate index " + std::to_string(j) + ": " +
                             std::to_string(per_cand[j]) + " > " +
                             std::to_string(inst.candidates[j].capacity));
}

InstanceBuilder& InstanceBuilder::name(std::string v) {
  name_ = std::move(v);
  return *this;
}
InstanceBuilder& InstanceBuilder::curve(PwlCurve v) {
  curve_ = std::move(v);
  return *this;
}
InstanceBuilder& InstanceBuilder::d_infinity(double v) {
  d_infinity_ = v;
  return *this;
}
InstanceBuilder& InstanceBuilder::add_resident(NodeId id, std::optional<LonLat> pos) {
  residents_.push_back(id);
  if (pos) coords_[id] = *pos;
  return *this;
}
InstanceBuilder& InstanceBuilder::add_candidate(NodeId id, int capacity,
                                                std::optional<LonLat> pos) {
  candidates_.push_back({id, capacity});
  if (pos) coords_[id] = *pos;
  return *this;
}
InstanceBuilder& InstanceBuilder::add_type(AmenityTypeSpec spec) {
  types_.push_back(std::move(spec));
  return *this;
}
InstanceBuilder& InstanceBuilder::add_existing(int type_id, NodeId node,
                                               std::optional<LonLat> pos) {
  existing_[type_id].push_back(node);
  if (pos) coords_[node] = *pos;
  return *this;
}
InstanceBuilder& InstanceBuilder::candidate_distance(NodeId resident, NodeId candidate,
                                                     double meters) {
  cand_dist_[{resident, candidate}] = meters;
  return *this;
}
InstanceBuilder& InstanceBuilder::existing_distance(NodeId resident, int type_id, NodeId node,
                                                    double meters) {
  exist_dist_[{resident, type_id, node}] = meters;
  return *this;
}

Instance InstanceBuilder::build() const {
  Instance inst;
  inst.name = name_;
  inst.curve = curve_;
  inst.d_infinity = d_infinity_;
  inst.coords = coords_;

  inst.residents = residents_;
  std::sort(inst.residents.begin(), inst.residents.end());

  inst.candidates = candidates_;
  std::sort(inst.candidates.begin(), inst.candidates.end(),
            [](const Candidate& a, const Candidate& b) { return a.id < b.id; });

  inst.types = types_;
  std::sort(inst.types.begin(), inst.types.end(),
            [](const AmenityTypeSpec& a, const AmenityTypeSpec& b) { return a.id < b.id; });

  inst.existing.resize(inst.types.size());
  for (const auto& [type_id, nodes] : existing_) {
    int t = inst.type_index_of(type_id);
    if (t < 0)
      throw ValidationError("existing amenities reference unknown type id " +
                            std::to_string(type_id));
    inst.existing[t] = nodes;
    std::sort(inst.existing[t].begin(), inst.existing[t].end());
  }

  inst.dist = Matrix(inst.residents.size(), inst.num_columns());
  for (std::size_t i = 0; i < inst.residents.size(); ++i) {
    NodeId res = inst.residents[i];
    for (std::size_t j = 0; j < inst.candidates.size(); ++j) {
      auto it = cand_dist_.find({res, inst.candidates[j].id});
      if (it == cand_dist_.end())
        throw ValidationError("missing distance from resident " + std::to_string(res) +
                              " to candidate " + std::to_string(inst.candidates[j].id));
      inst.dist(i, j) = it->second;
    }
    std::size_t col = inst.candidates.size();
    for (std::size_t t = 0; t < inst.types.size(); ++t)
      for (NodeId node : inst.existing[t]) {
        auto it = exist_dist_.find({res, inst.types[t].id, node});
        if (it == exist_dist_.end())
          throw ValidationError("missing distance from resident " + std::to_string(res) +
                                " to existing node " + std::to_string(node) + " of type " +
                                std::to_string(inst.types[t].id));
        inst.dist(i, col++) = it->second;
      }
  }

  require_valid(inst);
  return inst;
}

}  // namespace walkopt
