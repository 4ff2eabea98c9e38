#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace walkopt {

using NodeId = std::int64_t;

struct LonLat {
  double lon = 0.0;
  double lat = 0.0;
};

// One amenity type: a single weight for nearest-only types, a non-increasing
// weight list over the top-r nearest options for depth-of-choice types.
struct AmenityTypeSpec {
  int id = 0;
  std::string name;
  std::vector<double> raw_weights;
  int budget = 0;  // max number of new instances of this type

  bool is_depth() const { return raw_weights.size() > 1; }
  int options() const { return static_cast<int>(raw_weights.size()); }
};

// Non-increasing piecewise-linear score over walking distance, given as
// (distance meters, score points) breakpoints. First distance is 0, last
// score is 0; beyond the last breakpoint the score stays 0.
struct PwlCurve {
  struct Breakpoint {
    double distance = 0.0;
    double score = 0.0;
  };
  std::vector<Breakpoint> breakpoints;

  double value(double distance) const;
  double cutoff_distance() const { return breakpoints.back().distance; }
};

// Linear interpolation on the curve; exact at breakpoints, clamped to the
// final score beyond the last breakpoint.
double pwl_score(double distance, const PwlCurve& curve);

struct Candidate {
  NodeId id = 0;
  int capacity = 0;
};

// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), v_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double operator()(std::size_t r, std::size_t c) const { return v_[r * cols_ + c]; }
  double& operator()(std::size_t r, std::size_t c) { return v_[r * cols_ + c]; }
  const std::vector<double>& data() const { return v_; }
  std::vector<double>& data() { return v_; }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> v_;
};

}  // namespace walkopt
