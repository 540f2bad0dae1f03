#ifndef SIRSHARE_INSTANCE_H_
#define SIRSHARE_INSTANCE_H_

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sirshare/numeric.h"

namespace sirshare {

// Dense square table of pairwise distances. Entries are stored as given;
// symmetry and the triangle inequality are checked by ValidateMetric rather
// than enforced, because some reduction instances are deliberately
// non-metric.
class DistanceTable {
 public:
  DistanceTable() = default;
  // All-zero table over `size` points.
  explicit DistanceTable(int size);

  // Throws MalformedInputError for ragged rows or non-finite entries.
  static DistanceTable FromRows(const std::vector<std::vector<double>>& rows);

  int size() const { return size_; }
  double operator()(int a, int b) const { return entries_[Index(a, b)]; }
  // Writes both (a, b) and (b, a).
  void Set(int a, int b, double value);
  void SetDirected(int a, int b, double value) { entries_[Index(a, b)] = value; }

  // True only when the triangle inequality is asserted to hold.
  bool metric_flag() const { return metric_flag_; }
  void set_metric_flag(bool flag) { metric_flag_ = flag; }

  std::vector<std::vector<double>> Rows() const;

  // Square sub-table over the given point indices, in order.
  DistanceTable Submatrix(std::span<const int> points) const;

 private:
  size_t Index(int a, int b) const {
    return static_cast<size_t>(a) * static_cast<size_t>(size_) +
           static_cast<size_t>(b);
  }

  int size_ = 0;
  std::vector<double> entries_;
  bool metric_flag_ = false;
};

struct MetricViolation {
  enum class Kind { kAsymmetric, kNegative, kNonzeroDiagonal, kTriangle };
  Kind kind;
  // For kTriangle: d(a, c) > d(a, b) + d(b, c). Otherwise c == b, or
  // a == b == c for the diagonal.
  int a;
  int b;
  int c;
  double excess;
};

struct MetricReport {
  std::vector<MetricViolation> violations;
  bool metric_flag = false;
};

// Lists every symmetry, nonnegativity, zero-diagonal and triangle violation
// larger than the tolerance. metric_flag is true iff the list is empty.
MetricReport ValidateMetric(const DistanceTable& table,
                            const Tolerance& tolerance = Tolerance::Default());

// Pairwise Euclidean distances. Throws MalformedInputError on mixed
// dimensions or non-finite coordinates.
DistanceTable FromEuclidean(const std::vector<std::vector<double>>& coords);

std::string ToString(MetricViolation::Kind kind);

enum class DropoffMode { kSingle, kMulti };

// Which limit of alpha_i / alpha_op the feasibility checks use. In the two
// limit regimes the per-passenger alphas are ignored by the feasibility
// test; in the zero limit the inconvenience costs vanish altogether.
enum class Regime { kFinite, kZeroLimit, kInfiniteLimit };

std::string ToString(DropoffMode mode);
std::string ToString(Regime regime);

// A ridesharing instance. Point layout inside the table: pickups
// 0..n-1 come first; the shared dropoff is point n (single mode), or
// passenger p's dropoff is point n + p (multi mode).
class Instance {
 public:
  // Throws MalformedInputError when the table size does not match the
  // mode, alpha_op <= 0, or some alpha is negative or non-finite.
  Instance(DistanceTable points, DropoffMode mode, double alpha_op,
           std::vector<double> alphas, Regime regime = Regime::kFinite);

  int num_passengers() const { return static_cast<int>(alphas_.size()); }
  const DistanceTable& points() const { return points_; }
  DropoffMode dropoff_mode() const { return mode_; }
  double alpha_op() const { return alpha_op_; }
  const std::vector<double>& alphas() const { return alphas_; }
  Regime regime() const { return regime_; }

  int pickup_point(int passenger) const { return passenger; }
  int dropoff_point(int passenger) const {
    return mode_ == DropoffMode::kSingle ? num_passengers()
                                         : num_passengers() + passenger;
  }
  // Length of the exclusive ride S_p D_p.
  double direct_distance(int passenger) const {
    return points_(pickup_point(passenger), dropoff_point(passenger));
  }
  // Detour sensitivity used when pricing inconvenience: zero in the
  // zero-limit regime, the stored alpha otherwise.
  double effective_alpha(int passenger) const {
    return regime_ == Regime::kZeroLimit ? 0.0 : alphas_[passenger];
  }

  Instance WithRegime(Regime regime) const;
  Instance WithAlphas(double alpha_op, std::vector<double> alphas) const;

 private:
  DistanceTable points_;
  DropoffMode mode_;
  double alpha_op_;
  std::vector<double> alphas_;
  Regime regime_;
};

enum class EventKind { kPickup, kDropoff };

struct RouteEvent {
  EventKind kind;
  int passenger;  // 0-based instance label
  friend bool operator==(const RouteEvent&, const RouteEvent&) = default;
};

// Ordered pickup/dropoff events. Passengers are identified by instance
// label; their theory index is their position in the pickup order.
class Route {
 public:
  Route() = default;
  explicit Route(std::vector<RouteEvent> events) : events_(std::move(events)) {}

  // Pickups in the given order followed by the dropoffs in the same order.
  static Route SingleDropoff(std::span<const int> pickup_order);

  const std::vector<RouteEvent>& events() const { return events_; }
  // Passenger labels in pickup order.
  std::vector<int> PickupOrder() const;
  // True when every pickup precedes every dropoff.
  bool IsSingleDropoffForm() const;

  friend bool operator==(const Route&, const Route&) = default;

 private:
  std::vector<RouteEvent> events_;
};

// Throws PreconditionError unless every passenger of the instance has
// exactly one pickup followed (later) by exactly one dropoff. In single
// mode the route must additionally be in single-dropoff form.
void ValidateRoute(const Instance& instance, const Route& route);

// Undirected simple graph on vertices 0..num_vertices-1.
struct SimpleGraph {
  int num_vertices = 0;
  std::vector<std::pair<int, int>> edges;
};

// Unique-feasible-route instance: S_j D = ell, consecutive pickups at
// z_j * ell with z_j = 1 / (1 + sum_{k<j} alpha_k / alpha_op), every other
// pickup pair at z_{min+1} * ell * (1 + slack), then shortened to the
// shortest-path closure so the table is a metric. Throws
// ConstructionError (naming the collapsing triple) if the closure erases
// the strict gap between a non-adjacent pair and its adjacent bound.
Instance GenerateLowerBoundInstance(int n, double alpha_op,
                                    std::vector<double> alphas, double ell,
                                    double slack = 0.01);

// Colinear instance with S_1 D = ell and S_j D = (2j / (2j - 1)) S_{j-1} D,
// all weights equal to 1, so the pickup order 1..n meets every feasibility
// constraint with equality.
Instance GenerateSqrtTightInstance(int n, double ell);

// Colinear instance with S_i D = 2^{i-1} ell in the zero-limit regime.
Instance GenerateExpTightInstance(int n, double ell);

// Non-metric instance whose feasible routes are exactly the directed
// Hamiltonian paths of `graph`: adjacent pickups at ell / n, others at ell,
// every pickup at ell from the dropoff, equal weights.
Instance ReduceHamiltonianPath(const SimpleGraph& graph, double ell);

// Every pickup at distance L = n * max_pairwise * (1 + margin) from the
// dropoff, so all n! routes are feasible and each route's length is the
// pickup path weight plus L.
Instance ReducePathTsp(const DistanceTable& metric, double margin = 0.01);

// Single-dropoff line instance with equal weights (alpha_i = alpha_op = 1).
Instance MakeLineInstance(std::span<const double> pickup_positions,
                          double dropoff_position);

}  // namespace sirshare

#endif  // SIRSHARE_INSTANCE_H_
