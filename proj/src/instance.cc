#include "sirshare/instance.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "sirshare/errors.h"

namespace sirshare {

DistanceTable::DistanceTable(int size)
    : size_(size),
      entries_(static_cast<size_t>(size) * static_cast<size_t>(size), 0.0) {
  if (size < 0) throw MalformedInputError("negative table size");
}

DistanceTable DistanceTable::FromRows(
    const std::vector<std::vector<double>>& rows) {
  const int n = static_cast<int>(rows.size());
  DistanceTable table(n);
  for (int a = 0; a < n; ++a) {
    if (static_cast<int>(rows[a].size()) != n) {
      std::ostringstream msg;
      msg << "distance table is not square: row " << a + 1 << " has "
          << rows[a].size() << " entries, expected " << n;
      throw MalformedInputError(msg.str());
    }
    for (int b = 0; b < n; ++b) {
      if (!std::isfinite(rows[a][b])) {
        std::ostringstream msg;
        msg << "distance table entry (" << a + 1 << ", " << b + 1
            << ") is not finite";
        throw MalformedInputError(msg.str());
      }
      table.SetDirected(a, b, rows[a][b]);
    }
  }
  return table;
}

void DistanceTable::Set(int a, int b, double value) {
  entries_[Index(a, b)] = value;
  entries_[Index(b, a)] = value;
}

std::vector<std::vector<double>> DistanceTable::Rows() const {
  std::vector<std::vector<double>> rows(size_, std::vector<double>(size_));
  for (int a = 0; a < size_; ++a) {
    for (int b = 0; b < size_; ++b) rows[a][b] = (*this)(a, b);
  }
  return rows;
}

DistanceTable DistanceTable::Submatrix(std::span<const int> points) const {
  DistanceTable sub(static_cast<int>(points.size()));
  for (size_t a = 0; a < points.size(); ++a) {
    for (size_t b = 0; b < points.size(); ++b) {
      sub.SetDirected(static_cast<int>(a), static_cast<int>(b),
                      (*this)(points[a], points[b]));
    }
  }
  sub.set_metric_flag(metric_flag_);
  return sub;
}

MetricReport ValidateMetric(const DistanceTable& table,
                            const Tolerance& tolerance) {
  MetricReport report;
  const int n = table.size();
  auto add = [&](MetricViolation::Kind kind, int a, int b, int c,
                 double excess) {
    report.violations.push_back({kind, a, b, c, excess});
  };
  for (int a = 0; a < n; ++a) {
    const double diag = table(a, a);
    if (!tolerance.IsZero(diag)) {
      add(MetricViolation::Kind::kNonzeroDiagonal, a, a, a, std::fabs(diag));
    }
    for (int b = 0; b < n; ++b) {
      const double ab = table(a, b);
      if (a != b && ab < -tolerance.Allowance(ab, 0.0)) {
        add(MetricViolation::Kind::kNegative, a, b, b, -ab);
      }
      if (a < b && !tolerance.Equal(ab, table(b, a))) {
        add(MetricViolation::Kind::kAsymmetric, a, b, b,
            std::fabs(ab - table(b, a)));
      }
    }
  }
  for (int a = 0; a < n; ++a) {
    for (int c = 0; c < n; ++c) {
      if (a == c) continue;
      const double direct = table(a, c);
      for (int b = 0; b < n; ++b) {
        if (b == a || b == c) continue;
        const double via = table(a, b) + table(b, c);
        if (!tolerance.LessOrEqual(direct, via)) {
          add(MetricViolation::Kind::kTriangle, a, b, c, direct - via);
        }
      }
    }
  }
  report.metric_flag = report.violations.empty();
  return report;
}

DistanceTable FromEuclidean(const std::vector<std::vector<double>>& coords) {
  const int n = static_cast<int>(coords.size());
  DistanceTable table(n);
  if (n == 0) return table;
  const size_t dim = coords.front().size();
  for (int a = 0; a < n; ++a) {
    if (coords[a].size() != dim) {
      std::ostringstream msg;
      msg << "coordinate " << a + 1 << " has dimension " << coords[a].size()
          << ", expected " << dim;
      throw MalformedInputError(msg.str());
    }
    for (double x : coords[a]) {
      if (!std::isfinite(x)) {
        throw MalformedInputError("coordinates must be finite");
      }
    }
  }
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      double sum = 0.0;
      for (size_t k = 0; k < dim; ++k) {
        const double diff = coords[a][k] - coords[b][k];
        sum += diff * diff;
      }
      table.Set(a, b, std::sqrt(sum));
    }
  }
  table.set_metric_flag(true);
  return table;
}

std::string ToString(MetricViolation::Kind kind) {
  switch (kind) {
    case MetricViolation::Kind::kAsymmetric:
      return "asymmetric";
    case MetricViolation::Kind::kNegative:
      return "negative";
    case MetricViolation::Kind::kNonzeroDiagonal:
      return "nonzero-diagonal";
    case MetricViolation::Kind::kTriangle:
      return "triangle";
  }
  return "unknown";
}

std::string ToString(DropoffMode mode) {
  return mode == DropoffMode::kSingle ? "single" : "multi";
}

std::string ToString(Regime regime) {
  switch (regime) {
    case Regime::kFinite:
      return "finite";
    case Regime::kZeroLimit:
      return "zero";
    case Regime::kInfiniteLimit:
      return "infinite";
  }
  return "unknown";
}

Instance::Instance(DistanceTable points, DropoffMode mode, double alpha_op,
                   std::vector<double> alphas, Regime regime)
    : points_(std::move(points)),
      mode_(mode),
      alpha_op_(alpha_op),
      alphas_(std::move(alphas)),
      regime_(regime) {
  const int n = num_passengers();
  if (n < 1) throw MalformedInputError("instance needs at least one passenger");
  const int expected = mode_ == DropoffMode::kSingle ? n + 1 : 2 * n;
  if (points_.size() != expected) {
    std::ostringstream msg;
    msg << "distance table has " << points_.size() << " points; "
        << ToString(mode_) << "-dropoff instance with " << n
        << " passengers needs " << expected;
    throw MalformedInputError(msg.str());
  }
  if (!(alpha_op_ > 0.0) || !std::isfinite(alpha_op_)) {
    throw MalformedInputError("alpha_op must be positive and finite");
  }
  for (int i = 0; i < n; ++i) {
    if (!(alphas_[i] >= 0.0) || !std::isfinite(alphas_[i])) {
      std::ostringstream msg;
      msg << "alpha of passenger " << i + 1 << " must be nonnegative";
      throw MalformedInputError(msg.str());
    }
  }
}

Instance Instance::WithRegime(Regime regime) const {
  return Instance(points_, mode_, alpha_op_, alphas_, regime);
}

Instance Instance::WithAlphas(double alpha_op,
                              std::vector<double> alphas) const {
  return Instance(points_, mode_, alpha_op, std::move(alphas), regime_);
}

Route Route::SingleDropoff(std::span<const int> pickup_order) {
  std::vector<RouteEvent> events;
  events.reserve(2 * pickup_order.size());
  for (int p : pickup_order) events.push_back({EventKind::kPickup, p});
  for (int p : pickup_order) events.push_back({EventKind::kDropoff, p});
  return Route(std::move(events));
}

std::vector<int> Route::PickupOrder() const {
  std::vector<int> order;
  for (const RouteEvent& e : events_) {
    if (e.kind == EventKind::kPickup) order.push_back(e.passenger);
  }
  return order;
}

bool Route::IsSingleDropoffForm() const {
  bool seen_dropoff = false;
  for (const RouteEvent& e : events_) {
    if (e.kind == EventKind::kDropoff) {
      seen_dropoff = true;
    } else if (seen_dropoff) {
      return false;
    }
  }
  return true;
}

void ValidateRoute(const Instance& instance, const Route& route) {
  const int n = instance.num_passengers();
  std::vector<int> picked(n, 0);
  std::vector<int> dropped(n, 0);
  for (const RouteEvent& e : route.events()) {
    if (e.passenger < 0 || e.passenger >= n) {
      std::ostringstream msg;
      msg << "route references passenger " << e.passenger + 1
          << " but the instance has " << n;
      throw PreconditionError(msg.str());
    }
    if (e.kind == EventKind::kPickup) {
      if (picked[e.passenger]++ > 0) {
        throw PreconditionError("passenger " + std::to_string(e.passenger + 1) +
                                " is picked up twice");
      }
    } else {
      if (picked[e.passenger] == 0) {
        throw PreconditionError("passenger " + std::to_string(e.passenger + 1) +
                                " is dropped off before pickup");
      }
      if (dropped[e.passenger]++ > 0) {
        throw PreconditionError("passenger " + std::to_string(e.passenger + 1) +
                                " is dropped off twice");
      }
    }
  }
  for (int p = 0; p < n; ++p) {
    if (picked[p] == 0 || dropped[p] == 0) {
      throw PreconditionError("route does not serve passenger " +
                              std::to_string(p + 1));
    }
  }
  if (instance.dropoff_mode() == DropoffMode::kSingle &&
      !route.IsSingleDropoffForm()) {
    throw PreconditionError(
        "single-dropoff routes must pick up every passenger before the "
        "shared dropoff");
  }
}

namespace {

void RequirePositive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw PreconditionError(std::string(name) + " must be positive");
  }
}

void RequireCount(int n) {
  if (n < 1) throw PreconditionError("n must be at least 1");
}

// Colinear single-dropoff instance with the dropoff at the origin and
// pickups on the positive ray.
Instance RayInstance(const std::vector<double>& distances, Regime regime) {
  const int n = static_cast<int>(distances.size());
  std::vector<std::vector<double>> coords;
  for (double d : distances) coords.push_back({d});
  coords.push_back({0.0});
  return Instance(FromEuclidean(coords), DropoffMode::kSingle, 1.0,
                  std::vector<double>(n, 1.0), regime);
}

}  // namespace

Instance GenerateLowerBoundInstance(int n, double alpha_op,
                                    std::vector<double> alphas, double ell,
                                    double slack) {
  RequireCount(n);
  RequirePositive(alpha_op, "alpha_op");
  RequirePositive(ell, "ell");
  RequirePositive(slack, "slack");
  if (static_cast<int>(alphas.size()) != n) {
    throw PreconditionError("expected " + std::to_string(n) + " alphas");
  }
  // z[j] for 0-based position j; z[0] = 1.
  std::vector<double> z(n);
  double prefix = 0.0;
  for (int j = 0; j < n; ++j) {
    z[j] = 1.0 / (1.0 + prefix / alpha_op);
    prefix += alphas[j];
  }
  DistanceTable table(n + 1);
  for (int j = 0; j < n; ++j) table.Set(j, n, ell);
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      const double adjacent = z[a + 1] * ell;
      table.Set(a, b, b == a + 1 ? adjacent : adjacent * (1.0 + slack));
    }
  }
  // Shortest-path closure keeps the table metric.
  for (int k = 0; k <= n; ++k) {
    for (int a = 0; a <= n; ++a) {
      for (int b = 0; b <= n; ++b) {
        const double via = table(a, k) + table(k, b);
        if (via < table(a, b)) table.SetDirected(a, b, via);
      }
    }
  }
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      const double bound = z[a + 1] * ell;
      const bool ok = b == a + 1 ? table(a, b) == bound : table(a, b) > bound;
      if (!ok) {
        int via = n;
        for (int k = 0; k <= n; ++k) {
          if (k != a && k != b && table(a, k) + table(k, b) <= table(a, b)) {
            via = k;
            break;
          }
        }
        std::ostringstream msg;
        msg << "metric clamping collapses pickup pair (" << a + 1 << ", "
            << b + 1 << ") through point " << via + 1 << ": distance "
            << table(a, b) << " no longer exceeds " << bound;
        throw ConstructionError(msg.str());
      }
    }
  }
  table.set_metric_flag(true);
  return Instance(std::move(table), DropoffMode::kSingle, alpha_op,
                  std::move(alphas), Regime::kFinite);
}

Instance GenerateSqrtTightInstance(int n, double ell) {
  RequireCount(n);
  RequirePositive(ell, "ell");
  std::vector<double> distances(n);
  distances[0] = ell;
  for (int j = 1; j < n; ++j) {
    const double m = j + 1;  // 1-based index of this pickup
    distances[j] = (2.0 * m / (2.0 * m - 1.0)) * distances[j - 1];
  }
  return RayInstance(distances, Regime::kFinite);
}

Instance GenerateExpTightInstance(int n, double ell) {
  RequireCount(n);
  RequirePositive(ell, "ell");
  std::vector<double> distances(n);
  for (int i = 0; i < n; ++i) distances[i] = std::ldexp(ell, i);
  return RayInstance(distances, Regime::kZeroLimit);
}

Instance ReduceHamiltonianPath(const SimpleGraph& graph, double ell) {
  const int n = graph.num_vertices;
  if (n < 2) throw PreconditionError("graph needs at least two vertices");
  RequirePositive(ell, "ell");
  std::vector<char> adjacent(static_cast<size_t>(n) * n, 0);
  for (auto [u, v] : graph.edges) {
    if (u < 0 || v < 0 || u >= n || v >= n || u == v) {
      throw PreconditionError("graph edge (" + std::to_string(u + 1) + ", " +
                              std::to_string(v + 1) + ") is not simple");
    }
    adjacent[static_cast<size_t>(u) * n + v] = 1;
    adjacent[static_cast<size_t>(v) * n + u] = 1;
  }
  DistanceTable table(n + 1);
  for (int a = 0; a < n; ++a) {
    table.Set(a, n, ell);
    for (int b = a + 1; b < n; ++b) {
      table.Set(a, b, adjacent[static_cast<size_t>(a) * n + b] ? ell / n : ell);
    }
  }
  table.set_metric_flag(false);
  return Instance(std::move(table), DropoffMode::kSingle, 1.0,
                  std::vector<double>(n, 1.0), Regime::kFinite);
}

Instance ReducePathTsp(const DistanceTable& metric, double margin) {
  const int n = metric.size();
  if (n < 2) throw PreconditionError("path-TSP reduction needs n >= 2");
  RequirePositive(margin, "margin");
  const MetricReport report = ValidateMetric(metric);
  if (!report.metric_flag) {
    throw PreconditionError("path-TSP reduction needs a metric input");
  }
  double max_pair = 0.0;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) max_pair = std::max(max_pair, metric(a, b));
  }
  if (max_pair <= 0.0) {
    throw ConstructionError("path-TSP reduction of an all-zero metric");
  }
  const double big_l = n * max_pair * (1.0 + margin);
  DistanceTable table(n + 1);
  for (int a = 0; a < n; ++a) {
    table.Set(a, n, big_l);
    for (int b = a + 1; b < n; ++b) table.Set(a, b, metric(a, b));
  }
  table.set_metric_flag(true);
  return Instance(std::move(table), DropoffMode::kSingle, 1.0,
                  std::vector<double>(n, 1.0), Regime::kFinite);
}

Instance MakeLineInstance(std::span<const double> pickup_positions,
                          double dropoff_position) {
  std::vector<std::vector<double>> coords;
  for (double x : pickup_positions) coords.push_back({x});
  coords.push_back({dropoff_position});
  const int n = static_cast<int>(pickup_positions.size());
  return Instance(FromEuclidean(coords), DropoffMode::kSingle, 1.0,
                  std::vector<double>(n, 1.0), Regime::kFinite);
}

}  // namespace sirshare
