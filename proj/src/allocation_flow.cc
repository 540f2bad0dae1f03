#include "sirshare/allocation_flow.h"

#include <algorithm>
#include <functional>
#include <limits>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "sirshare/errors.h"

namespace sirshare {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void RequireSingle(const Instance& instance) {
  if (instance.dropoff_mode() != DropoffMode::kSingle) {
    throw UnsupportedModeError("allocation needs a single shared dropoff");
  }
}

// Kahn's algorithm with the smallest ready node first, for determinism.
std::vector<int> TopologicalOrder(const FlowNetwork& network) {
  const int v = network.num_nodes();
  std::vector<int> indegree(v, 0);
  std::vector<std::vector<int>> out(v);
  for (const FlowEdge& e : network.edges) {
    out[e.tail].push_back(e.head);
    ++indegree[e.head];
  }
  std::priority_queue<int, std::vector<int>, std::greater<>> ready;
  for (int i = 0; i < v; ++i) {
    if (indegree[i] == 0) ready.push(i);
  }
  std::vector<int> order;
  while (!ready.empty()) {
    const int node = ready.top();
    ready.pop();
    order.push_back(node);
    for (int next : out[node]) {
      if (--indegree[next] == 0) ready.push(next);
    }
  }
  if (static_cast<int>(order.size()) != v) {
    throw PreconditionError("flow network contains a directed cycle");
  }
  return order;
}

struct Arc {
  int head;
  int residual;
  double cost;
  int reverse;   // position of the paired arc in graph[head]
  int edge;      // index into network.edges
  bool forward;
};

bool LexLess(const std::vector<std::vector<int>>& a,
             const std::vector<std::vector<int>>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// True when `candidate` should replace `best` under the allocation tie-break.
bool Better(const Allocation& candidate, const Allocation& best,
            const Tolerance& tolerance) {
  const double slack = tolerance.Allowance(candidate.total_miles, best.total_miles);
  if (candidate.total_miles < best.total_miles - slack) return true;
  if (candidate.total_miles > best.total_miles + slack) return false;
  if (candidate.vehicles.size() != best.vehicles.size()) {
    return candidate.vehicles.size() < best.vehicles.size();
  }
  return LexLess(candidate.vehicles, best.vehicles);
}

}  // namespace

FlowNetwork BuildNetwork(const Instance& instance, int m_prime) {
  RequireSingle(instance);
  const int n = instance.num_passengers();
  if (m_prime < 1 || m_prime > n) {
    throw PreconditionError("m' = " + std::to_string(m_prime) +
                            " outside 1.." + std::to_string(n));
  }
  const DistanceTable& t = instance.points();
  double max_distance = 0.0;
  for (int a = 0; a <= n; ++a) {
    for (int b = 0; b <= n; ++b) max_distance = std::max(max_distance, t(a, b));
  }

  FlowNetwork network;
  network.num_passengers = n;
  network.m_prime = m_prime;
  network.big_l = 3.0 * max_distance;
  const int dropoff = instance.dropoff_point(0);
  for (int u = 0; u < n; ++u) {
    network.edges.push_back({network.source(), network.entry(u), 0.0, 1});
    network.edges.push_back({network.entry(u), network.exit(u), 0.0, 1});
    network.edges.push_back({network.exit(u), network.dropoff(), t(u, dropoff), 1});
    for (int v = u + 1; v < n; ++v) {
      network.edges.push_back(
          {network.exit(u), network.entry(v), t(u, v) - network.big_l, 1});
    }
  }
  network.edges.push_back({network.dropoff(), network.sink(), 0.0, m_prime});
  return network;
}

FlowResult MinCostMaxFlow(const FlowNetwork& network) {
  const int v = network.num_nodes();
  const std::vector<int> topo = TopologicalOrder(network);

  std::vector<std::vector<Arc>> graph(v);
  for (size_t i = 0; i < network.edges.size(); ++i) {
    const FlowEdge& e = network.edges[i];
    const int at_tail = static_cast<int>(graph[e.tail].size());
    const int at_head = static_cast<int>(graph[e.head].size());
    graph[e.tail].push_back(
        {e.head, e.capacity, e.cost, at_head, static_cast<int>(i), true});
    graph[e.head].push_back(
        {e.tail, 0, -e.cost, at_tail, static_cast<int>(i), false});
  }

  std::vector<double> potential(v, kInf);
  potential[network.source()] = 0.0;
  for (int node : topo) {
    if (potential[node] == kInf) continue;
    for (const Arc& arc : graph[node]) {
      if (arc.forward && arc.residual > 0) {
        potential[arc.head] =
            std::min(potential[arc.head], potential[node] + arc.cost);
      }
    }
  }
  // Nodes the source never reaches stay out of every augmenting path.
  for (double& p : potential) {
    if (p == kInf) p = 0.0;
  }

  FlowResult result;
  result.flow.assign(network.edges.size(), 0);
  while (true) {
    std::vector<double> dist(v, kInf);
    std::vector<int> parent_node(v, -1);
    std::vector<int> parent_arc(v, -1);
    using Entry = std::pair<double, int>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
    dist[network.source()] = 0.0;
    queue.push({0.0, network.source()});
    while (!queue.empty()) {
      const auto [d, node] = queue.top();
      queue.pop();
      if (d > dist[node]) continue;
      for (int k = 0; k < static_cast<int>(graph[node].size()); ++k) {
        const Arc& arc = graph[node][k];
        if (arc.residual <= 0) continue;
        // Rounding can leave a reduced cost a hair below zero.
        const double reduced =
            std::max(0.0, arc.cost + potential[node] - potential[arc.head]);
        if (d + reduced < dist[arc.head]) {
          dist[arc.head] = d + reduced;
          parent_node[arc.head] = node;
          parent_arc[arc.head] = k;
          queue.push({dist[arc.head], arc.head});
        }
      }
    }
    if (dist[network.sink()] == kInf) break;
    for (int node = 0; node < v; ++node) {
      if (dist[node] < kInf) potential[node] += dist[node];
    }
    int push = std::numeric_limits<int>::max();
    for (int node = network.sink(); node != network.source();
         node = parent_node[node]) {
      push = std::min(push, graph[parent_node[node]][parent_arc[node]].residual);
    }
    for (int node = network.sink(); node != network.source();
         node = parent_node[node]) {
      Arc& arc = graph[parent_node[node]][parent_arc[node]];
      arc.residual -= push;
      graph[node][arc.reverse].residual += push;
      result.flow[arc.edge] += arc.forward ? push : -push;
    }
    result.value += push;
  }

  for (size_t i = 0; i < network.edges.size(); ++i) {
    result.cost += result.flow[i] * network.edges[i].cost;
  }
  result.zero_flow = result.value == 0;
  return result;
}

Allocation ExtractAllocation(const FlowNetwork& network, const FlowResult& flow) {
  const int n = network.num_passengers;
  if (flow.value != network.m_prime) {
    throw SolverError("flow value " + std::to_string(flow.value) +
                      " differs from m' = " + std::to_string(network.m_prime));
  }
  std::vector<std::vector<int>> carried(network.num_nodes());
  std::vector<int> inflow(network.num_nodes(), 0);
  for (size_t i = 0; i < network.edges.size(); ++i) {
    const int f = flow.flow[i];
    if (f < 0 || f > network.edges[i].capacity) {
      throw SolverError("edge flow outside its capacity");
    }
    if (f == 0) continue;
    inflow[network.edges[i].head] += f;
    for (int k = 0; k < f; ++k) carried[network.edges[i].tail].push_back(network.edges[i].head);
  }
  for (int u = 0; u < n; ++u) {
    if (inflow[network.entry(u)] != 1) {
      throw SolverError("passenger " + std::to_string(u + 1) + " receives " +
                        std::to_string(inflow[network.entry(u)]) +
                        " units of flow instead of one");
    }
  }

  Allocation allocation;
  std::sort(carried[network.source()].begin(), carried[network.source()].end());
  for (int start : carried[network.source()]) {
    std::vector<int> vehicle;
    int node = start;
    while (node != network.dropoff()) {
      if (node == network.sink() || node == network.source() || node % 2 == 0) {
        throw SolverError("flow path leaves the passenger chain");
      }
      const int passenger = (node - 1) / 2;
      vehicle.push_back(passenger);
      const std::vector<int>& through = carried[network.entry(passenger)];
      if (through.size() != 1 || through[0] != network.exit(passenger)) {
        throw SolverError("flow path does not pass through passenger " +
                          std::to_string(passenger + 1));
      }
      const std::vector<int>& next = carried[network.exit(passenger)];
      if (next.size() != 1) throw SolverError("flow splits at a passenger exit");
      node = next[0];
    }
    allocation.vehicles.push_back(std::move(vehicle));
  }
  if (static_cast<int>(allocation.vehicles.size()) != network.m_prime) {
    throw SolverError("flow does not decompose into m' paths");
  }
  std::sort(allocation.vehicles.begin(), allocation.vehicles.end());
  allocation.total_miles = flow.cost + (n - network.m_prime) * network.big_l;
  return allocation;
}

double VehicleMiles(const Instance& instance,
                    const std::vector<std::vector<int>>& vehicles) {
  const DistanceTable& t = instance.points();
  const int dropoff = instance.dropoff_point(0);
  double total = 0.0;
  for (const std::vector<int>& vehicle : vehicles) {
    if (vehicle.empty()) continue;
    for (size_t k = 1; k < vehicle.size(); ++k) total += t(vehicle[k - 1], vehicle[k]);
    total += t(vehicle.back(), dropoff);
  }
  return total;
}

Allocation OptimalAllocation(const Instance& instance, const Tolerance& tolerance) {
  RequireSingle(instance);
  const int n = instance.num_passengers();
  if (n == 0) return {};
  Allocation best;
  bool have = false;
  for (int m_prime = 1; m_prime <= n; ++m_prime) {
    const FlowNetwork network = BuildNetwork(instance, m_prime);
    Allocation candidate = ExtractAllocation(network, MinCostMaxFlow(network));
    if (!have || Better(candidate, best, tolerance)) {
      best = std::move(candidate);
      have = true;
    }
  }
  return best;
}

Allocation BruteForceAllocation(const Instance& instance, const Tolerance& tolerance) {
  RequireSingle(instance);
  const int n = instance.num_passengers();
  if (n > kBruteForceAllocationCap) {
    throw SizeError("brute-force allocation refuses n = " + std::to_string(n) +
                    " above " + std::to_string(kBruteForceAllocationCap));
  }
  if (n == 0) return {};
  // Restricted growth string: label[0] = 0, label[i] <= 1 + max(label[<i]).
  std::vector<int> label(n, 0);
  Allocation best;
  bool have = false;
  while (true) {
    const int blocks = 1 + *std::max_element(label.begin(), label.end());
    Allocation candidate;
    candidate.vehicles.assign(blocks, {});
    for (int p = 0; p < n; ++p) candidate.vehicles[label[p]].push_back(p);
    candidate.total_miles = VehicleMiles(instance, candidate.vehicles);
    if (!have || Better(candidate, best, tolerance)) {
      best = std::move(candidate);
      have = true;
    }

    int i = n - 1;
    for (; i > 0; --i) {
      const int prefix_max = *std::max_element(label.begin(), label.begin() + i);
      if (label[i] <= prefix_max) break;
    }
    if (i == 0) break;
    ++label[i];
    std::fill(label.begin() + i + 1, label.end(), 0);
  }
  return best;
}

}  // namespace sirshare
