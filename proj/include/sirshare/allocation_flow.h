#ifndef SIRSHARE_ALLOCATION_FLOW_H_
#define SIRSHARE_ALLOCATION_FLOW_H_

#include <vector>

#include "sirshare/instance.h"
#include "sirshare/numeric.h"

// Allocation of passengers, picked up in index order, to uncapacitated
// vehicles that all end at the shared dropoff. A fixed number m' of vehicles
// is a min-cost max-flow on a DAG; the optimum sweeps every m'.

namespace sirshare {

struct FlowEdge {
  int tail;
  int head;
  double cost;
  int capacity;
};

// Node layout: source 0, passenger u entry 1 + 2u and exit 2 + 2u,
// dropoff 2n + 1, sink 2n + 2.
struct FlowNetwork {
  int num_passengers = 0;
  int m_prime = 0;
  double big_l = 0.0;
  std::vector<FlowEdge> edges;

  int num_nodes() const { return 2 * num_passengers + 3; }
  int source() const { return 0; }
  int entry(int passenger) const { return 1 + 2 * passenger; }
  int exit(int passenger) const { return 2 + 2 * passenger; }
  int dropoff() const { return 2 * num_passengers + 1; }
  int sink() const { return 2 * num_passengers + 2; }
};

struct FlowResult {
  std::vector<int> flow;  // per edge of the network
  int value = 0;
  double cost = 0.0;
  bool zero_flow = false;  // sink unreachable from the source
};

struct Allocation {
  // 0-based passenger labels, each vehicle increasing, vehicles ordered by
  // their first passenger.
  std::vector<std::vector<int>> vehicles;
  double total_miles = 0.0;
};

// Throws UnsupportedModeError for multi-dropoff instances and
// PreconditionError unless 1 <= m_prime <= n. big_l is three times the
// largest distance among the pickups and the dropoff.
FlowNetwork BuildNetwork(const Instance& instance, int m_prime);

// Successive shortest paths. Potentials start from one relaxation pass in
// topological order, so the negative chaining edges need no Bellman-Ford.
// Throws PreconditionError if the network has a directed cycle.
FlowResult MinCostMaxFlow(const FlowNetwork& network);

// Splits the flow into vehicle paths. Throws SolverError unless there are
// exactly m' unit paths from the source to the dropoff, vertex-disjoint and
// jointly entering every passenger once.
Allocation ExtractAllocation(const FlowNetwork& network, const FlowResult& flow);

// Sum over vehicles of the pickup path plus the last leg to the dropoff.
double VehicleMiles(const Instance& instance,
                    const std::vector<std::vector<int>>& vehicles);

// Best allocation over m' = 1..n. Ties go to fewer vehicles, then the
// lexicographically smaller vehicle list.
Allocation OptimalAllocation(const Instance& instance,
                             const Tolerance& tolerance = Tolerance::Default());

inline constexpr int kBruteForceAllocationCap = 9;

// Exhaustive search over all set partitions (restricted growth strings)
// with the same tie-break. Throws SizeError above the cap.
Allocation BruteForceAllocation(const Instance& instance,
                                const Tolerance& tolerance = Tolerance::Default());

}  // namespace sirshare

#endif  // SIRSHARE_ALLOCATION_FLOW_H_
