#include "sirshare/cli.h"

#include <cstdint>
#include <cstdlib>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sirshare/allocation_flow.h"
#include "sirshare/errors.h"
#include "sirshare/fair_share.h"
#include "sirshare/instance.h"
#include "sirshare/io.h"
#include "sirshare/route_search.h"
#include "sirshare/sir_check.h"
#include "sirshare/starvation.h"

namespace sirshare {

namespace {

using nlohmann::json;

struct Options {
  std::string instance_path = "-";
  bool json_output = false;
  std::string route;
  std::string beta;
  bool xc = false;
  int64_t limit = std::numeric_limits<int64_t>::max();
  int cap = kDefaultEnumerationCap;
  bool check_bounds = false;
  int m_prime = 0;
  bool oracle = false;
  // generate
  std::string kind;
  int n = 0;
  double ell = 1.0;
  double alpha_op = 1.0;
  std::string alphas;
  double slack = 0.01;
  double margin = 0.01;
  std::string edges;
  std::string positions;
  double dropoff = 0.0;
};

Tolerance ToleranceFromEnvironment() {
  const char* text = std::getenv("SIRSHARE_TOLERANCE");
  if (text == nullptr || *text == '\0') return Tolerance::Default();
  char* end = nullptr;
  const double value = std::strtod(text, &end);
  if (end == text || *end != '\0' || !(value >= 0.0)) {
    throw MalformedInputError(std::string("SIRSHARE_TOLERANCE=\"") + text +
                              "\" is not a nonnegative number");
  }
  if (value == 0.0) return Tolerance::Strict();
  Tolerance tolerance;
  tolerance.relative = value;
  return tolerance;
}

std::string Plural(int64_t count, const std::string& noun) {
  return std::to_string(count) + " " + noun + (count == 1 ? "" : "s");
}

std::string Join(const std::vector<double>& values) {
  std::string text;
  for (double x : values) {
    if (!text.empty()) text += "  ";
    text += FormatNumber(x);
  }
  return text;
}

// Pickups as 1-based integers; dropoffs as "d<i>" unless implied, as in
// FormatRoute.
json RouteJson(const Route& route) {
  json out = json::array();
  const bool single = route == Route::SingleDropoff(route.PickupOrder());
  for (const RouteEvent& e : route.events()) {
    if (e.kind == EventKind::kPickup) {
      out.push_back(e.passenger + 1);
    } else if (!single) {
      out.push_back("d" + std::to_string(e.passenger + 1));
    }
  }
  return out;
}

void Emit(std::ostream& out, const json& doc) { out << doc.dump(2) << "\n"; }

int Validate(const Options& o, std::ostream& out) {
  const Instance instance = LoadInstance(o.instance_path);
  const MetricReport report = ValidateMetric(instance.points());
  if (o.json_output) {
    json violations = json::array();
    for (const MetricViolation& v : report.violations) {
      violations.push_back({{"kind", ToString(v.kind)},
                            {"points", {v.a + 1, v.b + 1, v.c + 1}},
                            {"excess", Round12(v.excess)}});
    }
    Emit(out, {{"valid", true},
               {"n", instance.num_passengers()},
               {"dropoff_mode", ToString(instance.dropoff_mode())},
               {"regime", ToString(instance.regime())},
               {"metric_flag", instance.points().metric_flag()},
               {"violations", std::move(violations)}});
    return kExitOk;
  }
  out << "valid instance: n = " << instance.num_passengers() << ", "
      << ToString(instance.dropoff_mode()) << " dropoff, regime "
      << ToString(instance.regime()) << "\n";
  out << "metric: " << (report.metric_flag ? "yes" : "no") << " ("
      << Plural(static_cast<int64_t>(report.violations.size()), "violation") << ")\n";
  for (const MetricViolation& v : report.violations) {
    out << "  " << ToString(v.kind) << " " << v.a + 1 << " " << v.b + 1 << " "
        << v.c + 1 << " excess " << FormatNumber(v.excess) << "\n";
  }
  return kExitOk;
}

int CheckRoute(const Options& o, const Tolerance& tol, std::ostream& out) {
  const Instance instance = LoadInstance(o.instance_path);
  const Route route = ParseRoute(o.route, instance);
  const FeasibilityReport report = CheckSirFeasible(instance, route, tol);
  if (o.json_output) {
    json stages = json::array();
    for (size_t k = 0; k < report.slack.size(); ++k) {
      stages.push_back({{"stage", k + 2},
                        {"lhs", Round12(report.lhs[k])},
                        {"rhs", Round12(report.rhs[k])},
                        {"slack", Round12(report.slack[k])}});
    }
    Emit(out, {{"route", RouteJson(route)},
               {"feasible", report.feasible},
               {"first_failing_stage", report.first_failing_stage},
               {"stages", std::move(stages)}});
  } else {
    out << "route " << FormatRoute(route) << ": "
        << (report.feasible ? "SIR-feasible" : "not SIR-feasible");
    if (!report.feasible) out << " (stage " << report.first_failing_stage << " fails)";
    out << "\n";
    if (!report.slack.empty()) {
      out << std::left << std::setw(7) << "stage" << std::setw(20) << "lhs"
          << std::setw(20) << "bound" << "slack\n";
      for (size_t k = 0; k < report.slack.size(); ++k) {
        out << std::setw(7) << k + 2 << std::setw(20) << FormatNumber(report.lhs[k])
            << std::setw(20) << FormatNumber(report.rhs[k])
            << FormatNumber(report.slack[k]) << "\n";
      }
    }
  }
  return report.feasible ? kExitOk : kExitNegative;
}

int Witness(const Options& o, const Tolerance& tol, std::ostream& out) {
  const Instance instance = LoadInstance(o.instance_path);
  const Route route = ParseRoute(o.route, instance);
  CostShareTable table;
  try {
    table = WitnessScheme(instance, route, tol);
  } catch (const FeasibilityError& e) {
    if (o.json_output) {
      Emit(out, {{"route", RouteJson(route)},
                 {"feasible", false},
                 {"first_failing_stage", e.stage()}});
    } else {
      out << "no SIR witness: route " << FormatRoute(route) << " fails at stage "
          << e.stage() << "\n";
    }
    return kExitNegative;
  }
  const DisutilityTrace trace =
      ComputeDisutility(ComputeStageCosts(instance, route), table);
  if (o.json_output) {
    Emit(out, {{"route", RouteJson(route)},
               {"feasible", true},
               {"shares", LowerTriangularJson(table.rows())},
               {"disutility", DisutilityJson(trace)}});
    return kExitOk;
  }
  out << "witness shares for route " << FormatRoute(route) << "\n";
  for (int s = 0; s < table.size(); ++s) {
    out << "stage " << s + 1 << ": "
        << Join(std::vector<double>(table.rows()[s].begin(),
                                    table.rows()[s].begin() + s + 1))
        << "\n";
  }
  // Rows follow pickup order; label them with the instance's numbering.
  const std::vector<int> pickups = route.PickupOrder();
  out << "disutility by passenger, t0..tn\n";
  for (size_t i = 0; i < trace.du.size(); ++i) {
    out << "passenger " << pickups[i] + 1 << ": " << Join(trace.du[i]) << "\n";
  }
  return kExitOk;
}

int Share(const Options& o, const Tolerance& tol, std::ostream& out) {
  const Instance instance = LoadInstance(o.instance_path);
  const Route route = ParseRoute(o.route, instance);
  const int n = instance.num_passengers();
  // Both schemes are only meaningful on SIR-feasible routes; the XC formula
  // itself would happily price any route.
  const FeasibilityReport feasibility = CheckSirFeasible(instance, route, tol);
  if (!feasibility.feasible) {
    if (o.json_output) {
      Emit(out, {{"route", RouteJson(route)},
                 {"feasible", false},
                 {"first_failing_stage", feasibility.first_failing_stage}});
    } else {
      out << "route " << FormatRoute(route) << " is not SIR-feasible (stage "
          << feasibility.first_failing_stage << ")\n";
    }
    return kExitNegative;
  }
  BetaVector betas;
  CostShareTable table;
  if (o.xc) {
    betas = BetaVector::Harmonic(n);
    table = XcTable(instance, route, tol);
  } else {
    betas = BetaVector(ParseReals(o.beta));
    if (betas.size() != n - 1) {
      throw MalformedInputError("--beta needs n - 1 = " + std::to_string(n - 1) +
                                " values (beta_2..beta_n)");
    }
    table = BetaFairTable(instance, route, betas, tol);
  }
  const std::vector<LedgerStage> ledger = BuildLedger(instance, route, table, tol);
  std::optional<bool> fair;
  try {
    fair = VerifyFairnessRatios(instance, route, table, betas, tol).holds;
  } catch (const IndeterminateError&) {
  }

  if (o.json_output) {
    json stages = json::array();
    for (const LedgerStage& st : ledger) {
      stages.push_back({{"stage", st.stage},
                        {"detour", Round12(st.detour)},
                        {"incoming_fare", Round12(st.incoming_fare)},
                        {"discounts", RealsJson(st.discounts)},
                        {"ib", RealsJson(st.ib)},
                        {"tib", Round12(st.tib)},
                        {"disutility", RealsJson(st.disutility)}});
    }
    json fairness = fair ? json(*fair) : json("indeterminate");
    Emit(out, {{"route", RouteJson(route)},
               {"feasible", true},
               {"scheme", o.xc ? "xc" : "beta"},
               {"betas", RealsJson(betas.values())},
               {"shares", LowerTriangularJson(table.rows())},
               {"ledger", std::move(stages)},
               {"fair", std::move(fairness)}});
    return kExitOk;
  }
  out << (o.xc ? "XC" : "beta-fair") << " shares for route " << FormatRoute(route)
      << "\n";
  out << std::left << std::setw(7) << "stage" << std::setw(18) << "detour"
      << std::setw(18) << "fare" << std::setw(18) << "TIB" << "discounts\n";
  for (const LedgerStage& st : ledger) {
    out << std::setw(7) << st.stage << std::setw(18) << FormatNumber(st.detour)
        << std::setw(18) << FormatNumber(st.incoming_fare) << std::setw(18)
        << FormatNumber(st.tib) << Join(st.discounts) << "\n";
  }
  out << "disutility after each stage\n";
  for (const LedgerStage& st : ledger) {
    out << std::setw(7) << st.stage << Join(st.disutility) << "\n";
  }
  out << "fairness ratios: "
      << (fair ? (*fair ? "hold" : "violated") : "indeterminate") << "\n";
  return kExitOk;
}

int Routes(const Options& o, const Tolerance& tol, std::ostream& out) {
  const Instance instance = LoadInstance(o.instance_path);
  SearchOptions options;
  options.limit = o.limit;
  options.cap = o.cap;
  const SearchResult result = EnumerateSirRoutes(instance, options, tol);
  if (o.json_output) {
    json routes = json::array();
    for (const Route& r : result.routes) routes.push_back(RouteJson(r));
    json optimal = nullptr;
    if (result.optimal) {
      optimal = {{"route", RouteJson(result.optimal->route)},
                 {"distance", Round12(result.optimal->distance)}};
    }
    Emit(out, {{"total_feasible", result.total_feasible},
               {"truncated", result.truncated},
               {"routes", std::move(routes)},
               {"optimal", std::move(optimal)},
               {"stats",
                {{"nodes_expanded", result.stats.nodes_expanded},
                 {"prunes", result.stats.prunes}}}});
  } else {
    for (const Route& r : result.routes) out << FormatRoute(r) << "\n";
    if (result.truncated) out << "(listing truncated at " << o.limit << ")\n";
    out << Plural(result.total_feasible, "feasible route") << "\n";
  }
  return result.total_feasible > 0 ? kExitOk : kExitNegative;
}

int OptRoute(const Options& o, const Tolerance& tol, std::ostream& out) {
  const Instance instance = LoadInstance(o.instance_path);
  SearchStats stats;
  const std::optional<OptimalRoute> best = OptSirRoute(instance, o.cap, tol, &stats);
  if (o.json_output) {
    json doc = {{"feasible", best.has_value()},
                {"stats",
                 {{"nodes_expanded", stats.nodes_expanded}, {"prunes", stats.prunes}}}};
    if (best) {
      doc["route"] = RouteJson(best->route);
      doc["distance"] = Round12(best->distance);
    }
    Emit(out, doc);
  } else if (best) {
    out << "optimal SIR route " << FormatRoute(best->route) << ", distance "
        << FormatNumber(best->distance) << "\n";
  } else {
    out << "no SIR-feasible route\n";
  }
  return best ? kExitOk : kExitNegative;
}

int Starvation(const Options& o, const Tolerance& tol, std::ostream& out) {
  const Instance instance = LoadInstance(o.instance_path);
  Route route;
  if (!o.route.empty()) {
    route = ParseRoute(o.route, instance);
  } else {
    const std::optional<MinStarvation> best = MinRouteStarvation(instance, o.cap, tol);
    if (!best) {
      if (o.json_output) {
        Emit(out, {{"feasible_routes", 0}});
      } else {
        out << "0 feasible routes\n";
      }
      return kExitNegative;
    }
    route = best->route;
  }
  const StarvationReport report = ComputeStarvation(instance, route, tol);
  bool bounds_hold = true;
  for (const BoundCheck& b : report.bound_checks) bounds_hold = bounds_hold && b.holds;
  const bool check = o.check_bounds;
  if (o.json_output) {
    json doc = {{"route", RouteJson(route)},
                {"minimized", o.route.empty()},
                {"per_passenger", RealsJson(report.per_passenger)},
                {"route_factor", Round12(report.route_factor)},
                {"sir_feasible", report.sir_feasible}};
    if (check) {
      json bounds = json::array();
      for (const BoundCheck& b : report.bound_checks) {
        bounds.push_back(
            {{"theorem", b.theorem}, {"bound", Round12(b.bound)}, {"holds", b.holds}});
      }
      doc["bounds"] = std::move(bounds);
    }
    Emit(out, doc);
  } else {
    out << (o.route.empty() ? "least-starving SIR route " : "route ")
        << FormatRoute(route) << (report.sir_feasible ? "" : " (not SIR-feasible)")
        << "\n";
    out << std::left << std::setw(11) << "passenger" << "factor\n";
    const std::vector<int> order = route.PickupOrder();
    for (size_t i = 0; i < order.size(); ++i) {
      out << std::setw(11) << order[i] + 1 << FormatNumber(report.per_passenger[i])
          << "\n";
    }
    out << "route factor " << FormatNumber(report.route_factor) << "\n";
    if (check) {
      if (report.bound_checks.empty()) out << "no applicable bound\n";
      for (const BoundCheck& b : report.bound_checks) {
        out << b.theorem << " bound " << FormatNumber(b.bound) << ": "
            << (b.holds ? "holds" : "violated") << "\n";
      }
    }
  }
  return check && !bounds_hold ? kExitNegative : kExitOk;
}

int Allocate(const Options& o, const Tolerance& tol, std::ostream& out,
             std::ostream& err) {
  const Instance instance = LoadInstance(o.instance_path);
  Allocation allocation;
  json doc;
  if (o.m_prime > 0) {
    const FlowNetwork network = BuildNetwork(instance, o.m_prime);
    const FlowResult flow = MinCostMaxFlow(network);
    allocation = ExtractAllocation(network, flow);
    doc = AllocationJson(allocation);
    doc["m_prime"] = o.m_prime;
    doc["flow_cost"] = Round12(flow.cost);
    doc["big_l"] = Round12(network.big_l);
  } else {
    allocation = OptimalAllocation(instance, tol);
    doc = AllocationJson(allocation);
    doc["m_prime"] = allocation.vehicles.size();
  }
  bool agrees = true;
  if (o.oracle) {
    const Allocation reference = BruteForceAllocation(instance, tol);
    // A fixed m' may legitimately cost more than the unconstrained optimum.
    agrees = o.m_prime > 0
                 ? tol.LessOrEqual(reference.total_miles, allocation.total_miles)
                 : tol.Equal(reference.total_miles, allocation.total_miles);
    doc["oracle"] = AllocationJson(reference);
    doc["oracle"]["agrees"] = agrees;
  }
  if (o.json_output) {
    Emit(out, doc);
  } else {
    out << "vehicles:";
    for (const std::vector<int>& vehicle : allocation.vehicles) {
      out << " [";
      for (size_t k = 0; k < vehicle.size(); ++k) out << (k ? "," : "") << vehicle[k] + 1;
      out << "]";
    }
    out << "\ntotal miles " << FormatNumber(allocation.total_miles) << "\n";
    if (o.oracle) {
      out << "brute force " << FormatNumber(doc["oracle"]["total_miles"].get<double>())
          << (agrees ? " (agrees)" : " (DISAGREES)") << "\n";
    }
  }
  if (!agrees) {
    err << "error: flow allocation disagrees with the brute-force oracle\n";
    return kExitError;
  }
  return kExitOk;
}

std::vector<double> AlphasOrDefault(const Options& o, int n) {
  if (o.alphas.empty()) return std::vector<double>(n, o.alpha_op);
  std::vector<double> alphas = ParseReals(o.alphas);
  if (static_cast<int>(alphas.size()) != n) {
    throw MalformedInputError("--alphas needs " + std::to_string(n) + " values");
  }
  return alphas;
}

SimpleGraph ParseGraph(int vertices, const std::string& text) {
  SimpleGraph graph;
  graph.num_vertices = vertices;
  std::stringstream stream(text);
  std::string token;
  while (std::getline(stream, token, ',')) {
    if (token.empty()) continue;
    const size_t dash = token.find('-');
    int u = 0;
    int v = 0;
    try {
      if (dash == std::string::npos) throw std::invalid_argument("no dash");
      u = std::stoi(token.substr(0, dash));
      v = std::stoi(token.substr(dash + 1));
    } catch (const std::exception&) {
      throw MalformedInputError("edge \"" + token + "\" is not of the form u-v");
    }
    if (u < 1 || v < 1 || u > vertices || v > vertices) {
      throw MalformedInputError("edge \"" + token + "\" names a vertex outside 1.." +
                                std::to_string(vertices));
    }
    graph.edges.push_back({u - 1, v - 1});
  }
  return graph;
}

int Generate(const Options& o, std::ostream& out) {
  auto need_n = [&]() {
    if (o.n < 1) throw MalformedInputError("generate " + o.kind + " needs --n >= 1");
    return o.n;
  };
  std::optional<Instance> instance;
  if (o.kind == "lower-bound") {
    const int n = need_n();
    instance = GenerateLowerBoundInstance(n, o.alpha_op, AlphasOrDefault(o, n), o.ell,
                                          o.slack);
  } else if (o.kind == "sqrt-tight") {
    instance = GenerateSqrtTightInstance(need_n(), o.ell);
  } else if (o.kind == "exp-tight") {
    instance = GenerateExpTightInstance(need_n(), o.ell);
  } else if (o.kind == "hampath") {
    instance = ReduceHamiltonianPath(ParseGraph(need_n(), o.edges), o.ell);
  } else if (o.kind == "path-tsp") {
    const std::vector<double> positions = ParseReals(o.positions);
    std::vector<std::vector<double>> coords;
    for (double x : positions) coords.push_back({x});
    instance = ReducePathTsp(FromEuclidean(coords), o.margin);
  } else if (o.kind == "line") {
    const std::vector<double> positions = ParseReals(o.positions);
    instance = MakeLineInstance(positions, o.dropoff);
  } else {
    throw MalformedInputError("unknown generator \"" + o.kind + "\"");
  }
  Emit(out, InstanceToJson(*instance));
  return kExitOk;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cost sharing and route feasibility for shared rides", "sirshare"};
  app.require_subcommand(1);
  Options o;
  app.add_flag("--json", o.json_output, "Machine-readable output");

  auto instance_arg = [&](CLI::App* sub) {
    sub->add_option("instance", o.instance_path, "Instance JSON file, - for stdin");
    sub->add_flag("--json", o.json_output, "Machine-readable output");
  };
  auto cap_arg = [&](CLI::App* sub) {
    sub->add_option("--cap-override", o.cap, "Largest n for exhaustive search")
        ->check(CLI::PositiveNumber);
  };

  CLI::App* validate = app.add_subcommand("validate", "Parse an instance and check its metric");
  instance_arg(validate);

  CLI::App* check = app.add_subcommand("check-route", "Decide SIR-feasibility of a route");
  instance_arg(check);
  check->add_option("--route", o.route, "1-based pickups, d<i> for dropoffs")->required();

  CLI::App* witness = app.add_subcommand("witness", "Budget-balanced SIR witness shares");
  instance_arg(witness);
  witness->add_option("--route", o.route, "1-based pickups, d<i> for dropoffs")->required();

  CLI::App* share = app.add_subcommand("share", "Sequentially fair shares and ledger");
  instance_arg(share);
  share->add_option("--route", o.route, "1-based pickups")->required();
  CLI::Option* beta = share->add_option("--beta", o.beta, "beta_2..beta_n, comma separated");
  CLI::Option* xc = share->add_flag("--xc", o.xc, "Equal split with detour compensation");
  beta->excludes(xc);
  share->callback([&]() {
    if (!o.xc && o.beta.empty()) throw CLI::ValidationError("share needs --beta or --xc");
  });

  CLI::App* routes = app.add_subcommand("routes", "Enumerate SIR-feasible routes");
  instance_arg(routes);
  routes->add_option("--limit", o.limit, "List at most this many routes")
      ->check(CLI::NonNegativeNumber);
  cap_arg(routes);

  CLI::App* opt = app.add_subcommand("opt-route", "Shortest SIR-feasible route");
  instance_arg(opt);
  cap_arg(opt);

  CLI::App* starvation = app.add_subcommand("starvation", "Starvation factors");
  instance_arg(starvation);
  starvation->add_option("--route", o.route, "Route to evaluate; default is the best one");
  starvation->add_flag("--check-bounds", o.check_bounds, "Verify the applicable upper bound");
  cap_arg(starvation);

  CLI::App* allocate = app.add_subcommand("allocate", "Optimal allocation to vehicles");
  instance_arg(allocate);
  allocate->add_option("--m-prime", o.m_prime, "Fix the number of vehicles")
      ->check(CLI::PositiveNumber);
  allocate->add_flag("--oracle", o.oracle, "Compare with exhaustive search");

  CLI::App* generate = app.add_subcommand("generate", "Write a constructed instance");
  generate->add_option("kind", o.kind,
                       "lower-bound, sqrt-tight, exp-tight, hampath, path-tsp or line")
      ->required();
  generate->add_flag("--json", o.json_output, "Accepted for symmetry; output is JSON");
  generate->add_option("--n", o.n, "Passengers, or graph vertices for hampath");
  generate->add_option("--ell", o.ell, "Length scale");
  generate->add_option("--alpha-op", o.alpha_op, "Operator price per unit distance");
  generate->add_option("--alphas", o.alphas, "Passenger detour sensitivities");
  generate->add_option("--slack", o.slack, "Gap for non-adjacent pickups");
  generate->add_option("--margin", o.margin, "Margin on the path-TSP dropoff distance");
  generate->add_option("--edges", o.edges, "hampath edges as u-v,u-v");
  generate->add_option("--positions", o.positions, "Pickup positions on a line");
  generate->add_option("--dropoff", o.dropoff, "Dropoff position for line");

  std::vector<const char*> argv{"sirshare"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }

  try {
    const Tolerance tol = ToleranceFromEnvironment();
    if (validate->parsed()) return Validate(o, out);
    if (check->parsed()) return CheckRoute(o, tol, out);
    if (witness->parsed()) return Witness(o, tol, out);
    if (share->parsed()) return Share(o, tol, out);
    if (routes->parsed()) return Routes(o, tol, out);
    if (opt->parsed()) return OptRoute(o, tol, out);
    if (starvation->parsed()) return Starvation(o, tol, out);
    if (allocate->parsed()) return Allocate(o, tol, out, err);
    if (generate->parsed()) return Generate(o, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

}  // namespace sirshare
