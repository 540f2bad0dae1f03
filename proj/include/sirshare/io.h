#ifndef SIRSHARE_IO_H_
#define SIRSHARE_IO_H_

#include <istream>
#include <string>
#include <vector>

#include "json.hpp"
#include "sirshare/allocation_flow.h"
#include "sirshare/instance.h"
#include "sirshare/sir_check.h"

// JSON instance files and report serialization. Everything user-facing is
// 1-based; the library is 0-based underneath.

namespace sirshare {

// Twelve significant digits, the precision of every reported float.
double Round12(double value);
std::string FormatNumber(double value);

// Schema checks with one-line messages; throws MalformedInputError.
// Triangle violations are accepted when metric_flag is false or absent,
// everything else a distance table must satisfy is enforced.
Instance InstanceFromJson(const nlohmann::json& doc);
nlohmann::json InstanceToJson(const Instance& instance);

Instance ReadInstance(std::istream& in, const std::string& source_name);
// "-" reads standard input.
Instance LoadInstance(const std::string& path);

// Comma-separated 1-based pickups ("3,1,2"); multi-dropoff routes
// interleave dropoff tokens ("1,2,d1,d2"). Throws MalformedInputError on
// bad tokens and PreconditionError if the route does not serve everyone.
Route ParseRoute(const std::string& text, const Instance& instance);
std::string FormatRoute(const Route& route);

// Comma-separated reals, e.g. "0.5,0.25".
std::vector<double> ParseReals(const std::string& text);

// rows[s][i] as 1-based lower-triangular rows, rounded.
nlohmann::json LowerTriangularJson(const std::vector<std::vector<double>>& rows);
nlohmann::json DisutilityJson(const DisutilityTrace& trace);
nlohmann::json AllocationJson(const Allocation& allocation);
nlohmann::json RealsJson(const std::vector<double>& values);

}  // namespace sirshare

#endif  // SIRSHARE_IO_H_
