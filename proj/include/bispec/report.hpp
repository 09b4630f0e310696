#pragma once

// Structured results of theorem-level verifications and their JSON / CSV
// serialization. Every report row carries its grid provenance (n, R, ell).

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bispec/core.hpp"

namespace bispec {

struct CheckReport {
  std::string name;
  bool hypothesis_met = true;
  bool passed = false;
  double measured = 0.0;
  double bound = 0.0;
  double margin = 0.0;  // bound - measured
  std::optional<double> value_R;   // R-doubling trend, base radius
  std::optional<double> value_2R;  // R-doubling trend, doubled radius
  int n = 0;
  double R = 0.0;
  int ell = 0;
  std::string notes;
};

nlohmann::json to_json(const CheckReport& r);

// Shortest round-trip decimal form (the form nlohmann::json also emits).
std::string format_double(double v);

// One RFC-4180 CSV line from already-formatted fields (quotes fields that
// need quoting, appends CRLF).
std::string csv_row(const std::vector<std::string>& fields);

}  // namespace bispec
