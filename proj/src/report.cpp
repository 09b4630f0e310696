#include "bispec/report.hpp"

#include <charconv>

namespace bispec {

nlohmann::json to_json(const CheckReport& r) {
  nlohmann::json j;
  j["name"] = r.name;
  j["hypothesis_met"] = r.hypothesis_met;
  j["passed"] = r.passed;
  j["measured"] = r.measured;
  j["bound"] = r.bound;
  j["margin"] = r.margin;
  if (r.value_R) j["value_R"] = *r.value_R;
  if (r.value_2R) j["value_2R"] = *r.value_2R;
  j["n"] = r.n;
  j["R"] = r.R;
  j["ell"] = r.ell;
  if (!r.notes.empty()) j["notes"] = r.notes;
  return j;
}

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

std::string csv_row(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    const std::string& f = fields[i];
    const bool needs_quote = f.find_first_of(",\"\r\n") != std::string::npos;
    if (needs_quote) {
      out += '"';
      for (char c : f) {
        if (c == '"') out += '"';
        out += c;
      }
      out += '"';
    } else {
      out += f;
    }
  }
  out += "\r\n";
  return out;
}

}  // namespace bispec
