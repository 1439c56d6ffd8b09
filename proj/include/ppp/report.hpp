#pragma once

#include <json.hpp>

#include <string>
#include <vector>

#include "ppp/matrix.hpp"
#include "ppp/pump.hpp"
#include "ppp/solver.hpp"
#include "ppp/stats.hpp"

namespace ppp {

using Json = nlohmann::ordered_json;

inline constexpr char kVersion[] = "0.1.0";

Json json_of(const CandidateSolution& c);
Json json_of(const PumpTrace& t, bool reproducible);
Json json_of(const SolveReport& r, bool reproducible);
Json json_of(const std::vector<OmegaSeriesPoint>& pts);

/// Top-level CLI report: command, effective config, warnings, result payload
/// and timing. With reproducible = true all wall-clock fields are zeroed so
/// identical inputs give byte-identical reports.
struct RunReport {
  std::string command;
  Json config = Json::object();
  std::vector<std::string> warnings;
  Json result = Json::object();
  double total_seconds = 0.0;
  bool reproducible = false;

  Json to_json() const;
};

}  // namespace ppp
