#include "ppp/report.hpp"

#include <cmath>

namespace ppp {

Json json_of(const CandidateSolution& c) {
  Json j;
  j["x"] = Json::array();
  for (std::uint8_t b : c.x) j["x"].push_back(static_cast<int>(b));
  j["residual"] = c.residual;
  j["exact"] = c.exact;
  j["cardinality"] = c.cardinality;
  return j;
}

Json json_of(const PumpTrace& t, bool reproducible) {
  Json j;
  j["gamma"] = t.gamma;
  j["n"] = t.n;
  j["stop"] = to_string(t.stop);
  j["truncated"] = t.truncated();
  j["steps"] = Json::array();
  for (const PumpStep& s : t.steps) {
    Json step;
    step["step"] = s.index;
    step["q_before"] = s.q_before;
    step["q_after"] = s.q_after;
    step["big_omega_before"] = s.big_omega_before;
    step["big_omega_after"] = s.big_omega_after;
    step["rank"] = s.rank;
    step["kernel_dim"] = s.kernel_dim;
    step["max_prime_bits"] = s.max_prime_bits;
    step["ratio_lower"] = s.ratio_lower;
    step["ratio_upper"] = s.ratio_upper;
    step["seconds"] = reproducible ? 0.0 : s.seconds;
    j["steps"].push_back(std::move(step));
  }
  return j;
}

Json json_of(const SolveReport& r, bool reproducible) {
  Json j;
  j["status"] = to_string(r.status);
  j["solution"] = r.solution ? json_of(*r.solution) : Json(nullptr);
  j["kernel_dimension"] = r.kernel_dimension;
  j["eigen_spectrum_head"] = r.eigen_spectrum_head;
  j["candidates_tested"] = r.candidates_tested;
  j["cardinality_used"] =
      r.cardinality_used ? Json(*r.cardinality_used) : Json(nullptr);
  j["pump_trace"] =
      r.pump_trace ? json_of(*r.pump_trace, reproducible) : Json(nullptr);
  if (!r.error_detail.empty()) j["error_detail"] = r.error_detail;
  return j;
}

Json json_of(const std::vector<OmegaSeriesPoint>& pts) {
  Json arr = Json::array();
  for (const OmegaSeriesPoint& p : pts) {
    Json j;
    j["q"] = p.q;
    j["gamma"] = p.gamma;
    j["omega_big"] = p.omega_big;
    j["omega_little"] = p.omega_little;
    if (std::isnan(p.prediction)) {
      j["prediction"] = Json(nullptr);
      j["ratio_big"] = Json(nullptr);
      j["ratio_little"] = Json(nullptr);
    } else {
      j["prediction"] = p.prediction;
      j["ratio_big"] = p.ratio_big;
      j["ratio_little"] = p.ratio_little;
    }
    arr.push_back(std::move(j));
  }
  return arr;
}

Json RunReport::to_json() const {
  Json j;
  j["command"] = command;
  j["version"] = kVersion;
  j["config"] = config;
  j["warnings"] = warnings;
  j["result"] = result;
  j["timing"] = Json{{"total_seconds", reproducible ? 0.0 : total_seconds}};
  return j;
}

}  // namespace ppp
