#pragma once

#include <string>

#include "cargohitch/graph.hpp"
#include "cargohitch/model.hpp"
#include "cargohitch/solve.hpp"

namespace testing_support {

inline std::string data_path(const std::string& name) { return std::string(CARGOHITCH_TEST_DATA) + "/" + name; }

inline cargohitch::Instance fig5() { return cargohitch::load_instance(data_path("fig5.json")); }

inline cargohitch::Instance tiny(std::uint64_t seed) {
  return cargohitch::generate_instance(cargohitch::preset("tiny-oracle"), seed);
}

// Exact settings for small instances: no gap tolerance, generous limits,
// reproducible output.
inline cargohitch::SolveConfig exact_config() {
  cargohitch::SolveConfig c;
  c.time_limit = 120.0;
  c.branch_reserve = 20.0;
  c.epsilon = 1e-9;
  c.record_timing = false;
  return c;
}

}  // namespace testing_support
