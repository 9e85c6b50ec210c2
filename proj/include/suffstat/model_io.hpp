#pragma once

#include <map>
#include <optional>
#include <string>

#include "suffstat/family.hpp"
#include "suffstat/source_coding.hpp"
#include "suffstat/sufficiency.hpp"

namespace suffstat {

// A model file is either a parametric family {theta, prior, axes, cond} or a
// plain joint {axes, probs}, optionally carrying source-coding roles
// (x_axis/y_axis/z_axis, distortion, reproduction) and, for families, a
// "hidden" block describing an HCI decomposition.
struct loaded_model {
  std::optional<param_family> family;
  std::optional<hci_model> hci;
  std::optional<joint_dist> plain;
  std::optional<source_model> source;
};

struct loaded_statistic {
  std::string axis;
  std::map<std::string, std::string> raw;
};

loaded_model load_model_file(const std::string& path);
loaded_statistic load_statistic_file(const std::string& path);

// Binds the file's map to a concrete axis alphabet. MISSING_SYMBOL if any
// axis symbol has no entry.
statistic resolve_statistic(const loaded_statistic& s, const alphabet& axis);

}  // namespace suffstat
