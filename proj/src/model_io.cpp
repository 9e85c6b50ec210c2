#include "suffstat/model_io.hpp"

#include <fstream>

#include "json.hpp"

namespace suffstat {

namespace {

using nlohmann::json;

json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("MODEL_ERROR", "cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    fail("MODEL_ERROR", path + ": " + e.what());
  }
  if (!j.is_object()) fail("MODEL_ERROR", path + ": top level must be an object");
  return j;
}

std::vector<std::string> string_list(const json& j, const std::string& what) {
  if (!j.is_array()) fail("MODEL_ERROR", what + " must be an array of strings");
  std::vector<std::string> out;
  for (const auto& e : j) {
    if (!e.is_string()) fail("MODEL_ERROR", what + " must hold strings only");
    out.push_back(e.get<std::string>());
  }
  return out;
}

std::vector<alphabet> parse_axes(const json& j) {
  if (!j.is_array() || j.empty())
    fail("MODEL_ERROR", "axes must be a nonempty array");
  std::vector<alphabet> axes;
  for (const auto& a : j) {
    if (!a.is_object() || !a.contains("name") || !a.contains("symbols"))
      fail("MODEL_ERROR", "each axis needs name and symbols");
    axes.push_back(
        alphabet{a["name"].get<std::string>(), string_list(a["symbols"], "symbols")});
  }
  return axes;
}

// Nested arrays, outer dimension first; ragged or misshaped input is rejected.
void flatten_numbers(const json& j, const std::vector<std::size_t>& dims,
                     std::size_t level, std::vector<double>& out,
                     const std::string& what) {
  if (level == dims.size()) {
    if (!j.is_number()) fail("MODEL_ERROR", what + ": expected a number");
    out.push_back(j.get<double>());
    return;
  }
  if (!j.is_array() || j.size() != dims[level])
    fail("MODEL_ERROR", what + ": expected an array of length " +
                            std::to_string(dims[level]));
  for (const auto& e : j) flatten_numbers(e, dims, level + 1, out, what);
}

std::vector<double> numbers(const json& j, const std::vector<std::size_t>& dims,
                            const std::string& what) {
  std::vector<double> out;
  std::size_t total = 1;
  for (std::size_t d : dims) total *= d;
  out.reserve(total);
  flatten_numbers(j, dims, 0, out, what);
  return out;
}

}  // namespace

loaded_model load_model_file(const std::string& path) {
  const json j = parse_file(path);
  if (!j.contains("axes")) fail("MODEL_ERROR", path + ": missing axes");
  std::vector<alphabet> axes = parse_axes(j["axes"]);
  std::vector<std::size_t> obs_dims;
  for (const auto& a : axes) obs_dims.push_back(a.size());

  loaded_model out;
  if (j.contains("theta")) {
    if (!j.contains("prior") || !j.contains("cond"))
      fail("MODEL_ERROR", path + ": family form needs prior and cond");
    alphabet theta{"theta", string_list(j["theta"], "theta")};
    std::vector<std::size_t> dims = obs_dims;
    dims.insert(dims.begin(), theta.size());
    out.family = build_family(theta, numbers(j["prior"], {theta.size()}, "prior"),
                              axes, numbers(j["cond"], dims, "cond"));

    if (j.contains("hidden")) {
      const json& h = j["hidden"];
      if (!h.is_object() || !h.contains("symbols") ||
          !h.contains("p_w_given_theta") || !h.contains("p_obs_given_w"))
        fail("MODEL_ERROR",
             path + ": hidden block needs symbols, p_w_given_theta, p_obs_given_w");
      alphabet w{h.contains("name") ? h["name"].get<std::string>() : "w",
                 string_list(h["symbols"], "hidden symbols")};
      std::vector<std::size_t> obs_shape = obs_dims;
      obs_shape.insert(obs_shape.begin(), w.size());
      out.hci = make_hci(
          *out.family, w,
          numbers(h["p_w_given_theta"], {theta.size(), w.size()}, "p_w_given_theta"),
          numbers(h["p_obs_given_w"], obs_shape, "p_obs_given_w"));
    }
    return out;
  }

  if (!j.contains("probs"))
    fail("MODEL_ERROR", path + ": plain form needs probs");
  out.plain = joint_dist::from_cells(axes, numbers(j["probs"], obs_dims, "probs"));

  if (j.contains("roles")) {
    const json& r = j["roles"];
    if (!r.is_object()) fail("MODEL_ERROR", path + ": roles must be an object");
    source_model s;
    s.joint = *out.plain;
    if (r.contains("x_axis")) s.x_axis = r["x_axis"].get<std::string>();
    if (r.contains("y_axis")) s.y_axis = r["y_axis"].get<std::string>();
    if (r.contains("z_axis")) s.z_axis = r["z_axis"].get<std::string>();
    if (!s.z_axis.empty()) {
      const alphabet& z = out.plain->axis(out.plain->axis_index(s.z_axis));
      s.reproduction = r.contains("reproduction")
                           ? alphabet{"zhat", string_list(r["reproduction"],
                                                          "reproduction")}
                           : alphabet{"zhat", z.symbols};
      if (!r.contains("distortion"))
        fail("MODEL_ERROR", path + ": roles with z_axis need a distortion table");
      s.distortion = numbers(r["distortion"], {z.size(), s.reproduction.size()},
                             "distortion");
    }
    out.source = std::move(s);
  }
  return out;
}

loaded_statistic load_statistic_file(const std::string& path) {
  json j = parse_file(path);
  if (j.contains("statistic")) j = j["statistic"];
  if (!j.contains("axis") || !j.contains("map"))
    fail("MODEL_ERROR", path + ": statistic needs axis and map");
  loaded_statistic out;
  out.axis = j["axis"].get<std::string>();
  if (!j["map"].is_object())
    fail("MODEL_ERROR", path + ": map must be an object");
  for (const auto& [k, v] : j["map"].items()) {
    if (v.is_string())
      out.raw[k] = v.get<std::string>();
    else if (v.is_number_integer())
      out.raw[k] = std::to_string(v.get<long long>());
    else
      fail("MODEL_ERROR", path + ": class labels must be strings or integers");
  }
  return out;
}

statistic resolve_statistic(const loaded_statistic& s, const alphabet& axis) {
  return statistic::canonicalize(axis, s.raw);
}

}  // namespace suffstat
