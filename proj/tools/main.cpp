// Command-line front end: every check and solver behind one binary with
// machine-readable reports. Exit codes: 0 all verdicts pass, 1 a check ran and
// failed, 2 usage, 3 invalid inputs.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "suffstat/error.hpp"
#include "suffstat/family.hpp"
#include "suffstat/gaussian_example.hpp"
#include "suffstat/info.hpp"
#include "suffstat/model_io.hpp"
#include "suffstat/qam_example.hpp"
#include "suffstat/rate_distortion.hpp"
#include "suffstat/rng.hpp"
#include "suffstat/source_coding.hpp"
#include "suffstat/sufficiency.hpp"
#include "suffstat/triangle_example.hpp"

namespace {

using nlohmann::json;  // plain json keeps keys sorted, so dumps are canonical
using namespace suffstat;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct run_report {
  std::string command;
  json inputs = json::object();
  std::vector<json> verdicts;
  std::vector<std::string> artifacts;

  void add(const std::string& name, bool pass, json evidence) {
    evidence["name"] = name;
    evidence["pass"] = pass;
    verdicts.push_back(std::move(evidence));
  }

  int finish() {
    int code = 0;
    for (const auto& v : verdicts)
      if (!v["pass"].get<bool>()) code = 1;
    json out;
    out["command"] = command;
    out["inputs"] = inputs;
    out["verdicts"] = verdicts;
    out["artifacts"] = artifacts;
    out["exit_code"] = code;
    std::cout << out.dump(2) << "\n";
    return code;
  }
};

json verdict_json(const markov_verdict& v) {
  json j;
  j["cmi_bits"] = v.cmi_bits;
  j["threshold_bits"] = v.threshold_bits;
  j["holds"] = v.holds;
  if (v.witness) {
    j["witness"] = {{"a", v.witness->a},
                    {"b", v.witness->b},
                    {"c", v.witness->c},
                    {"contribution_bits", v.witness->contribution}};
  }
  return j;
}

json partition_json(const statistic& t) {
  json classes = json::array();
  for (int c = 0; c < t.num_classes(); ++c) {
    json members = json::array();
    for (std::size_t i = 0; i < t.domain().size(); ++i)
      if (t.label(i) == c) members.push_back(t.domain().symbols[i]);
    classes.push_back(members);
  }
  json j;
  j["num_classes"] = t.num_classes();
  j["classes"] = classes;
  return j;
}

// Artifacts land under --out; no artifacts are written when it is empty.
class artifact_writer {
 public:
  explicit artifact_writer(std::string dir) : dir_(std::move(dir)) {}

  bool enabled() const { return !dir_.empty(); }

  std::string write_csv(const std::string& name,
                        const std::vector<std::string>& header,
                        const std::vector<std::vector<std::string>>& rows) {
    std::filesystem::create_directories(dir_);
    const std::string path = dir_ + "/" + name;
    std::ofstream out(path, std::ios::binary);  // LF endings everywhere
    if (!out) fail("MODEL_ERROR", "cannot write " + path);
    for (std::size_t i = 0; i < header.size(); ++i)
      out << (i ? "," : "") << header[i];
    out << "\n";
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i)
        out << (i ? "," : "") << row[i];
      out << "\n";
    }
    return path;
  }

 private:
  std::string dir_;
};

param_family need_family(const loaded_model& m) {
  if (!m.family) fail("MODEL_ERROR", "this command needs a parametric family model");
  return *m.family;
}

joint_dist need_plain(const loaded_model& m) {
  if (m.plain) return *m.plain;
  if (m.family) return m.family->joint();
  fail("MODEL_ERROR", "this command needs a joint model");
}

hci_model need_hidden(const loaded_model& m) {
  if (!m.hci) fail("MODEL_ERROR", "this command needs a model with a hidden block");
  return *m.hci;
}

source_model need_source(const loaded_model& m) {
  if (!m.source || m.source->z_axis.empty())
    fail("MODEL_ERROR", "this command needs roles with x_axis, y_axis, z_axis");
  return *m.source;
}

// The statistic file names its axis; bind it against a single observation
// axis when the name matches, otherwise against the flattened product.
statistic bind_family_statistic(const param_family& fam,
                                const loaded_statistic& s) {
  for (const auto& ax : fam.obs_axes)
    if (ax.name == s.axis && fam.obs_axes.size() == 1)
      return resolve_statistic(s, ax);
  return resolve_statistic(s, fam.flat_obs_alphabet("obs"));
}

statistic bind_axis_statistic(const param_family& fam, const loaded_statistic& s,
                              const std::string& axis_name) {
  for (const auto& ax : fam.obs_axes)
    if (ax.name == axis_name) return resolve_statistic(s, ax);
  fail("MODEL_ERROR", "family has no observation axis named " + axis_name);
}

std::vector<double> parse_dgrid(const std::string& spec) {
  double a = 0.0, b = 0.0;
  int steps = 0;
  if (std::sscanf(spec.c_str(), "%lf:%lf:%d", &a, &b, &steps) != 3 || steps < 1)
    fail("MODEL_ERROR", "--dgrid expects a:b:steps with steps >= 1");
  std::vector<double> grid;
  for (int i = 0; i < steps; ++i)
    grid.push_back(steps == 1 ? a
                              : a + (b - a) * static_cast<double>(i) /
                                        static_cast<double>(steps - 1));
  return grid;
}

// Built-in fixtures for selftest: a two-bit Bernoulli family where the count
// of ones is sufficient, and a hidden-switch family where the observation
// branches are independent given the switch.
param_family two_bit_bernoulli_family() {
  const double p0 = 0.2, p1 = 0.8;
  std::vector<double> cond;
  for (double p : {p0, p1})
    for (int b1 = 0; b1 < 2; ++b1)
      for (int b2 = 0; b2 < 2; ++b2)
        cond.push_back((b1 ? p : 1 - p) * (b2 ? p : 1 - p));
  return build_family(alphabet{"theta", {"0", "1"}}, {0.5, 0.5},
                      {alphabet{"x", {"00", "01", "10", "11"}}, }, cond);
}

hci_model hidden_switch_family(int samples_per_node) {
  const double flip = 0.1;
  const double q0 = 0.25, q1 = 0.75;
  const int n = samples_per_node;
  const std::size_t tuples = static_cast<std::size_t>(1) << n;

  std::vector<std::string> symbols(tuples);
  for (std::size_t v = 0; v < tuples; ++v) {
    std::string s;
    for (int i = n - 1; i >= 0; --i) s += ((v >> i) & 1) ? '1' : '0';
    symbols[v] = s;
  }
  auto tuple_prob = [&](std::size_t v, double q) {
    double p = 1.0;
    for (int i = 0; i < n; ++i) p *= ((v >> i) & 1) ? q : 1 - q;
    return p;
  };

  std::vector<double> p_w = {1 - flip, flip, flip, 1 - flip};  // theta-major
  std::vector<double> p_obs;
  for (double q : {q0, q1})
    for (std::size_t xv = 0; xv < tuples; ++xv)
      for (std::size_t yv = 0; yv < tuples; ++yv)
        p_obs.push_back(tuple_prob(xv, q) * tuple_prob(yv, q));

  std::vector<double> cond(2 * tuples * tuples, 0.0);
  for (int t = 0; t < 2; ++t)
    for (std::size_t c = 0; c < tuples * tuples; ++c)
      cond[t * tuples * tuples + c] = p_w[t * 2 + 0] * p_obs[c] +
                                      p_w[t * 2 + 1] * p_obs[tuples * tuples + c];
  param_family fam =
      build_family(alphabet{"theta", {"0", "1"}}, {0.5, 0.5},
                   {alphabet{"x", symbols}, alphabet{"y", symbols}}, cond);
  return make_hci(fam, alphabet{"w", {"0", "1"}}, p_w, p_obs);
}

statistic count_statistic(const alphabet& bits) {
  std::vector<int> labels;
  for (const auto& s : bits.symbols)
    labels.push_back(static_cast<int>(std::count(s.begin(), s.end(), '1')));
  return statistic::from_labels(bits, labels);
}

statistic parity_statistic(const alphabet& bits) {
  std::vector<int> labels;
  for (const auto& s : bits.symbols)
    labels.push_back(static_cast<int>(std::count(s.begin(), s.end(), '1')) % 2);
  return statistic::from_labels(bits, labels);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sufficiency workbench: Markov-chain checks, minimal statistics, "
               "rate regions and example simulations"};
  app.require_subcommand(1);

  std::string model_path, out_dir, axis_name, dgrid_spec = "0.05:0.2:3";
  std::vector<std::string> statistic_paths;
  std::string thresholds_path;
  std::vector<std::string> group_a, group_b, group_c;
  double tol_bits = kCmiThresholdBits;
  double gap_bits = std::numeric_limits<double>::quiet_NaN();
  double solver_tol = 1e-9;
  std::uint64_t seed = 0;
  long trials = 10000;
  int ucard = 2, budget = 200;
  int n_samples = 3, k_sensors = 4;
  double rho = 0.5, sigma2 = 1.0, prior_mean = 0.0, prior_var = 1.0;
  std::vector<double> theta_values;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--model", model_path, "model JSON file");
    cmd->add_option("--statistic", statistic_paths,
                    "statistic JSON file (repeatable)");
    cmd->add_option("--axis", axis_name, "axis the operation targets");
    cmd->add_option("--tol", tol_bits, "CMI decision threshold in bits");
    cmd->add_option("--seed", seed, "random seed");
    cmd->add_option("--trials", trials, "simulation trials / probes");
    cmd->add_option("--ucard", ucard, "auxiliary alphabet cardinality");
    cmd->add_option("--budget", budget, "random restarts for frontier search");
    cmd->add_option("--dgrid", dgrid_spec, "distortion grid a:b:steps");
    cmd->add_option("--out", out_dir, "directory for CSV artifacts");
    cmd->add_option("--gap", gap_bits, "acceptance gap for frontier/curve checks");
    cmd->add_option("--solver-tol", solver_tol, "inner solver convergence tol");
    return cmd;
  };

  auto* c_suff = add_common(app.add_subcommand(
      "check-sufficiency", "is T(obs) sufficient for theta"));
  auto* c_cond = add_common(app.add_subcommand(
      "check-conditional", "is T(X) conditionally sufficient given Y"));
  auto* c_minimal = add_common(app.add_subcommand(
      "minimal-stat", "coarsest sufficient partition of the observations"));
  auto* c_mincond = add_common(app.add_subcommand(
      "minimal-conditional-stat", "coarsest conditionally sufficient partition"));
  auto* c_markov = add_common(app.add_subcommand(
      "check-markov", "generic A - B - C chain check"));
  c_markov->add_option("--a", group_a, "axes of A (repeatable)");
  c_markov->add_option("--b", group_b, "axes of B (repeatable)");
  c_markov->add_option("--c", group_c, "axes of C (repeatable)");
  auto* c_hci = add_common(app.add_subcommand(
      "hci-verify", "hidden-variable decomposition checks"));
  auto* c_th1 = add_common(app.add_subcommand(
      "theorem1", "global sufficiency from per-node statistics"));
  auto* c_th2 = add_common(app.add_subcommand(
      "theorem2", "completing a pair when Ty is locally sufficient"));
  auto* c_ak = add_common(app.add_subcommand(
      "ak-frontier", "helper rate frontier (H(X|U), I(Y;U))"));
  auto* c_corner = add_common(app.add_subcommand(
      "corner-point", "entropy of the coarsest proportional-column partition"));
  auto* c_th6 = add_common(app.add_subcommand(
      "theorem6", "frontier comparison under a sufficient reduction of Y"));
  auto* c_rd = add_common(app.add_subcommand(
      "rd-curve", "conditional remote rate-distortion curve"));
  auto* c_rdeq = add_common(app.add_subcommand(
      "rd-equality", "curve comparison under a sufficient reduction of X"));
  auto* c_gauss = add_common(app.add_subcommand(
      "sim-gaussian", "posterior agreement of full vs summed observations"));
  c_gauss->add_option("--n", n_samples, "samples per branch");
  c_gauss->add_option("--rho", rho, "correlation through the shared component");
  c_gauss->add_option("--prior-mean", prior_mean, "prior mean");
  c_gauss->add_option("--prior-var", prior_var, "prior variance");
  auto* c_qam = add_common(app.add_subcommand(
      "sim-qam", "detection with fading: complex data vs magnitudes"));
  c_qam->add_option("--k", k_sensors, "sensor count");
  c_qam->add_option("--sigma2", sigma2, "noise variance");
  c_qam->add_option("--thresholds", thresholds_path,
                    "JSON file with an array of LR thresholds");
  auto* c_tri = add_common(app.add_subcommand(
      "example-triangle", "ratio constancy on the triangular support"));
  c_tri->add_option("--n", n_samples, "coordinate pairs per probe");
  c_tri->add_option("--theta", theta_values, "candidate theta (repeatable)");
  auto* c_self = app.add_subcommand(
      "selftest", "built-in fixture checks, no inputs needed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;  // help exits clean, everything else is usage
  }

  run_report rep;
  artifact_writer art(out_dir);
  try {
    if (app.got_subcommand(c_suff)) {
      rep.command = "check-sufficiency";
      if (statistic_paths.size() != 1)
        fail("MODEL_ERROR", "need exactly one --statistic");
      const param_family fam = need_family(load_model_file(model_path));
      const statistic t =
          bind_family_statistic(fam, load_statistic_file(statistic_paths[0]));
      rep.inputs = {{"model", model_path}, {"statistic", statistic_paths[0]}};
      const markov_verdict v = is_sufficient(fam, t, tol_bits);
      rep.add("sufficiency", v.holds, verdict_json(v));
    } else if (app.got_subcommand(c_cond)) {
      rep.command = "check-conditional";
      if (statistic_paths.size() != 1)
        fail("MODEL_ERROR", "need exactly one --statistic");
      const param_family fam = need_family(load_model_file(model_path));
      if (fam.obs_axes.size() != 2)
        fail("MODEL_ERROR", "conditional checks need exactly two observation axes");
      const loaded_statistic ls = load_statistic_file(statistic_paths[0]);
      const std::string x = axis_name.empty() ? ls.axis : axis_name;
      std::string y;
      for (const auto& ax : fam.obs_axes)
        if (ax.name != x) y = ax.name;
      const statistic t = bind_axis_statistic(fam, ls, x);
      rep.inputs = {{"model", model_path},
                    {"statistic", statistic_paths[0]},
                    {"x_axis", x},
                    {"y_axis", y}};
      const markov_verdict v = is_conditionally_sufficient(fam, t, x, y, tol_bits);
      rep.add("conditional_sufficiency", v.holds, verdict_json(v));
    } else if (app.got_subcommand(c_minimal)) {
      rep.command = "minimal-stat";
      const param_family fam = need_family(load_model_file(model_path));
      rep.inputs = {{"model", model_path}};
      const statistic t = minimal_sufficient(fam);
      const markov_verdict v = is_sufficient(fam, t, tol_bits);
      json ev = verdict_json(v);
      ev["partition"] = partition_json(t);
      rep.add("minimal_sufficient", v.holds, ev);
    } else if (app.got_subcommand(c_mincond)) {
      rep.command = "minimal-conditional-stat";
      const param_family fam = need_family(load_model_file(model_path));
      if (fam.obs_axes.size() != 2)
        fail("MODEL_ERROR", "conditional checks need exactly two observation axes");
      const std::string x = axis_name.empty() ? fam.obs_axes[0].name : axis_name;
      std::string y;
      for (const auto& ax : fam.obs_axes)
        if (ax.name != x) y = ax.name;
      rep.inputs = {{"model", model_path}, {"x_axis", x}, {"y_axis", y}};
      const statistic t = minimal_conditional_sufficient(fam, x, y);
      const markov_verdict v = is_conditionally_sufficient(fam, t, x, y, tol_bits);
      json ev = verdict_json(v);
      ev["partition"] = partition_json(t);
      rep.add("minimal_conditional_sufficient", v.holds, ev);
    } else if (app.got_subcommand(c_markov)) {
      rep.command = "check-markov";
      const joint_dist j = need_plain(load_model_file(model_path));
      if (group_a.empty() || group_b.empty() || group_c.empty())
        fail("MODEL_ERROR", "check-markov needs --a, --b and --c axis groups");
      rep.inputs = {{"model", model_path},
                    {"a", group_a},
                    {"b", group_b},
                    {"c", group_c}};
      const markov_verdict v = check_markov(j, group_a, group_b, group_c, tol_bits);
      rep.add("markov_chain", v.holds, verdict_json(v));
    } else if (app.got_subcommand(c_hci)) {
      rep.command = "hci-verify";
      const hci_model h = need_hidden(load_model_file(model_path));
      rep.inputs = {{"model", model_path}};
      const auto [vw, vxy] = verify_hci(h, tol_bits);
      rep.add("theta_given_w", vw.holds, verdict_json(vw));
      rep.add("branch_independence", vxy.holds, verdict_json(vxy));
    } else if (app.got_subcommand(c_th1)) {
      rep.command = "theorem1";
      if (statistic_paths.size() != 3)
        fail("MODEL_ERROR",
             "need three --statistic files: on W, on X and on Y, in order");
      const hci_model h = need_hidden(load_model_file(model_path));
      const statistic tw =
          resolve_statistic(load_statistic_file(statistic_paths[0]), h.w);
      const statistic tx = bind_axis_statistic(
          h.family, load_statistic_file(statistic_paths[1]),
          h.family.obs_axes[0].name);
      const statistic ty = bind_axis_statistic(
          h.family, load_statistic_file(statistic_paths[2]),
          h.family.obs_axes[1].name);
      rep.inputs = {{"model", model_path}, {"statistics", statistic_paths}};
      const theorem1_report r = theorem1_check(h, tw, tx, ty, tol_bits);
      rep.add("switch_statistic_sufficient", r.tw_sufficient_for_w.holds,
              verdict_json(r.tw_sufficient_for_w));
      rep.add("branches_independent_given_switch_class",
              r.induced_independence.holds, verdict_json(r.induced_independence));
      rep.add("x_statistic_locally_sufficient", r.tx_local.holds,
              verdict_json(r.tx_local));
      rep.add("y_statistic_locally_sufficient", r.ty_local.holds,
              verdict_json(r.ty_local));
      rep.add("pair_globally_sufficient", r.conclusion.holds,
              verdict_json(r.conclusion));
    } else if (app.got_subcommand(c_th2)) {
      rep.command = "theorem2";
      if (statistic_paths.size() != 2)
        fail("MODEL_ERROR", "need two --statistic files: on X and on Y, in order");
      const param_family fam = need_family(load_model_file(model_path));
      if (fam.obs_axes.size() != 2)
        fail("MODEL_ERROR", "theorem2 needs exactly two observation axes");
      const std::string x = fam.obs_axes[0].name, y = fam.obs_axes[1].name;
      const statistic tx =
          bind_axis_statistic(fam, load_statistic_file(statistic_paths[0]), x);
      const statistic ty =
          bind_axis_statistic(fam, load_statistic_file(statistic_paths[1]), y);
      rep.inputs = {{"model", model_path}, {"statistics", statistic_paths}};
      const theorem2_report r = theorem2_check(fam, tx, ty, x, y, tol_bits);
      rep.add("y_statistic_locally_sufficient", r.ty_precondition.holds,
              verdict_json(r.ty_precondition));
      rep.add("pair_globally_sufficient", r.direct.holds, verdict_json(r.direct));
      json fac;
      fac["factorization_holds"] = r.factorization;
      fac["agrees_with_direct"] = r.agree;
      rep.add("factorization_agreement", r.agree, fac);
    } else if (app.got_subcommand(c_ak)) {
      rep.command = "ak-frontier";
      const loaded_model m = load_model_file(model_path);
      const joint_dist j = need_plain(m);
      std::string x = m.source ? m.source->x_axis : "";
      std::string y = m.source ? m.source->y_axis : "";
      if (!axis_name.empty()) x = axis_name;  // --axis overrides the X role
      if (x.empty() || y.empty())
        fail("MODEL_ERROR", "model roles must name x_axis and y_axis");
      rep.inputs = {{"model", model_path},
                    {"ucard", ucard},
                    {"budget", budget},
                    {"seed", seed}};
      const rate_frontier f = ak_frontier(j, x, y, ucard, budget, seed);
      json ev;
      ev["num_points"] = f.points.size();
      json pts = json::array();
      for (const auto& p : f.points)
        pts.push_back({{"r1_bits", p.r1_bits}, {"r2_bits", p.r2_bits}});
      ev["points"] = pts;
      rep.add("frontier", !f.points.empty(), ev);
      if (art.enabled()) {
        std::vector<std::vector<std::string>> rows;
        for (const auto& p : f.points)
          rows.push_back({format_double(p.r1_bits), format_double(p.r2_bits)});
        rep.artifacts.push_back(art.write_csv("frontier.csv",
                                              {"r1_bits", "r2_bits"}, rows));
      }
    } else if (app.got_subcommand(c_corner)) {
      rep.command = "corner-point";
      const loaded_model m = load_model_file(model_path);
      const joint_dist j = need_plain(m);
      if (!m.source || m.source->x_axis.empty() || m.source->y_axis.empty())
        fail("MODEL_ERROR", "model roles must name x_axis and y_axis");
      rep.inputs = {{"model", model_path}};
      json ev;
      ev["corner_bits"] = corner_point(j, m.source->x_axis, m.source->y_axis);
      rep.add("corner_point", true, ev);
    } else if (app.got_subcommand(c_th6)) {
      rep.command = "theorem6";
      if (statistic_paths.size() != 1)
        fail("MODEL_ERROR", "need exactly one --statistic (on Y)");
      const loaded_model m = load_model_file(model_path);
      const joint_dist j = need_plain(m);
      if (!m.source || m.source->x_axis.empty() || m.source->y_axis.empty())
        fail("MODEL_ERROR", "model roles must name x_axis and y_axis");
      const std::string x = m.source->x_axis, y = m.source->y_axis;
      const statistic t = resolve_statistic(load_statistic_file(statistic_paths[0]),
                                            j.axis(j.axis_index(y)));
      rep.inputs = {{"model", model_path},
                    {"statistic", statistic_paths[0]},
                    {"ucard", ucard},
                    {"budget", budget},
                    {"seed", seed}};
      const theorem6_report r = theorem6_compare(j, x, y, t, ucard, budget, seed,
                                                 tol_bits);
      json cont;
      cont["lift_gap_bits"] = r.lift_gap_bits;
      cont["reduced_covered_by_full_bits"] = r.reduced_covered_by_full_bits;
      rep.add("reduced_contained_in_full",
              r.lift_gap_bits <= 1e-9 && r.reduced_covered_by_full_bits <= 1e-9,
              cont);
      const double gap_limit = std::isnan(gap_bits) ? 0.02 : gap_bits;
      json gap;
      gap["full_covered_by_reduced_bits"] = r.full_covered_by_reduced_bits;
      gap["gap_threshold_bits"] = gap_limit;
      rep.add("full_covered_by_reduced",
              r.full_covered_by_reduced_bits <= gap_limit, gap);
      if (art.enabled()) {
        auto dump = [&](const rate_frontier& f, const std::string& name) {
          std::vector<std::vector<std::string>> rows;
          for (const auto& p : f.points)
            rows.push_back({format_double(p.r1_bits), format_double(p.r2_bits)});
          rep.artifacts.push_back(
              art.write_csv(name, {"r1_bits", "r2_bits"}, rows));
        };
        dump(r.full, "frontier_full.csv");
        dump(r.reduced, "frontier_reduced.csv");
      }
    } else if (app.got_subcommand(c_rd)) {
      rep.command = "rd-curve";
      const source_model m = need_source(load_model_file(model_path));
      const std::vector<double> grid = parse_dgrid(dgrid_spec);
      rep.inputs = {{"model", model_path}, {"dgrid", dgrid_spec}};
      const rd_curve c = conditional_remote_rd(m, grid, solver_tol);
      bool all_converged = true;
      json pts = json::array();
      for (const auto& p : c.points) {
        all_converged = all_converged && p.converged;
        pts.push_back({{"target_d", p.target_d},
                       {"achieved_d", p.achieved_d},
                       {"rate_bits", p.rate_bits},
                       {"converged", p.converged}});
      }
      json ev;
      ev["d_min"] = c.d_min;
      ev["d_max"] = c.d_max;
      ev["points"] = pts;
      rep.add("curve_converged", all_converged, ev);
      if (art.enabled()) {
        std::vector<std::vector<std::string>> rows;
        for (const auto& p : c.points)
          rows.push_back({format_double(p.target_d), format_double(p.rate_bits),
                          p.converged ? "1" : "0"});
        rep.artifacts.push_back(art.write_csv(
            "rd_curve.csv", {"distortion", "rate_bits", "converged"}, rows));
      }
    } else if (app.got_subcommand(c_rdeq)) {
      rep.command = "rd-equality";
      if (statistic_paths.size() != 1)
        fail("MODEL_ERROR", "need exactly one --statistic (on X)");
      const source_model m = need_source(load_model_file(model_path));
      const statistic t =
          resolve_statistic(load_statistic_file(statistic_paths[0]),
                            m.joint.axis(m.joint.axis_index(m.x_axis)));
      const std::vector<double> grid = parse_dgrid(dgrid_spec);
      rep.inputs = {{"model", model_path},
                    {"statistic", statistic_paths[0]},
                    {"dgrid", dgrid_spec}};
      const double gap_limit = std::isnan(gap_bits) ? 0.01 : gap_bits;
      const rd_equality_report r = rd_equality_check(m, t, grid, solver_tol,
                                                     tol_bits);
      json ev;
      ev["max_gap_bits"] = r.max_gap_bits;
      ev["gap_threshold_bits"] = gap_limit;
      rep.add("curves_match", r.max_gap_bits <= gap_limit, ev);
      if (art.enabled()) {
        std::vector<std::vector<std::string>> rows;
        for (std::size_t i = 0; i < r.full.points.size(); ++i)
          rows.push_back({format_double(r.full.points[i].target_d),
                          format_double(r.full.points[i].rate_bits),
                          format_double(r.reduced.points[i].rate_bits)});
        rep.artifacts.push_back(art.write_csv(
            "rd_equality.csv", {"distortion", "rate_full_bits", "rate_reduced_bits"},
            rows));
      }
    } else if (app.got_subcommand(c_gauss)) {
      rep.command = "sim-gaussian";
      gaussian_config cfg;
      cfg.n = n_samples;
      cfg.rho = rho;
      cfg.prior_mean = prior_mean;
      cfg.prior_var = prior_var;
      cfg.seed = seed;
      rep.inputs = {{"n", cfg.n},
                    {"rho", cfg.rho},
                    {"prior_mean", cfg.prior_mean},
                    {"prior_var", cfg.prior_var},
                    {"seed", seed},
                    {"trials", trials}};
      // Exact agreement of the two posterior routes on replayed datasets.
      double worst = 0.0;
      const long probes = std::min<long>(trials, 200);
      std::vector<double> xs(static_cast<std::size_t>(cfg.n));
      std::vector<double> ys(static_cast<std::size_t>(cfg.n));
      for (long t = 0; t < probes; ++t) {
        rng_stream g(cfg.seed, static_cast<std::uint64_t>(t));
        const double theta = g.normal(cfg.prior_mean, cfg.prior_var);
        const double z = g.normal(theta, cfg.rho);
        for (auto& v : xs) v = g.normal(z, 1.0 - cfg.rho);
        for (auto& v : ys) v = g.normal(z, 1.0 - cfg.rho);
        const posterior_moments f =
            gaussian_posterior(cfg, xs, ys, gaussian_route::full);
        const posterior_moments r =
            gaussian_posterior(cfg, xs, ys, gaussian_route::reduced);
        worst = std::max({worst, std::abs(f.mean - r.mean),
                          std::abs(f.var - r.var)});
      }
      json exact;
      exact["max_abs_gap"] = worst;
      exact["tolerance"] = 1e-10;
      rep.add("posterior_agreement", worst <= 1e-10, exact);

      const gaussian_mc_result mc = gaussian_mc_mse(cfg, trials);
      json ev;
      ev["mse_full"] = mc.mse_full;
      ev["mse_reduced"] = mc.mse_reduced;
      ev["gap"] = mc.gap;
      ev["gap_se"] = mc.gap_se;
      rep.add("mse_paired_gap", std::abs(mc.gap) <= 3.0 * mc.gap_se + 1e-15, ev);
    } else if (app.got_subcommand(c_qam)) {
      rep.command = "sim-qam";
      qam_config cfg;
      cfg.k = k_sensors;
      cfg.noise_var = sigma2;
      cfg.seed = seed;
      std::vector<double> thresholds = {0.25, 0.5, 1.0, 2.0, 4.0};
      if (!thresholds_path.empty()) {
        std::ifstream in(thresholds_path);
        if (!in) fail("MODEL_ERROR", "cannot open " + thresholds_path);
        json tj;
        try {
          in >> tj;
        } catch (const json::exception& e) {
          fail("MODEL_ERROR", thresholds_path + ": " + e.what());
        }
        if (!tj.is_array()) fail("MODEL_ERROR", "thresholds file must be an array");
        thresholds.clear();
        for (const auto& v : tj) thresholds.push_back(v.get<double>());
      }
      rep.inputs = {{"k", cfg.k},
                    {"sigma2", cfg.noise_var},
                    {"seed", seed},
                    {"trials", trials}};
      const std::vector<roc_row> table = qam_roc_compare(cfg, trials, thresholds);
      bool identical = true;
      for (const auto& r : table)
        identical = identical && r.pfa_full == r.pfa_mag && r.pd_full == r.pd_mag;
      json ev;
      ev["rows"] = table.size();
      ev["tables_identical"] = identical;
      rep.add("roc_routes_identical", identical, ev);
      if (art.enabled()) {
        std::vector<std::vector<std::string>> rows;
        for (const auto& r : table)
          rows.push_back({format_double(r.threshold), format_double(r.pfa_full),
                          format_double(r.pd_full), format_double(r.pfa_mag),
                          format_double(r.pd_mag)});
        rep.artifacts.push_back(art.write_csv(
            "roc.csv", {"threshold", "pfa_full", "pd_full", "pfa_mag", "pd_mag"},
            rows));
      }
    } else if (app.got_subcommand(c_tri)) {
      rep.command = "example-triangle";
      triangle_config cfg;
      cfg.n = n_samples;
      if (!theta_values.empty()) cfg.theta_values = theta_values;
      cfg.seed = seed;
      rep.inputs = {{"n", cfg.n},
                    {"theta_values", cfg.theta_values},
                    {"seed", seed},
                    {"probes", trials}};
      const triangle_report r = triangle_ratio_check(cfg, trials);
      json ev;
      ev["probes_equal_max"] = r.probes_equal_max;
      ev["probes_diff_max"] = r.probes_diff_max;
      ev["probes_equal_min"] = r.probes_equal_min;
      ev["probes_diff_min"] = r.probes_diff_min;
      ev["mismatches"] = r.mismatches;
      ev["notes"] = r.notes;
      rep.add("ratio_classes_match_max", r.pass, ev);
    } else if (app.got_subcommand(c_self)) {
      rep.command = "selftest";
      rep.inputs = json::object();
      const param_family bin = two_bit_bernoulli_family();
      const statistic count = count_statistic(bin.obs_axes[0]);
      const statistic parity = parity_statistic(bin.obs_axes[0]);
      const markov_verdict v1 = is_sufficient(bin, count);
      rep.add("count_sufficient", v1.holds, verdict_json(v1));
      const markov_verdict v2 = is_sufficient(bin, parity);
      rep.add("parity_not_sufficient", !v2.holds && v2.cmi_bits > 0.05,
              verdict_json(v2));
      const statistic minimal = minimal_sufficient(bin);
      rep.add("minimal_matches_count", minimal.same_partition(count),
              partition_json(minimal));

      const hci_model dep = hidden_switch_family(1);
      const auto [vw, vxy] = verify_hci(dep);
      rep.add("switch_decomposition", vw.holds && vxy.holds, verdict_json(vw));
      const markov_verdict direct = check_markov(
          dep.family.joint(), {"theta"}, {"x"}, {"y"}, kCmiThresholdBits);
      rep.add("branches_carry_separate_evidence",
              !direct.holds && direct.cmi_bits > 1e-3, verdict_json(direct));
    }
  } catch (const model_error& e) {
    json out;
    out["command"] = rep.command;
    out["error"] = {{"code", e.code()}, {"message", e.what()}};
    out["exit_code"] = 3;
    std::cout << out.dump(2) << "\n";
    std::cerr << e.code() << ": " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    json out;
    out["command"] = rep.command;
    out["error"] = {{"code", "MODEL_ERROR"}, {"message", e.what()}};
    out["exit_code"] = 3;
    std::cout << out.dump(2) << "\n";
    std::cerr << e.what() << "\n";
    return 3;
  }
  return rep.finish();
}
