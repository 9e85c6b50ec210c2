#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <string>
#include <vector>

#include "suffstat/info.hpp"
#include "suffstat/joint.hpp"
#include "test_util.hpp"

using namespace suffstat;

namespace {

joint_dist pair_dist(std::vector<double> cells) {
  return joint_dist::from_cells(
      {alphabet{"a", {"0", "1"}}, alphabet{"b", {"0", "1"}}}, std::move(cells));
}

}  // namespace

TEST_CASE("alphabets reject empty and repeated symbol lists") {
  CHECK(tt::thrown_code([] { alphabet{"a", {}}; }) == "SHAPE_MISMATCH");
  CHECK(tt::thrown_code([] { alphabet{"a", {"0", "0"}}; }) ==
        "DUPLICATE_SYMBOL");
  CHECK(tt::thrown_code([] { alphabet{"a", {"0", "1"}}.index_of("2"); }) ==
        "MISSING_SYMBOL");
}

TEST_CASE("from_cells validates shape, sign and mass") {
  CHECK(tt::thrown_code([] { pair_dist({0.25, 0.25, 0.25}); }) ==
        "SHAPE_MISMATCH");
  CHECK(tt::thrown_code([] { pair_dist({0.5, 0.6, -0.1, 0.0}); }) ==
        "NEGATIVE_PROB");
  CHECK(tt::thrown_code([] { pair_dist({0.5, 0.5, 0.1, 0.0}); }) ==
        "NORMALIZATION");
  CHECK(tt::thrown_code([] { pair_dist({0.5, 0.5, std::nan(""), 0.0}); }) ==
        "NONFINITE_INPUT");
  CHECK(tt::thrown_code([] {
          joint_dist::from_cells(
              {alphabet{"a", {"0", "1"}}, alphabet{"a", {"x", "y"}}},
              {0.25, 0.25, 0.25, 0.25});
        }) == "SHAPE_MISMATCH");
}

TEST_CASE("tiny normalization drift is absorbed, arithmetic residue forgiven") {
  const joint_dist d = pair_dist({0.5, 0.5 + 1e-12, -1e-15, 0.0});
  double sum = 0.0;
  for (double c : d.cells()) {
    CHECK(c >= 0.0);
    sum += c;
  }
  CHECK(std::abs(sum - 1.0) <= 1e-14);
}

TEST_CASE("axis products beyond the dense cap are rejected up front") {
  std::vector<std::string> big(4000), wide(3000);
  for (std::size_t i = 0; i < big.size(); ++i) big[i] = "s" + std::to_string(i);
  for (std::size_t i = 0; i < wide.size(); ++i)
    wide[i] = "t" + std::to_string(i);
  CHECK(tt::thrown_code([&] {
          joint_dist::from_cells({alphabet{"a", big}, alphabet{"b", wide}}, {});
        }) == "CARD_TOO_LARGE");
}

TEST_CASE("marginals of the bernoulli-pair joint") {
  const joint_dist j = tt::two_bit_bernoulli().joint();
  const joint_dist mx = j.marginal({"x"});
  REQUIRE(mx.axes().size() == 1);
  const std::vector<double> want = {0.34, 0.16, 0.16, 0.34};
  for (std::size_t i = 0; i < want.size(); ++i)
    CHECK(std::abs(mx.cells()[i] - want[i]) <= 1e-15);

  // Result axis order follows the distribution, not the keep list.
  const joint_dist both = j.marginal({"x", "theta"});
  CHECK(both.axes()[0].name == "theta");
  CHECK(both.axes()[1].name == "x");

  CHECK(tt::thrown_code([&] { j.marginal({}); }) == "EMPTY_AXIS_SET");
  CHECK(tt::thrown_code([&] { j.marginal({"nope"}); }) == "UNKNOWN_AXIS");
}

TEST_CASE("conditioning renormalizes a slice and rejects zero events") {
  const joint_dist j = tt::two_bit_bernoulli().joint();
  const joint_dist s1 = j.condition("theta", "1");
  REQUIRE(s1.axes().size() == 1);
  const std::vector<double> want = {0.04, 0.16, 0.16, 0.64};
  for (std::size_t i = 0; i < want.size(); ++i)
    CHECK(std::abs(s1.cells()[i] - want[i]) <= 1e-15);

  const joint_dist d = pair_dist({0.5, 0.5, 0.0, 0.0});
  CHECK(tt::thrown_code([&] { d.condition("a", "1"); }) == "ZERO_EVENT");
  CHECK(tt::thrown_code([&] { d.condition("a", "9"); }) == "MISSING_SYMBOL");
}

TEST_CASE("entropy reference values") {
  const joint_dist u =
      joint_dist::from_cells({tt::numbered("a", 4)}, {0.25, 0.25, 0.25, 0.25});
  CHECK(std::abs(entropy_bits(u, {"a"}) - 2.0) <= 1e-12);

  const joint_dist point =
      joint_dist::from_cells({tt::numbered("a", 3)}, {1.0, 0.0, 0.0});
  CHECK(entropy_bits(point, {"a"}) == 0.0);

  const joint_dist bern =
      joint_dist::from_cells({tt::numbered("a", 2)}, {0.9, 0.1});
  CHECK(std::abs(entropy_bits(bern, {"a"}) - 0.4689955935892812) <= 1e-15);
}

TEST_CASE("mutual information reference values") {
  const joint_dist indep = pair_dist({0.25, 0.25, 0.25, 0.25});
  CHECK(cmi_bits(indep, {"a"}, {"b"}, {}) <= 1e-12);

  const joint_dist copy = pair_dist({0.5, 0.0, 0.0, 0.5});
  CHECK(std::abs(cmi_bits(copy, {"a"}, {"b"}, {}) - 1.0) <= 1e-12);

  CHECK(tt::thrown_code([&] { cmi_bits(copy, {"a"}, {"a"}, {}); }) ==
        "AXIS_OVERLAP");
  CHECK(tt::thrown_code([&] { cmi_bits(copy, {"a"}, {"b"}, {"a"}); }) ==
        "AXIS_OVERLAP");
}

TEST_CASE("markov verdicts carry a witness exactly on failure") {
  // c copies a while b is a spectator, so a - b - c fails hard.
  const joint_dist bad = joint_dist::from_cells(
      {alphabet{"a", {"0", "1"}}, alphabet{"b", {"z"}},
       alphabet{"c", {"0", "1"}}},
      {0.5, 0.0, 0.0, 0.5});
  const markov_verdict v = check_markov(bad, {"a"}, {"b"}, {"c"});
  CHECK_FALSE(v.holds);
  CHECK(std::abs(v.cmi_bits - 1.0) <= 1e-12);
  REQUIRE(v.witness.has_value());
  CHECK(v.witness->contribution > 0.1);
  CHECK(v.witness->b == "z");

  const joint_dist good = joint_dist::from_cells(
      {alphabet{"a", {"0", "1"}}, alphabet{"b", {"z"}},
       alphabet{"c", {"0", "1"}}},
      {0.25, 0.25, 0.25, 0.25});
  const markov_verdict w = check_markov(good, {"a"}, {"b"}, {"c"});
  CHECK(w.holds);
  CHECK_FALSE(w.witness.has_value());
}

TEST_CASE("chain rule and nonnegativity on random three-axis tensors") {
  rng_stream g(2024, 0);
  for (int rep = 0; rep < 50; ++rep) {
    const joint_dist j = tt::random_joint(
        g, {tt::numbered("a", 3), tt::numbered("b", 2), tt::numbered("c", 4)});
    const double i_a_bc = cmi_bits(j, {"a"}, {"b", "c"}, {});
    const double i_a_c = cmi_bits(j, {"a"}, {"c"}, {});
    const double i_a_b_c = cmi_bits(j, {"a"}, {"b"}, {"c"});
    CHECK(std::abs(i_a_bc - (i_a_c + i_a_b_c)) <= 1e-10);
    CHECK(i_a_bc >= 0.0);
    CHECK(i_a_b_c >= 0.0);

    const double h_ab = entropy_bits(j, {"a", "b"});
    CHECK(h_ab <= entropy_bits(j, {"a"}) + entropy_bits(j, {"b"}) + 1e-12);
    CHECK(h_ab >= entropy_bits(j, {"a"}) - 1e-12);
  }
}

TEST_CASE("conditioning commutes with marginalization") {
  rng_stream g(7, 0);
  const joint_dist j = tt::random_joint(
      g, {tt::numbered("a", 3), tt::numbered("b", 2), tt::numbered("c", 3)});
  const joint_dist left = j.condition("c", "1").marginal({"a"});
  const joint_dist right = j.marginal({"a", "c"}).condition("c", "1");
  for (std::size_t i = 0; i < left.cells().size(); ++i)
    CHECK(std::abs(left.cells()[i] - right.cells()[i]) <= 1e-14);
}

TEST_CASE("flatten joins axes into one product axis") {
  rng_stream g(9, 0);
  const joint_dist j = tt::random_joint(
      g, {tt::numbered("a", 2), alphabet{"b", {"p", "q"}},
          alphabet{"c", {"x", "y", "z"}}});
  const joint_dist flat = j.flatten({"b", "c"}, "bc");
  REQUIRE(flat.axes().size() == 2);
  CHECK(flat.axes()[1].name == "bc");
  // First listed axis varies slowest.
  CHECK(flat.axes()[1].symbols[0] == "p|x");
  CHECK(flat.axes()[1].symbols[3] == "q|x");
  CHECK(std::abs(entropy_bits(flat, {"bc"}) - entropy_bits(j, {"b", "c"})) <=
        1e-12);
  CHECK(std::abs(flat.cell({1, 4}) - j.cell({1, 1, 1})) <= 1e-18);
}

TEST_CASE("attach and push_forward agree on the image mass") {
  const param_family fam = tt::two_bit_bernoulli();
  const joint_dist j = fam.joint();
  const statistic count = tt::count_stat(fam.obs_axes[0]);

  const joint_dist attached = j.attach("x", count, "tx");
  REQUIRE(attached.axes().size() == 3);
  const joint_dist via_attach = attached.marginal({"tx"});
  const joint_dist pushed = j.push_forward("x", count, "tx");
  REQUIRE(pushed.axes().size() == 2);
  const joint_dist via_push = pushed.marginal({"tx"});
  REQUIRE(via_attach.cells().size() == 3);
  for (std::size_t i = 0; i < 3; ++i)
    CHECK(std::abs(via_attach.cells()[i] - via_push.cells()[i]) <= 1e-15);

  // The parameter marginal is untouched by either operation.
  CHECK(std::abs(pushed.marginal({"theta"}).cells()[0] - 0.5) <= 1e-15);

  const statistic wrong = statistic::identity(tt::numbered("x", 3));
  CHECK(tt::thrown_code([&] { j.push_forward("x", wrong, "tx"); }) ==
        "DOMAIN_MISMATCH");
}
