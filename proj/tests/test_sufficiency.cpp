#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstddef>
#include <vector>

#include "suffstat/info.hpp"
#include "suffstat/sufficiency.hpp"
#include "suffstat/triangle_example.hpp"
#include "test_util.hpp"

using namespace suffstat;

TEST_CASE("count certifies for the bernoulli pair and parity does not") {
  const param_family fam = tt::two_bit_bernoulli();
  const statistic count = tt::count_stat(fam.obs_axes[0]);
  const statistic parity = tt::parity_stat(fam.obs_axes[0]);

  const markov_verdict vc = is_sufficient(fam, count);
  CHECK(vc.holds);
  CHECK(vc.cmi_bits <= 1e-12);
  CHECK_FALSE(vc.witness.has_value());

  const markov_verdict vp = is_sufficient(fam, parity);
  CHECK_FALSE(vp.holds);
  // Parity is independent of theta here, so conditioning on it hides nothing.
  CHECK(std::abs(vp.cmi_bits - 0.4605252679497693) <= 1e-12);
  CHECK(vp.witness.has_value());

  const double i_theta_x = cmi_bits(fam.joint(), {"theta"}, {"x"}, {});
  CHECK(std::abs(i_theta_x - 0.4605252679497691) <= 1e-12);
  CHECK(std::abs(vp.cmi_bits - i_theta_x) <= 1e-12);
}

TEST_CASE("minimal partition of the bernoulli pair is the bit count") {
  const param_family fam = tt::two_bit_bernoulli();
  const statistic count = tt::count_stat(fam.obs_axes[0]);
  const statistic minimal = minimal_sufficient(fam);
  CHECK(minimal.same_partition(count));
  CHECK(minimal.num_classes() == 3);

  // Exhaustively: a partition is sufficient exactly when it refines the
  // count, and the count is the unique coarsest sufficient partition.
  const std::vector<statistic> parts = tt::all_partitions(fam.obs_axes[0]);
  REQUIRE(parts.size() == 15);
  std::vector<statistic> passing;
  for (const statistic& p : parts) {
    const bool suff = is_sufficient(fam, p).holds;
    CHECK(suff == is_coarsening(count, p));
    if (suff) passing.push_back(p);
  }
  REQUIRE(passing.size() == 2);  // the count and the identity
  for (const statistic& p : passing) CHECK(is_coarsening(minimal, p));
  int coarsest_count = 0;
  for (const statistic& p : passing) {
    bool coarsens_all = true;
    for (const statistic& q : passing)
      if (!is_coarsening(p, q)) coarsens_all = false;
    if (coarsens_all) {
      ++coarsest_count;
      CHECK(p.same_partition(minimal));
    }
  }
  CHECK(coarsest_count == 1);
}

TEST_CASE("the minimal partition ignores the prior") {
  const param_family base = tt::two_bit_bernoulli();
  const param_family skewed =
      build_family(base.theta, {0.9, 0.1}, base.obs_axes, base.cond);
  CHECK(minimal_sufficient(skewed).same_partition(minimal_sufficient(base)));
}

TEST_CASE("proportional grouping keys on support and one constant") {
  CHECK(group_proportional_rows({{0, 0}, {1, 2}, {2, 4}, {3, 0}}) ==
        std::vector<int>{2, 0, 0, 1});
  CHECK(group_proportional_rows({{0, 0}, {0, 0}}) == std::vector<int>{0, 0});
  CHECK(group_proportional_rows({{1, 2}, {1, 2 * (1 + 1e-12)}}) ==
        std::vector<int>{0, 0});
  CHECK(group_proportional_rows({{1, 2}, {1, 2.0001}}) ==
        std::vector<int>{0, 1});
  CHECK(group_proportional_rows({{1, 0}, {1, 1}}) == std::vector<int>{0, 1});
}

TEST_CASE("dead observation points land in a null class") {
  const alphabet theta{"theta", {"0", "1"}};
  const alphabet x{"x", {"a", "b", "c"}};
  const param_family tail_dead =
      build_family(theta, {0.5, 0.5}, {x}, {0.5, 0.5, 0, 0.2, 0.8, 0});
  CHECK(minimal_sufficient(tail_dead).labels() == std::vector<int>{0, 1, 2});

  const param_family head_dead =
      build_family(theta, {0.5, 0.5}, {x}, {0, 0.5, 0.5, 0, 0.2, 0.8});
  CHECK(minimal_sufficient(head_dead).labels() == std::vector<int>{0, 1, 2});
  // Either way the null point sits alone and the live rows keep their split.
  CHECK(is_sufficient(head_dead, minimal_sufficient(head_dead)).holds);
}

TEST_CASE("hidden-switch decomposition verifies and the direct chain fails") {
  const hci_model h = tt::hidden_switch(1);
  const auto [theta_chain, xy_chain] = verify_hci(h);
  CHECK(theta_chain.holds);
  CHECK(xy_chain.holds);

  // Without the hidden layer, X alone does not screen theta from Y.
  const markov_verdict direct =
      check_markov(h.family.joint(), {"theta"}, {"x"}, {"y"});
  CHECK_FALSE(direct.holds);
  CHECK(std::abs(direct.cmi_bits - 0.0812427456505176) <= 1e-12);

  const double i_joint = cmi_bits(h.family.joint(), {"theta"}, {"x", "y"}, {});
  CHECK(std::abs(i_joint - 0.19995184641982508) <= 1e-12);
}

TEST_CASE("channel pairs that do not compose are rejected") {
  const hci_model h = tt::hidden_switch(1);
  std::vector<double> wrong_pw = {0.8, 0.2, 0.2, 0.8};
  CHECK(tt::thrown_code([&] {
          make_hci(h.family, h.w, wrong_pw, h.p_obs_given_w);
        }) == "COMPOSITION_MISMATCH");
}

TEST_CASE("two-sample pipeline: local counts carry the fused conclusion") {
  const hci_model h = tt::hidden_switch(2);
  const statistic tw = statistic::identity(h.w);
  const statistic count = tt::count_stat(h.family.obs_axes[0]);
  const statistic parity = tt::parity_stat(h.family.obs_axes[0]);

  const theorem1_report good = theorem1_check(h, tw, count, count);
  CHECK(good.premises_hold());
  CHECK(good.conclusion.holds);
  CHECK(good.conclusion.cmi_bits <= 1e-9);

  const theorem1_report bad = theorem1_check(h, tw, parity, count);
  CHECK_FALSE(bad.tx_local.holds);
  CHECK(std::abs(bad.tx_local.cmi_bits - 0.331877754) <= 1e-8);
  CHECK_FALSE(bad.conclusion.holds);
  CHECK(std::abs(bad.conclusion.cmi_bits - 0.110430997) <= 1e-8);
  CHECK(bad.conclusion.cmi_bits > 1e-3);
}

TEST_CASE("one-sample pipeline accepts identity statistics everywhere") {
  const hci_model h = tt::hidden_switch(1);
  const statistic tw = statistic::identity(h.w);
  const statistic tx = statistic::identity(h.family.obs_axes[0]);
  const statistic ty = statistic::identity(h.family.obs_axes[1]);
  const theorem1_report r = theorem1_check(h, tw, tx, ty);
  CHECK(r.premises_hold());
  CHECK(r.conclusion.holds);
}

TEST_CASE("conditional sufficiency of the count given the other node") {
  const param_family fam = tt::hidden_switch(2).family;
  const statistic count = tt::count_stat(fam.obs_axes[0]);
  const statistic parity = tt::parity_stat(fam.obs_axes[0]);

  const markov_verdict vc = is_conditionally_sufficient(fam, count, "x", "y");
  CHECK(vc.holds);
  CHECK(vc.cmi_bits <= 1e-12);

  const markov_verdict vp = is_conditionally_sufficient(fam, parity, "x", "y");
  CHECK_FALSE(vp.holds);
  CHECK(vp.cmi_bits > 1e-3);
}

TEST_CASE("ratio evidence matches the chain criterion on both fixtures") {
  for (const param_family& fam :
       {tt::hidden_switch(2).family, tt::opposing_ramps()}) {
    for (const statistic& tx : tt::all_partitions(fam.obs_axes[0])) {
      const bool by_ratio = conditional_ratio_test(fam, tx, "x", "y");
      const bool by_chain =
          is_conditionally_sufficient(fam, tx, "x", "y").holds;
      CHECK(by_ratio == by_chain);
    }
  }
}

TEST_CASE("pair factorization agrees with the direct chain check") {
  const param_family fam = tt::opposing_ramps();
  const statistic ty = statistic::identity(fam.obs_axes[1]);
  int holding = 0;
  for (const statistic& tx : tt::all_partitions(fam.obs_axes[0])) {
    const theorem2_report r = theorem2_check(fam, tx, ty, "x", "y");
    CHECK(r.ty_precondition.holds);
    CHECK(r.agree);
    CHECK(r.factorization == r.direct.holds);
    if (r.direct.holds) {
      ++holding;
      CHECK(tx.num_classes() == 4);  // every ratio is distinct
    }
  }
  CHECK(holding == 1);
}

TEST_CASE("a sufficient pair leaves its x-component conditionally sufficient") {
  const param_family fam = tt::hidden_switch(2).family;
  const statistic count = tt::count_stat(fam.obs_axes[1]);
  const statistic idy = statistic::identity(fam.obs_axes[1]);
  int holding = 0;
  for (const statistic& ty : {idy, count}) {
    for (const statistic& tx : tt::all_partitions(fam.obs_axes[0])) {
      const theorem2_report r = theorem2_check(fam, tx, ty, "x", "y");
      CHECK(r.agree);
      if (r.direct.holds) {
        ++holding;
        CHECK(is_conditionally_sufficient(fam, tx, "x", "y").holds);
      }
    }
  }
  CHECK(holding >= 2);  // at least the identity and the count survive
}

TEST_CASE("a y-statistic that is not locally sufficient is rejected") {
  const param_family fam = tt::hidden_switch(2).family;
  const statistic tx = tt::count_stat(fam.obs_axes[0]);
  const statistic ty = tt::parity_stat(fam.obs_axes[1]);
  CHECK(tt::thrown_code([&] { theorem2_check(fam, tx, ty, "x", "y"); }) ==
        "PRECONDITION_FAILED");
}

TEST_CASE("statistics sufficient for the hidden layer transfer to theta") {
  rng_stream g(77, 0);
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t nt = 2 + (g.next_u32() % 2);
    const std::size_t nw = 2 + (g.next_u32() % 2);
    const std::size_t nx0 = 2 + (g.next_u32() % 2);
    const std::size_t ny = 2 + (g.next_u32() % 2);

    std::vector<double> pwt;
    for (std::size_t t = 0; t < nt; ++t)
      for (double v : tt::random_simplex(g, nw)) pwt.push_back(v);

    // The last x column is split in two, so the observation product carries a
    // pair of proportional columns the minimal statistic has to merge.
    const double split = 0.2 + 0.6 * g.uniform01();
    std::vector<std::vector<double>> px(nw), py(nw);
    for (std::size_t w = 0; w < nw; ++w) {
      const std::vector<double> base = tt::random_simplex(g, nx0);
      px[w] = base;
      px[w][nx0 - 1] = base[nx0 - 1] * split;
      px[w].push_back(base[nx0 - 1] * (1 - split));
      py[w] = tt::random_simplex(g, ny);
    }
    const std::size_t nx = nx0 + 1;

    std::vector<double> p_obs;
    for (std::size_t w = 0; w < nw; ++w)
      for (std::size_t x = 0; x < nx; ++x)
        for (std::size_t y = 0; y < ny; ++y) p_obs.push_back(px[w][x] * py[w][y]);

    std::vector<double> cond(nt * nx * ny, 0.0);
    for (std::size_t t = 0; t < nt; ++t)
      for (std::size_t c = 0; c < nx * ny; ++c)
        for (std::size_t w = 0; w < nw; ++w)
          cond[t * nx * ny + c] += pwt[t * nw + w] * p_obs[w * nx * ny + c];

    const std::vector<alphabet> obs = {tt::numbered("x", nx),
                                       tt::numbered("y", ny)};
    const alphabet w_axis = tt::numbered("w", nw);
    param_family fam = build_family(tt::numbered("theta", nt),
                                    tt::random_simplex(g, nt), obs, cond);
    const hci_model h = make_hci(fam, w_axis, pwt, p_obs);

    const param_family wfam = build_family(
        w_axis, std::vector<double>(nw, 1.0 / nw), obs, h.p_obs_given_w);
    const statistic t = minimal_sufficient(wfam);
    CHECK(t.num_classes() < static_cast<int>(nx * ny));
    CHECK(is_sufficient(wfam, t).holds);
    CHECK(is_sufficient(h.family, t).holds);
  }
}

TEST_CASE("refining a sufficient statistic keeps it sufficient") {
  rng_stream g(78, 0);
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t nt = 2 + (g.next_u32() % 2);
    // Duplicate a column so the minimal partition has a class to split.
    const std::size_t nb = 3;
    std::vector<double> cond;
    std::vector<std::vector<double>> rows(nt);
    for (std::size_t t = 0; t < nt; ++t) rows[t] = tt::random_simplex(g, nb);
    for (std::size_t t = 0; t < nt; ++t) {
      for (std::size_t x = 0; x < nb; ++x)
        cond.push_back(x + 1 < nb ? rows[t][x] : rows[t][x] * 0.5);
      cond.push_back(rows[t][nb - 1] * 0.5);
    }
    const param_family fam =
        build_family(tt::numbered("theta", nt), tt::random_simplex(g, nt),
                     {tt::numbered("x", nb + 1)}, cond);
    const statistic t = minimal_sufficient(fam);
    REQUIRE(t.num_classes() < static_cast<int>(nb + 1));

    std::vector<int> split = t.labels();
    for (int c = 0; c < t.num_classes(); ++c) {
      int first = -1;
      for (std::size_t i = 0; i < split.size(); ++i) {
        if (split[i] != c) continue;
        if (first < 0) {
          first = static_cast<int>(i);
        } else {
          split[i] = t.num_classes() + c;  // break the class after its head
        }
      }
    }
    const statistic u = statistic::from_labels(t.domain(), split);
    CHECK(is_coarsening(t, u));
    CHECK(is_sufficient(fam, u).holds);
  }
}

TEST_CASE("minimal conditional partition of the discretized triangle") {
  const std::vector<double> thetas = {0.0, 1.0 / 6.0};
  const param_family fam = triangle_grid_family(6, 2, thetas);
  const statistic t = minimal_conditional_sufficient(fam, "x", "y");

  // Independent reconstruction from the grid geometry: a coordinate is usable
  // under theta when it fits below theta+1 with a grid point between it and
  // theta; pairs usable under neither theta are null, and the live pairs
  // split on whether their larger coordinate clears the smaller support edge.
  const double top = 1.0 / 6.0 + 1.0;
  std::vector<double> centers(6);
  for (int k = 0; k < 6; ++k) centers[k] = (2 * k + 1) * top / 12.0;
  auto usable = [&](double theta, int i) {
    if (!(centers[i] < theta + 1.0)) return false;
    for (int k = 0; k < 6; ++k)
      if (theta < centers[k] && centers[k] < centers[i]) return true;
    return false;
  };
  std::vector<int> labels(36);
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) {
      bool alive = false;
      for (double th : thetas)
        if (usable(th, i) && usable(th, j)) alive = true;
      const double mx = std::max(centers[i], centers[j]);
      labels[i * 6 + j] = !alive ? 7 : (mx > 1.0 ? 9 : 8);
    }
  }
  const statistic expected =
      statistic::from_labels(fam.obs_axes[0], labels);
  CHECK(t.same_partition(expected));

  std::vector<int> sizes(t.num_classes(), 0);
  for (int l : t.labels()) ++sizes[l];
  CHECK(sizes == std::vector<int>{13, 16, 7});

  const markov_verdict v = is_conditionally_sufficient(fam, t, "x", "y");
  CHECK(v.holds);
  CHECK(v.cmi_bits <= 1e-9);
  CHECK(conditional_ratio_test(fam, t, "x", "y"));

  // Collapsing everything is far from sufficient on this family.
  const statistic flat = statistic::constant(fam.obs_axes[0]);
  const markov_verdict vflat =
      is_conditionally_sufficient(fam, flat, "x", "y");
  CHECK_FALSE(vflat.holds);
  CHECK(std::abs(vflat.cmi_bits - 0.15694966075839437) <= 1e-12);
}

TEST_CASE("conditional operations need the two named observation axes") {
  const param_family fam = tt::two_bit_bernoulli();
  const statistic t = tt::count_stat(fam.obs_axes[0]);
  CHECK(tt::thrown_code([&] { conditional_ratio_test(fam, t, "x", "y"); }) ==
        "SHAPE_MISMATCH");
  const param_family dep = tt::hidden_switch(2).family;
  const statistic tc = tt::count_stat(dep.obs_axes[0]);
  CHECK(tt::thrown_code([&] {
          minimal_conditional_sufficient(dep, "x", "nope");
        }) == "UNKNOWN_AXIS");
  CHECK(is_conditionally_sufficient(dep, tc, "x", "y").holds);
}
