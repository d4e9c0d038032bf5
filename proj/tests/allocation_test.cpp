#include "meshcoop/allocation.hpp"

#include <gtest/gtest.h>

#include <numeric>

#include "meshcoop/error.hpp"
#include "meshcoop/random.hpp"
#include "support/fixtures.hpp"
#include "support/random_games.hpp"

namespace meshcoop {
namespace {

using testing::case_study_cf;

Allocation payoffs(std::vector<double> x) {
  Allocation a;
  a.payoffs = std::move(x);
  return a;
}

// Shapley value as the average marginal vector over all M! join orders.
std::vector<double> shapley_by_orders(const CharacteristicFunction& cf) {
  const int n = cf.providers();
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 1);
  std::vector<double> phi(static_cast<std::size_t>(n), 0.0);
  double count = 0.0;
  do {
    Coalition s;
    for (int m : order) {
      phi[static_cast<std::size_t>(m - 1)] += cf(s.with(m)) - cf(s);
      s = s.with(m);
    }
    count += 1.0;
  } while (std::next_permutation(order.begin(), order.end()));
  for (double& p : phi) p /= count;
  return phi;
}

TEST(MarginalContribution, Examples) {
  const auto cf = case_study_cf();
  EXPECT_NEAR(marginal_contribution(cf, 1, Coalition::of({2, 3})), 855.0, 1e-9);
  for (int m = 1; m <= 3; ++m) EXPECT_EQ(marginal_contribution(cf, m, Coalition{}), cf(Coalition::singleton(m)));
  EXPECT_THROW(marginal_contribution(cf, 1, Coalition::of({1, 2})), DomainError);
}

TEST(MarginalContribution, NonNegativeOnToolkitGames) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Network net = build_network(generate_random(3, 20, 3, Params{}, seed));
    const auto cf = characteristic_function(net, DemandMode::elastic);
    for (Coalition::Mask s = 0; s < 8; ++s) {
      for (int m = 1; m <= 3; ++m) {
        if (Coalition::from_mask(s).contains(m)) continue;
        EXPECT_GE(marginal_contribution(cf, m, Coalition::from_mask(s)), -1e-6);
      }
    }
  }
}

TEST(Shapley, CaseStudyValues) {
  const Allocation phi = shapley(case_study_cf());
  EXPECT_EQ(phi.method, AllocationMethod::shapley);
  EXPECT_NEAR(phi[1], 817.0 + 1.0 / 6.0, 1e-6);
  EXPECT_NEAR(phi[2], 1170.0 + 1.0 / 6.0, 1e-6);
  EXPECT_NEAR(phi[3], 1074.0 + 2.0 / 3.0, 1e-6);
  EXPECT_NEAR(phi.total(), 3062.0, 1e-9);
}

TEST(Shapley, SymmetricPair) {
  const auto cf = CharacteristicFunction::from_values(
      2, {{Coalition::of({1}), 3.0}, {Coalition::of({2}), 3.0}, {Coalition::of({1, 2}), 10.0}});
  const Allocation phi = shapley(cf);
  EXPECT_DOUBLE_EQ(phi[1], 5.0);
  EXPECT_DOUBLE_EQ(phi[2], 5.0);
}

TEST(Shapley, IncompleteGameNamesMissing) {
  CharacteristicFunction cf(2);
  cf.set(Coalition::of({1}), 1.0);
  try {
    shapley(cf);
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("{2}"), std::string::npos);
  }
}

TEST(Shapley, MatchesJoinOrderAverage) {
  Rng rng(17);
  for (int n = 1; n <= 6; ++n) {
    const auto cf = testing::random_cf(n, rng);
    const auto expected = shapley_by_orders(cf);
    const Allocation phi = shapley(cf);
    for (int m = 1; m <= n; ++m) EXPECT_NEAR(phi[m], expected[static_cast<std::size_t>(m - 1)], 1e-9);
  }
}

TEST(ShapleyAxioms, RandomSuperadditiveGames) {
  Rng rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 5;
    const auto v = testing::random_superadditive_cf(n, rng);
    const auto w = testing::random_superadditive_cf(n, rng);
    const Allocation pv = shapley(v);
    const Allocation pw = shapley(w);
    const double scale_v = std::max(1.0, std::abs(v(v.grand())));

    // efficiency and individual fairness
    EXPECT_NEAR(pv.total(), v(v.grand()), 1e-9 * scale_v);
    for (int m = 1; m <= n; ++m) EXPECT_GE(pv[m], v(Coalition::singleton(m)) - 1e-6);

    // additivity and scale covariance
    CharacteristicFunction sum(n), scaled(n);
    const double alpha = rng.uniform(0.1, 10.0);
    for (Coalition::Mask s = 1; s < (Coalition::Mask{1} << n); ++s) {
      const Coalition c = Coalition::from_mask(s);
      sum.set(c, v(c) + w(c));
      scaled.set(c, alpha * v(c));
    }
    const Allocation ps = shapley(sum);
    const Allocation pa = shapley(scaled);
    for (int m = 1; m <= n; ++m) {
      EXPECT_NEAR(ps[m], pv[m] + pw[m], 1e-9 * scale_v);
      EXPECT_NEAR(pa[m], alpha * pv[m], 1e-9 * alpha * scale_v);
    }

    // symmetry: make players 1 and 2 interchangeable by symmetrising v
    CharacteristicFunction sym(n);
    auto swap12 = [](Coalition c) {
      Coalition out = c.without(1).without(2);
      if (c.contains(1)) out = out.with(2);
      if (c.contains(2)) out = out.with(1);
      return out;
    };
    for (Coalition::Mask s = 1; s < (Coalition::Mask{1} << n); ++s) {
      const Coalition c = Coalition::from_mask(s);
      sym.set(c, v(c) + v(swap12(c)));
    }
    const Allocation psym = shapley(sym);
    EXPECT_NEAR(psym[1], psym[2], 1e-9 * scale_v);

    // dummy: append a player whose contribution is always its own value
    const double d = rng.uniform(0.0, 50.0);
    CharacteristicFunction dummy(n + 1);
    for (Coalition::Mask s = 1; s < (Coalition::Mask{1} << (n + 1)); ++s) {
      const Coalition c = Coalition::from_mask(s);
      const Coalition base = c.without(n + 1);
      dummy.set(c, (base.empty() ? 0.0 : v(base)) + (c.contains(n + 1) ? d : 0.0));
    }
    const Allocation pd = shapley(dummy);
    EXPECT_NEAR(pd[n + 1], d, 1e-9 * scale_v);
    for (int m = 1; m <= n; ++m) EXPECT_NEAR(pd[m], pv[m], 1e-9 * scale_v);
  }
}

TEST(Shapley, SubGameOnPlayers) {
  const auto cf = case_study_cf();
  const Allocation phi = shapley(cf, Coalition::of({1, 2}));
  EXPECT_NEAR(phi[1], 783.5, 1e-9);
  EXPECT_NEAR(phi[2], 1117.5, 1e-9);
  EXPECT_EQ(phi[3], 0.0);
  EXPECT_EQ(shapley(cf, Coalition{}).total(), 0.0);
  EXPECT_THROW(shapley(cf, Coalition::of({4})), DomainError);
}

TEST(Shapley, SixteenPlayersStaysEfficient) {
  Rng rng(1);
  const auto cf = testing::random_superadditive_cf(16, rng, 1.0);
  const Allocation phi = shapley(cf);
  EXPECT_NEAR(phi.total(), cf(cf.grand()), 1e-9 * cf(cf.grand()));
}

TEST(IsImputation, CaseStudy) {
  const auto cf = case_study_cf();
  EXPECT_TRUE(is_imputation(cf, payoffs({855, 1149, 1058})));
  EXPECT_FALSE(is_imputation(cf, payoffs({767, 1101, 976})));
  EXPECT_FALSE(is_imputation(cf, payoffs({700, 1200, 1162})));
  const auto one = CharacteristicFunction::from_values(1, {{Coalition::of({1}), 42.0}});
  EXPECT_TRUE(is_imputation(one, payoffs({42.0})));
  EXPECT_FALSE(is_imputation(cf, payoffs({1.0, 2.0})));
}

TEST(InCore, CaseStudy) {
  const auto cf = case_study_cf();
  const CoreReport dual = in_core(cf, payoffs({855, 1149, 1058}));
  EXPECT_TRUE(dual.in_core);
  EXPECT_TRUE(dual.violated_coalitions.empty());
  EXPECT_NEAR(dual.efficiency_gap, 0.0, 1e-9);
  EXPECT_TRUE(in_core(cf, shapley(cf)).in_core);

  const CoreReport low = in_core(cf, payoffs({760, 1150, 1152}));
  EXPECT_FALSE(low.in_core);
  ASSERT_FALSE(low.violated_coalitions.empty());
  EXPECT_EQ(low.violated_coalitions[0].coalition, Coalition::of({1}));
  EXPECT_NEAR(low.violated_coalitions[0].deficit, 7.0, 1e-9);

  const CoreReport singletons = in_core(cf, payoffs({767, 1101, 976}));
  EXPECT_FALSE(singletons.is_imputation);
  EXPECT_FALSE(singletons.in_core);
  EXPECT_NEAR(singletons.efficiency_gap, 218.0, 1e-9);
}

TEST(InCore, EmptyCoreGame) {
  // Three-player majority game: every pair is worth the whole pie.
  CharacteristicFunction cf(3);
  for (Coalition::Mask s = 1; s < 8; ++s) {
    const Coalition c = Coalition::from_mask(s);
    cf.set(c, c.size() >= 2 ? 1.0 : 0.0);
  }
  const CoreReport r = in_core(cf, shapley(cf));
  EXPECT_TRUE(r.is_imputation);
  EXPECT_FALSE(r.in_core);
  EXPECT_EQ(r.violated_coalitions.size(), 3u);
}

TEST(DualPayoff, WorkedExample) {
  const Network net = build_network(testing::worked_example_spec());
  const auto cf = characteristic_function(net, DemandMode::elastic);
  const Allocation mu = dual_payoff(net, cf);
  EXPECT_EQ(mu.method, AllocationMethod::dual_payoff);
  EXPECT_NEAR(mu[1], 855.0, 1e-6);
  EXPECT_NEAR(mu[2], 40.0 * 8.0, 1e-6);
  EXPECT_NEAR(mu[3], 30.0 * 7.0, 1e-6);
  EXPECT_NEAR(mu.total(), cf(cf.grand()), 1e-6);
}

TEST(DualPayoff, SingleProvider) {
  const Network net = build_network(testing::line_spec(100.0, 50.0));
  const auto cf = characteristic_function(net, DemandMode::elastic);
  EXPECT_NEAR(dual_payoff(net, cf)[1], cf(Coalition::of({1})), 1e-9);
}

TEST(DualPayoff, IsolatedProvidersGetStandaloneValues) {
  Params params;
  params.area_side_m = 2000.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    NetworkSpec spec = generate_random(3, 12, 2, params, seed);
    for (auto& n : spec.nodes) {
      n.position.x = n.position.x * 0.25 + 650.0 * (n.owner - 1);
    }
    const Network net = build_network(spec);
    const auto cf = characteristic_function(net, DemandMode::elastic);
    const Allocation mu = dual_payoff(net, cf);
    for (int m = 1; m <= 3; ++m) EXPECT_NEAR(mu[m], cf(Coalition::singleton(m)), 1e-6) << seed;
  }
}

TEST(DualPayoff, CoreAndEfficiencyOnRandomInstances) {
  for (std::uint64_t seed = 100; seed < 110; ++seed) {
    const Network net = build_network(generate_random(3, 20, 3, Params{}, seed));
    for (DemandMode mode : {DemandMode::elastic, DemandMode::strict}) {
      CharacteristicFunction cf(3, mode);
      try {
        cf = characteristic_function(net, mode);
      } catch (const InfeasibleDemandError&) {
        continue;
      }
      const Allocation mu = dual_payoff(net, cf);
      const double tol = 1e-6 * std::max(1.0, std::abs(cf(cf.grand())));
      EXPECT_NEAR(mu.total(), cf(cf.grand()), tol);
      EXPECT_NEAR(shapley(cf).total(), cf(cf.grand()), tol);
      if (mode == DemandMode::elastic) {
        EXPECT_TRUE(in_core(cf, mu).in_core) << seed;
        EXPECT_TRUE(is_imputation(cf, mu)) << seed;
      }
    }
  }
}

TEST(DualPayoff, BlockPricingZeroesNonMembers) {
  const Network net = build_network(testing::worked_example_spec());
  const Allocation mu = dual_payoff(net, Coalition::of({1, 3}), DemandMode::elastic);
  EXPECT_NEAR(mu[1], 855.0, 1e-6);
  EXPECT_EQ(mu[2], 0.0);
  EXPECT_NEAR(mu[3], 210.0, 1e-6);
}

TEST(DualPayoff, BindingCapacityIsPricedToTransmitter) {
  // SP1's session crosses SP2's relay whose outgoing link is the bottleneck.
  const Network net = build_network(testing::explicit_spec(
      2, {{1, 1}, {2, 2}, {3, 1}}, {{1, 2, 100}, {2, 3, 30}}, {{"l", 1, 1, 3, 50.0}}));
  const auto cf = characteristic_function(net, DemandMode::elastic);
  EXPECT_NEAR(cf(cf.grand()), 30.0 * 8.0, 1e-9);
  const Allocation mu = dual_payoff(net, cf);
  EXPECT_NEAR(mu.total(), 240.0, 1e-9);
  EXPECT_TRUE(in_core(cf, mu).in_core);
  EXPECT_GT(mu[2], 0.0);
}

}  // namespace
}  // namespace meshcoop
