#include "meshcoop/partition.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "meshcoop/error.hpp"
#include "meshcoop/random.hpp"
#include "support/fixtures.hpp"
#include "support/random_games.hpp"

namespace meshcoop {
namespace {

// Bell numbers by the Bell triangle.
std::size_t bell(int n) {
  std::vector<std::size_t> row{1};
  for (int i = 0; i < n; ++i) {
    std::vector<std::size_t> next{row.back()};
    for (std::size_t v : row) next.push_back(next.back() + v);
    row = std::move(next);
  }
  return row.front();
}

TEST(EnumeratePartitions, CountsMatchBellNumbers) {
  EXPECT_EQ(enumerate_partitions(1).size(), 1u);
  EXPECT_EQ(enumerate_partitions(3).size(), 5u);
  EXPECT_EQ(enumerate_partitions(4).size(), 15u);
  for (int n = 1; n <= 9; ++n) EXPECT_EQ(enumerate_partitions(n).size(), bell(n)) << n;
  EXPECT_THROW(enumerate_partitions(13), SizeError);
  EXPECT_THROW(enumerate_partitions(0), DomainError);
}

TEST(EnumeratePartitions, BlocksPartitionThePlayers) {
  for (int n = 1; n <= 7; ++n) {
    std::set<std::string> seen;
    for (const auto& cs : enumerate_partitions(n)) {
      Coalition all;
      for (const auto& b : cs.blocks) {
        EXPECT_FALSE(b.empty());
        EXPECT_TRUE(all.disjoint(b));
        all = all | b;
      }
      EXPECT_EQ(all, Coalition::grand(n));
      EXPECT_TRUE(seen.insert(cs.to_string()).second);
    }
  }
}

TEST(EnumeratePartitions, CanonicalOrderForThree) {
  std::vector<std::string> names;
  for (const auto& cs : enumerate_partitions(3)) names.push_back(cs.to_string());
  EXPECT_EQ(names, (std::vector<std::string>{"{{1},{2},{3}}", "{{1},{2,3}}", "{{1,2},{3}}", "{{1,3},{2}}",
                                             "{{1,2,3}}"}));
}

TEST(StructureTable, CaseStudyShapleyColumns) {
  const auto cf = testing::case_study_cf();
  const PayoffMatrix t = structure_table(cf, BlockPricer{});
  ASSERT_EQ(t.rows.size(), 5u);

  const PayoffRow& singles = t.rows.front();
  EXPECT_EQ(singles.shapley, (std::vector<double>{767, 1101, 976}));
  EXPECT_EQ(singles.dual_payoff, (std::vector<double>{767, 1101, 976}));
  EXPECT_DOUBLE_EQ(singles.value, 2844.0);

  const PayoffRow& w2 = t.rows[2];
  EXPECT_EQ(w2.structure.to_string(), "{{1,2},{3}}");
  EXPECT_NEAR(w2.shapley[0], 783.5, 1e-9);
  EXPECT_NEAR(w2.shapley[1], 1117.5, 1e-9);
  EXPECT_EQ(w2.shapley[2], 976.0);
  EXPECT_TRUE(std::isnan(w2.dual_payoff[0]));
  EXPECT_EQ(w2.dual_payoff[2], 976.0);
  EXPECT_DOUBLE_EQ(w2.value, 2877.0);

  const PayoffRow& grand = t.rows.back();
  EXPECT_NEAR(grand.shapley[0], 817.0 + 1.0 / 6.0, 1e-6);
  EXPECT_DOUBLE_EQ(grand.value, 3062.0);
  for (const auto& r : t.rows) EXPECT_LE(r.value, grand.value);
}

TEST(StructureTable, RowInvariantsOnNetworks) {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const Network net = build_network(generate_random(3, 20, 3, Params{}, seed));
    const auto cf = characteristic_function(net, DemandMode::elastic);
    const PayoffMatrix t = structure_table(net, cf);
    ASSERT_EQ(t.rows.size(), 5u);
    double best = -1e300;
    for (const auto& r : t.rows) {
      double mu = 0.0, phi = 0.0;
      for (int m = 0; m < 3; ++m) {
        mu += r.dual_payoff[static_cast<std::size_t>(m)];
        phi += r.shapley[static_cast<std::size_t>(m)];
      }
      const double tol = 1e-6 * std::max(1.0, r.value);
      EXPECT_NEAR(mu, r.value, tol);
      EXPECT_NEAR(phi, r.value, tol);
      for (const auto& b : r.structure.blocks) {
        double block_mu = 0.0;
        for (ProviderId m : b.members()) block_mu += r.dual_payoff[static_cast<std::size_t>(m - 1)];
        EXPECT_NEAR(block_mu, cf(b), 1e-6 * std::max(1.0, cf(b)));
      }
      best = std::max(best, r.value);
    }
    EXPECT_NEAR(t.rows.back().value, best, 1e-6);
    for (int m = 1; m <= 3; ++m) {
      EXPECT_EQ(t.rows.front().dual_payoff[static_cast<std::size_t>(m - 1)], cf(Coalition::singleton(m)));
    }
  }
}

TEST(StructureTable, MergingBlocksNeverLosesValue) {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const auto cf = testing::random_superadditive_cf(4, rng);
    const PayoffMatrix t = structure_table(cf, BlockPricer{});
    auto value_of = [&](const std::vector<Coalition>& blocks) {
      double v = 0.0;
      for (Coalition b : blocks) v += cf(b);
      return v;
    };
    for (const auto& r : t.rows) {
      const auto& b = r.structure.blocks;
      for (std::size_t i = 0; i < b.size(); ++i) {
        for (std::size_t j = i + 1; j < b.size(); ++j) {
          std::vector<Coalition> merged;
          for (std::size_t k = 0; k < b.size(); ++k) {
            if (k != i && k != j) merged.push_back(b[k]);
          }
          merged.push_back(b[i] | b[j]);
          EXPECT_GE(value_of(merged), r.value - 1e-9);
        }
      }
    }
  }
}

TEST(StructureTable, PricerIsCalledPerBlock) {
  const auto cf = testing::case_study_cf();
  int calls = 0;
  const PayoffMatrix t = structure_table(cf, [&](Coalition block) {
    ++calls;
    std::vector<double> mu(3, 0.0);
    for (ProviderId m : block.members()) mu[static_cast<std::size_t>(m - 1)] = cf(block) / block.size();
    return mu;
  });
  EXPECT_EQ(calls, 4);  // three pairs and the grand coalition
  EXPECT_NEAR(t.rows.back().dual_payoff[0], 3062.0 / 3.0, 1e-9);
}

}  // namespace
}  // namespace meshcoop
