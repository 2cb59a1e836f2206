#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "epsmatch/error.hpp"
#include "epsmatch/market.hpp"
#include "epsmatch/market_io.hpp"

using namespace epsmatch;

namespace {

Market make(std::size_t n, std::size_t k, std::vector<std::vector<double>> x,
            std::vector<std::vector<double>> y) {
  Matrix mx(n, n + k), my(n, n + k);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n + k; ++j) {
      mx(i, j) = x[i][j];
      my(i, j) = y[i][j];
    }
  }
  return Market(n, k, mx, my);
}

}  // namespace

TEST(GenerateMarket, SingleEntryShape) {
  const Market m = generate_market(1, 0, Seed{1, 0});
  EXPECT_EQ(m.firms(), 1u);
  EXPECT_EQ(m.workers(), 1u);
  EXPECT_GT(m.x()(0, 0), 0.0);
  EXPECT_LT(m.x()(0, 0), 1.0);
  EXPECT_GT(m.y()(0, 0), 0.0);
  EXPECT_LT(m.y()(0, 0), 1.0);
}

TEST(GenerateMarket, ShapeAndDistinctEntries) {
  const Market m = generate_market(3, 2, Seed{2, 0});
  EXPECT_EQ(m.x().rows(), 3u);
  EXPECT_EQ(m.x().cols(), 5u);
  EXPECT_EQ(m.y().rows(), 3u);
  EXPECT_EQ(m.y().cols(), 5u);
  std::set<double> all(m.x().data().begin(), m.x().data().end());
  all.insert(m.y().data().begin(), m.y().data().end());
  EXPECT_EQ(all.size(), 30u);
}

TEST(GenerateMarket, Deterministic) {
  EXPECT_EQ(generate_market(2, 0, Seed{77, 3}), generate_market(2, 0, Seed{77, 3}));
  EXPECT_NE(generate_market(2, 0, Seed{77, 3}), generate_market(2, 0, Seed{77, 4}));
}

TEST(GenerateMarket, RejectsZeroFirms) {
  EXPECT_THROW(generate_market(0, 3, Seed{}), InvalidArgument);
}

TEST(GenerateMarket, NoTiesOverManyMarkets) {
  // The Market constructor rejects ties; reaching the end means none occurred.
  for (std::uint64_t s = 0; s < 10000; ++s) {
    const Market m = generate_market(10, 3, Seed{s, 11});
    for (std::size_t i = 0; i < 10; ++i) {
      const auto order = preference_order(m, Side::Firm, i);
      for (std::size_t r = 1; r < order.size(); ++r) {
        ASSERT_LT(m.x()(i, order[r - 1]), m.x()(i, order[r]));
      }
    }
  }
}

TEST(Market, RejectsOutOfRangeEntries) {
  EXPECT_THROW(make(1, 0, {{0.0}}, {{0.5}}), InvalidArgument);
  EXPECT_THROW(make(1, 0, {{0.5}}, {{1.0}}), InvalidArgument);
}

TEST(Market, RejectsTies) {
  EXPECT_THROW(make(1, 1, {{0.3, 0.3}}, {{0.1, 0.2}}), InvalidArgument);
  EXPECT_THROW(make(2, 0, {{0.1, 0.2}, {0.3, 0.4}}, {{0.5, 0.1}, {0.5, 0.2}}), InvalidArgument);
  // Equal values across different X rows are allowed.
  EXPECT_NO_THROW(make(2, 0, {{0.1, 0.2}, {0.1, 0.2}}, {{0.5, 0.1}, {0.6, 0.2}}));
}

TEST(PreferenceOrder, FirmSortsRowAscending) {
  const Market m = make(1, 2, {{0.7, 0.2, 0.9}}, {{0.1, 0.2, 0.3}});
  EXPECT_EQ(preference_order(m, Side::Firm, 0), (std::vector<std::size_t>{1, 0, 2}));
}

TEST(PreferenceOrder, WorkerSortsColumnAscending) {
  const Market m = make(2, 0, {{0.1, 0.2}, {0.3, 0.4}}, {{0.5, 0.9}, {0.1, 0.8}});
  EXPECT_EQ(preference_order(m, Side::Worker, 0), (std::vector<std::size_t>{1, 0}));
}

TEST(PreferenceOrder, SingleFirm) {
  const Market m = make(1, 2, {{0.7, 0.2, 0.9}}, {{0.1, 0.2, 0.3}});
  for (std::size_t j = 0; j < 3; ++j) {
    EXPECT_EQ(preference_order(m, Side::Worker, j), (std::vector<std::size_t>{0}));
  }
}

TEST(PreferenceOrder, OutOfRange) {
  const Market m = generate_market(2, 1, Seed{});
  EXPECT_THROW(preference_order(m, Side::Firm, 2), InvalidArgument);
  EXPECT_THROW(preference_order(m, Side::Worker, 3), InvalidArgument);
}

TEST(Utility, Examples) {
  EXPECT_NEAR(utility(1.0 / std::numbers::e, 1.0), 1.0, 1e-15);
  EXPECT_NEAR(utility(std::exp(-2.0), 2.0), 1.0, 1e-15);
  EXPECT_NEAR(utility(0.5, 1.0), std::numbers::ln2, 1e-15);
  EXPECT_THROW(utility(0.0, 1.0), InvalidArgument);
  EXPECT_THROW(utility(1.0, 1.0), InvalidArgument);
  EXPECT_THROW(utility(0.5, 0.0), InvalidArgument);
}

TEST(Utility, OrderReversing) {
  CounterRng r(Seed{12, 0});
  for (int t = 0; t < 10000; ++t) {
    const double a = r.uniform_open();
    const double b = r.uniform_open();
    if (a == b) continue;
    ASSERT_EQ(a < b, utility(a, 1.7) > utility(b, 1.7));
  }
}

TEST(EpsParams, DerivedDiscounts) {
  const EpsParams e(0.25, 2.0);
  EXPECT_DOUBLE_EQ(e.q(), std::exp(-0.5));
  EXPECT_DOUBLE_EQ(e.p(), std::exp(-1.0));
  EXPECT_NEAR(e.q() * e.q(), e.p(), 1e-12);
  EXPECT_NO_THROW(e.validate());
  const EpsParams z(0.0, 3.0);
  EXPECT_EQ(z.p(), 1.0);
  EXPECT_EQ(z.q(), 1.0);
}

TEST(EpsParams, RejectsBadInputs) {
  EXPECT_THROW(EpsParams(-0.1, 1.0), InvalidArgument);
  EXPECT_THROW(EpsParams(0.1, 0.0), InvalidArgument);
  EXPECT_THROW(EpsParams(0.1, -1.0), InvalidArgument);
}

TEST(EpsParams, ValidateCatchesCorruption) {
  EXPECT_THROW(EpsParams::unchecked(0.5, 1.0, std::exp(-1.0), 0.9).validate(), InvalidArgument);
  EXPECT_THROW(EpsParams::unchecked(0.0, 1.0, 0.5, std::sqrt(0.5)).validate(), InvalidArgument);
  EXPECT_THROW(EpsParams::unchecked(0.5, 1.0, 1.5, 1.2).validate(), InvalidArgument);
}

TEST(EpsParams, HugeProductStaysPositive) {
  const EpsParams e(1000.0, 1.0);
  EXPECT_GT(e.p(), 0.0);
  EXPECT_GT(e.q(), 0.0);
  EXPECT_NO_THROW(e.validate());
}

TEST(Matching, ValidatesInjection) {
  EXPECT_THROW(Matching({0, 0}, 2), InvalidArgument);
  EXPECT_THROW(Matching({0, 2}, 2), InvalidArgument);
  EXPECT_THROW(Matching({0, 1, 2}, 2), InvalidArgument);
  const Matching m({2, 0}, 3);
  EXPECT_EQ(m.partner_of_worker(2), 0u);
  EXPECT_EQ(m.partner_of_worker(0), 1u);
  EXPECT_FALSE(m.partner_of_worker(1).has_value());
}

TEST(MarketJson, RoundTripIsExact) {
  const Market m = generate_market(4, 2, Seed{99, 1});
  const std::string text = market_to_json(m);
  EXPECT_EQ(market_from_json(text), m);
  EXPECT_EQ(market_to_json(market_from_json(text)), text);
}

TEST(MarketJson, RejectsMalformed) {
  EXPECT_THROW(market_from_json("{"), InvalidArgument);
  EXPECT_THROW(market_from_json(R"({"n":1,"k":0,"x":[[0.5]]})"), InvalidArgument);
  EXPECT_THROW(market_from_json(R"({"n":1,"k":0,"x":[[0.5,0.2]],"y":[[0.5]]})"), InvalidArgument);
  EXPECT_THROW(market_from_json(R"({"n":1,"k":0,"x":[[1.5]],"y":[[0.5]]})"), InvalidArgument);
  EXPECT_THROW(market_from_json(R"({"n":0,"k":0,"x":[],"y":[]})"), InvalidArgument);
}

TEST(MatchingText, ParseAndFormat) {
  const Matching m = parse_matching("3,1", 3);
  EXPECT_EQ(m.partner_of_firm(0), 2u);
  EXPECT_EQ(format_matching(m), "3,1");
  EXPECT_THROW(parse_matching("0,1", 2), InvalidArgument);
  EXPECT_THROW(parse_matching("1,x", 2), InvalidArgument);
  EXPECT_THROW(parse_matching("1,1", 2), InvalidArgument);
}
