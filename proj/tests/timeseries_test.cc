/*
 * Copyright 2026 The regime-xai Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "Eigen/Dense"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "regime_xai/timeseries/feature_engineering.h"
#include "regime_xai/timeseries/synthetic.h"
#include "regime_xai/timeseries/time_table.h"
#include "regime_xai/timeseries/timestamp.h"
#include "regime_xai/utils/number_format.h"
#include "test_util.h"

namespace regime_xai::timeseries {
namespace {

using ::testing::ElementsAre;
using ::testing::HasSubstr;

Instant T(const char* text) { return *ParseTimestamp(text); }

std::vector<Instant> HourlyFrom(const char* start, size_t n, int step = 1) {
  std::vector<Instant> out;
  for (size_t i = 0; i < n; ++i) {
    out.push_back(AddHours(T(start), static_cast<long>(i) * step));
  }
  return out;
}

TimeTable Table(const char* start, int res, std::vector<Column> columns) {
  const size_t n = columns.empty() ? 0 : columns.front().values.size();
  auto t = TimeTable::Create(HourlyFrom(start, n, res), res, std::move(columns));
  EXPECT_TRUE(t.ok()) << t.status();
  return *std::move(t);
}

TEST(TimestampTest, RoundTrip) {
  const auto t = ParseTimestamp("2018-10-01T13:05:09Z");
  ASSERT_OK(t);
  EXPECT_EQ(FormatTimestamp(*t), "2018-10-01T13:05:09Z");
  EXPECT_OK(ParseTimestamp("2020-02-29T00:00:00Z"));
}

TEST(TimestampTest, RejectsNonStrictForms) {
  for (const char* bad : {"2018-10-01 13:05:09", "2018-10-01T13:05:09",
                          "2018-10-01T13:05:09+01:00", "2019-02-29T00:00:00Z",
                          "2018-13-01T00:00:00Z", "2018-10-01T24:00:00Z", ""}) {
    EXPECT_FALSE(ParseTimestamp(bad).ok()) << bad;
  }
}

TEST(NumberFormatTest, ShortestRoundTrip) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 123456789.125, 0.0}) {
    const auto back = ParseFiniteDouble(FormatDouble(v));
    ASSERT_TRUE(back.has_value());
    EXPECT_EQ(*back, v);
  }
  EXPECT_EQ(FormatDouble(kMissing), "");
  EXPECT_FALSE(ParseFiniteDouble("nan").has_value());
  EXPECT_FALSE(ParseFiniteDouble("inf").has_value());
  EXPECT_FALSE(ParseFiniteDouble("1.5x").has_value());
}

TEST(LoadTableTest, ParsesHourlyRows) {
  const auto t = ParseTableCsv(
      "timestamp,a,b\n"
      "2018-01-01T00:00:00Z,1,2\n"
      "2018-01-01T01:00:00Z,3,\n"
      "2018-01-01T02:00:00Z,5,6\n",
      1);
  ASSERT_OK(t);
  EXPECT_EQ(t->size(), 3u);
  EXPECT_EQ(t->resolution_hours(), 1);
  EXPECT_THAT(t->ColumnNames(), ElementsAre("a", "b"));
  const auto b = t->column("b");
  ASSERT_OK(b);
  EXPECT_TRUE(IsMissing((*b)[1]));
  EXPECT_EQ(t->MissingCount(), 1u);
}

TEST(LoadTableTest, SortsRows) {
  const auto t = ParseTableCsv(
      "timestamp,a\n"
      "2018-01-01T02:00:00Z,3\n"
      "2018-01-01T00:00:00Z,1\n"
      "2018-01-01T01:00:00Z,2\n",
      1);
  ASSERT_OK(t);
  EXPECT_THAT(std::vector<double>(t->columns()[0].values), ElementsAre(1, 2, 3));
}

TEST(LoadTableTest, ResolutionMismatch) {
  const auto t = ParseTableCsv(
      "timestamp,a\n2018-01-01T00:00:00Z,1\n2018-01-01T02:00:00Z,2\n", 1, "x.csv");
  ASSERT_FALSE(t.ok());
  EXPECT_THAT(std::string(t.status().message()), HasSubstr("Resolution mismatch"));
}

TEST(LoadTableTest, DuplicateTimestamp) {
  const auto t = ParseTableCsv(
      "timestamp,a\n2018-01-01T00:00:00Z,1\n2018-01-01T00:00:00Z,2\n", 1, "x.csv");
  ASSERT_FALSE(t.ok());
  EXPECT_THAT(std::string(t.status().message()), HasSubstr("duplicate timestamp"));
  EXPECT_THAT(std::string(t.status().message()), HasSubstr("x.csv:3:"));
}

TEST(LoadTableTest, MalformedRowReportsLine) {
  const auto t = ParseTableCsv(
      "timestamp,a\n2018-01-01T00:00:00Z,1\n2018-01-01T01:00:00Z,abc\n", 1, "x.csv");
  ASSERT_FALSE(t.ok());
  EXPECT_THAT(std::string(t.status().message()), HasSubstr("x.csv:3:"));

  const auto fields = ParseTableCsv(
      "timestamp,a\n2018-01-01T00:00:00Z,1,2\n", 1, "x.csv");
  ASSERT_FALSE(fields.ok());
  EXPECT_THAT(std::string(fields.status().message()), HasSubstr("x.csv:2:"));
}

TEST(LoadTableTest, RejectsBadHeaderAndNonFiniteText) {
  EXPECT_FALSE(ParseTableCsv("time,a\n2018-01-01T00:00:00Z,1\n", 1).ok());
  EXPECT_FALSE(ParseTableCsv("timestamp,a,a\n2018-01-01T00:00:00Z,1,2\n", 1).ok());
  EXPECT_FALSE(ParseTableCsv("timestamp,a\n2018-01-01T00:00:00Z,nan\n", 1).ok());
}

TEST(LoadTableTest, CsvRoundTripIsExact) {
  TimeTable t = Table("2018-01-01T00:00:00Z", 1,
                      {{"a", {0.1, kMissing, 1.0 / 3.0}}, {"b", {-1e-9, 2, 3}}});
  const auto back = ParseTableCsv(TableToCsv(t), 1);
  ASSERT_OK(back);
  EXPECT_EQ(back->timestamps(), t.timestamps());
  EXPECT_EQ(back->columns()[0].values[0], 0.1);
  EXPECT_TRUE(IsMissing(back->columns()[0].values[1]));
  EXPECT_EQ(back->columns()[0].values[2], 1.0 / 3.0);
  EXPECT_EQ(TableToCsv(*back), TableToCsv(t));
}

TEST(LoadTableTest, FileRoundTrip) {
  const auto dir = testing::ScratchDir();
  TimeTable t = Table("2018-01-01T00:00:00Z", 4, {{"a", {1, 2, 3}}});
  ASSERT_STATUS_OK(WriteTable(t, dir / "sub" / "t.csv"));
  const auto back = LoadTable(dir / "sub" / "t.csv", 4);
  ASSERT_OK(back);
  EXPECT_EQ(back->size(), 3u);
  EXPECT_EQ(LoadTable(dir / "missing.csv", 4).status().code(),
            absl::StatusCode::kNotFound);
}

TEST(TimeTableTest, AddColumnChecks) {
  TimeTable t = Table("2018-01-01T00:00:00Z", 1, {{"a", {1, 2}}});
  EXPECT_FALSE(t.AddColumn("a", {1, 2}).ok());
  EXPECT_FALSE(t.AddColumn("b", {1}).ok());
  EXPECT_FALSE(t.AddColumn("timestamp", {1, 2}).ok());
  EXPECT_TRUE(t.AddColumn("b", {1, 2}).ok());
  EXPECT_EQ(t.column("zzz").status().code(), absl::StatusCode::kNotFound);
}

TEST(ResampleMeanTest, BlockMean) {
  const auto r = ResampleMean(Table("2018-01-01T00:00:00Z", 1, {{"a", {1, 2, 3, 4}}}), 4);
  ASSERT_OK(r);
  EXPECT_EQ(r->resolution_hours(), 4);
  EXPECT_THAT(r->columns()[0].values, ElementsAre(2.5));
  EXPECT_EQ(r->timestamps()[0], T("2018-01-01T00:00:00Z"));
}

TEST(ResampleMeanTest, TrailingPartialBlockDropped) {
  const auto r =
      ResampleMean(Table("2018-01-01T00:00:00Z", 1, {{"a", {1, 2, 3, 4, 5}}}), 4);
  ASSERT_OK(r);
  EXPECT_THAT(r->columns()[0].values, ElementsAre(2.5));
}

TEST(ResampleMeanTest, SkipsMissing) {
  const auto r = ResampleMean(
      Table("2018-01-01T00:00:00Z", 1,
            {{"a", {1, kMissing, 3, 4, kMissing, kMissing, kMissing, kMissing}}}),
      4);
  ASSERT_OK(r);
  EXPECT_DOUBLE_EQ(r->columns()[0].values[0], 8.0 / 3.0);
  EXPECT_TRUE(IsMissing(r->columns()[0].values[1]));
}

TEST(ResampleMeanTest, NonMultipleBlockRejected) {
  EXPECT_FALSE(ResampleMean(Table("2018-01-01T00:00:00Z", 2, {{"a", {1, 2, 3}}}), 3).ok());
  EXPECT_FALSE(ResampleMean(Table("2018-01-01T00:00:00Z", 1, {{"a", {1, 2}}}), 0).ok());
}

TEST(MovingAverageTest, TrailingPartialPrefix) {
  const std::vector<double> s = {2, 4, 6};
  const auto m = MovingAverage(s, 2);
  ASSERT_OK(m);
  EXPECT_THAT(*m, ElementsAre(2, 3, 5));
}

TEST(MovingAverageTest, ConstantSeriesUnchanged) {
  const std::vector<double> s(50, 7.25);
  const auto m = MovingAverage(s, 9);
  ASSERT_OK(m);
  for (double v : *m) EXPECT_EQ(v, 7.25);
}

TEST(MovingAverageTest, ThirtyDayWindowMatchesDirectSum) {
  std::vector<double> daily(60);
  for (size_t i = 0; i < daily.size(); ++i) daily[i] = std::sin(0.3 * i) * 10 + i;
  const auto m = MovingAverageDays(daily, 30, 24);
  ASSERT_OK(m);
  for (size_t t = 0; t < daily.size(); ++t) {
    const size_t lo = t >= 29 ? t - 29 : 0;
    double sum = 0.0;
    for (size_t k = lo; k <= t; ++k) sum += daily[k];
    EXPECT_NEAR((*m)[t], sum / static_cast<double>(t - lo + 1), 1e-12) << t;
  }
  // Day 60 (index 59) covers days 31..60.
  double direct = 0.0;
  for (size_t k = 30; k < 60; ++k) direct += daily[k];
  EXPECT_NEAR(m->back(), direct / 30.0, 1e-12);
}

TEST(MovingAverageTest, Errors) {
  EXPECT_FALSE(MovingAverage({}, 3).ok());
  const std::vector<double> s = {1, 2};
  EXPECT_FALSE(MovingAverage(s, 0).ok());
}

TEST(ResidualLoadTest, ZeroSubtrahends) {
  const std::vector<double> load(30, 10.0), zero(30, 0.0);
  const auto r = ResidualLoad({load, zero, zero, zero}, 1, 1);
  ASSERT_OK(r);
  for (size_t t = 0; t < 24; ++t) EXPECT_TRUE(IsMissing((*r)[t]));
  for (size_t t = 24; t < 30; ++t) EXPECT_EQ((*r)[t], 10.0);
}

TEST(ResidualLoadTest, DirectFormula) {
  const std::vector<double> load(30, 10.0), wind(30, 3.0), solar(30, 2.0), ror(30, 1.0);
  const auto r = ResidualLoad({load, wind, solar, ror}, 1, 1);
  ASSERT_OK(r);
  EXPECT_EQ((*r)[29], 4.0);
}

TEST(ResidualLoadTest, MatchesBruteForceTrailingMean) {
  const size_t n = 10 * 24;
  std::vector<double> load(n), wind(n), solar(n), ror(n);
  for (size_t t = 0; t < n; ++t) {
    load[t] = 50 + 10 * std::sin(0.1 * t);
    wind[t] = 5 + 3 * std::cos(0.07 * t);
    solar[t] = std::max(0.0, 8 * std::sin(0.26 * t));
    ror[t] = 2 + 0.5 * std::sin(0.013 * t * t);
  }
  const int lag_days = 7;
  const auto r = ResidualLoad({load, wind, solar, ror}, lag_days, 1);
  ASSERT_OK(r);
  const size_t lag = lag_days * 24;
  for (size_t t = 0; t < n; ++t) {
    if (t < lag) {
      EXPECT_TRUE(IsMissing((*r)[t])) << t;
      continue;
    }
    double sum = 0.0;
    for (size_t k = t - lag; k < t; ++k) sum += ror[k];
    const double expected = load[t] - wind[t] - solar[t] - sum / static_cast<double>(lag);
    EXPECT_NEAR((*r)[t], expected, 1e-10) << t;
  }
}

TEST(ResidualLoadTest, Errors) {
  const std::vector<double> a(30, 1.0), b(29, 1.0);
  EXPECT_FALSE(ResidualLoad({a, a, a, b}, 1, 1).ok());
  EXPECT_FALSE(ResidualLoad({a, a, a, a}, 0, 1).ok());
}

TEST(MixedPriceTest, Examples) {
  const std::vector<double> cap = {10}, energy = {100};
  auto r = MixedPrice({cap, energy, 0.0});
  ASSERT_OK(r);
  EXPECT_EQ(r->values[0], 10.0);
  EXPECT_TRUE(r->warnings.empty());

  r = MixedPrice({cap, energy, 0.05});
  ASSERT_OK(r);
  EXPECT_DOUBLE_EQ(r->values[0], 15.0);
  EXPECT_TRUE(r->warnings.empty());

  r = MixedPrice({cap, energy, 0.5});
  ASSERT_OK(r);
  EXPECT_DOUBLE_EQ(r->values[0], 60.0);
  EXPECT_EQ(r->warnings.size(), 1u);

  EXPECT_FALSE(MixedPrice({cap, energy, -0.01}).ok());
  const std::vector<double> two = {1, 2};
  EXPECT_FALSE(MixedPrice({cap, two, 0.0}).ok());
}

TEST(AlignJoinTest, IdenticalTimestamps) {
  const std::vector<TimeTable> tables = {
      Table("2018-01-01T00:00:00Z", 1, {{"a", {1, 2, 3, 4, 5}}}),
      Table("2018-01-01T00:00:00Z", 1, {{"y", {5, 4, 3, 2, 1}}})};
  const auto m = AlignJoin(tables, {"a"}, "y");
  ASSERT_OK(m);
  EXPECT_EQ(m->size(), 5u);
  EXPECT_EQ(m->dropped_rows, 0u);
  EXPECT_OK(m->Validate());
}

TEST(AlignJoinTest, PartialOverlap) {
  const std::vector<TimeTable> tables = {
      Table("2018-01-01T00:00:00Z", 1, {{"a", {1, 2, 3, 4, 5}}}),
      Table("2018-01-01T02:00:00Z", 1, {{"y", {5, 4, 3, 2, 1}}})};
  const auto m = AlignJoin(tables, {"a"}, "y");
  ASSERT_OK(m);
  EXPECT_EQ(m->size(), 3u);
  EXPECT_EQ(m->timestamps.front(), T("2018-01-01T02:00:00Z"));
  EXPECT_EQ(m->x(0, 0), 3.0);
  EXPECT_EQ(m->y[0], 5.0);
}

TEST(AlignJoinTest, MissingCellDropsRow) {
  const std::vector<TimeTable> tables = {
      Table("2018-01-01T00:00:00Z", 1, {{"a", {1, kMissing, 3}}, {"y", {1, 2, 3}}})};
  const auto m = AlignJoin(tables, {"a"}, "y");
  ASSERT_OK(m);
  EXPECT_EQ(m->size(), 2u);
  EXPECT_EQ(m->dropped_rows, 1u);
}

TEST(AlignJoinTest, Errors) {
  const std::vector<TimeTable> disjoint = {
      Table("2018-01-01T00:00:00Z", 1, {{"a", {1, 2}}}),
      Table("2018-02-01T00:00:00Z", 1, {{"y", {1, 2}}})};
  EXPECT_EQ(AlignJoin(disjoint, {"a"}, "y").status().code(),
            absl::StatusCode::kFailedPrecondition);
  const std::vector<TimeTable> one = {
      Table("2018-01-01T00:00:00Z", 1, {{"a", {1, 2}}})};
  EXPECT_EQ(AlignJoin(one, {"a"}, "y").status().code(), absl::StatusCode::kNotFound);
  const std::vector<TimeTable> mixed = {
      Table("2018-01-01T00:00:00Z", 1, {{"a", {1, 2}}}),
      Table("2018-01-01T00:00:00Z", 2, {{"y", {1, 2}}})};
  EXPECT_FALSE(AlignJoin(mixed, {"a"}, "y").ok());
}

TEST(MergeOnGridTest, FillsGapsWithMissing) {
  const std::vector<TimeTable> tables = {
      Table("2018-01-01T00:00:00Z", 1, {{"a", {1, 2, 3, 4}}}),
      Table("2018-01-01T01:00:00Z", 1, {{"b", {7, 8, 9, 10}}})};
  const auto g = MergeOnGrid(tables);
  ASSERT_OK(g);
  EXPECT_EQ(g->size(), 3u);
  EXPECT_EQ(g->timestamps().front(), T("2018-01-01T01:00:00Z"));
  EXPECT_THAT(std::vector<double>(g->column("a")->begin(), g->column("a")->end()),
              ElementsAre(2, 3, 4));
  EXPECT_THAT(std::vector<double>(g->column("b")->begin(), g->column("b")->end()),
              ElementsAre(7, 8, 9));
}

TEST(SynthRegimeTest, Deterministic) {
  const auto a = SynthRegime(600, 17);
  const auto b = SynthRegime(600, 17);
  ASSERT_OK(a);
  ASSERT_OK(b);
  EXPECT_EQ(a->first.x, b->first.x);
  EXPECT_EQ(a->second.y, b->second.y);
  const auto c = SynthRegime(600, 18);
  ASSERT_OK(c);
  EXPECT_NE(a->first.y, c->first.y);
  EXPECT_FALSE(SynthRegime(499, 1).ok());
}

TEST(SynthRegimeTest, PeriodsAreContiguous) {
  const auto s = SynthRegime(500, 3);
  ASSERT_OK(s);
  const auto& [a, b] = *s;
  EXPECT_EQ(b.timestamps.front(), AddHours(a.timestamps.back(), 4));
  const TimeTable t = SynthRegimeTable(a, b);
  EXPECT_EQ(t.size(), 1000u);
  EXPECT_THAT(t.ColumnNames(), ElementsAre("x1", "x2", "x3", "y"));
}

double Correlation(const std::vector<double>& a, const std::vector<double>& b) {
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0, saa = 0, sbb = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

TEST(SynthRegimeTest, DummyUncorrelatedAndOlsRecoversCoefficients) {
  const auto s = SynthRegime(2000, 5);
  ASSERT_OK(s);
  for (const auto* period : {&s->first, &s->second}) {
    EXPECT_LT(std::abs(Correlation(period->x.Column(2), period->y)), 0.1);
  }
  // Least squares with intercept on period A.
  const auto& a = s->first;
  Eigen::MatrixXd design(a.size(), 4);
  Eigen::VectorXd target(a.size());
  for (size_t r = 0; r < a.size(); ++r) {
    design(r, 0) = 1.0;
    for (size_t c = 0; c < 3; ++c) design(r, c + 1) = a.x(r, c);
    target(r) = a.y[r];
  }
  const Eigen::VectorXd beta = design.colPivHouseholderQr().solve(target);
  EXPECT_NEAR(beta(1), 3.0, 0.2);
  EXPECT_NEAR(beta(2), 1.0, 0.2);
  EXPECT_NEAR(beta(3), 0.0, 0.2);
}

}  // namespace
}  // namespace regime_xai::timeseries
