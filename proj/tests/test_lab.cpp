#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "cyclemr/lab.hpp"

using namespace cyclemr;

TEST(Quantile, LinearInterpolation) {
  const std::vector<double> v{1, 2, 3, 4};
  EXPECT_DOUBLE_EQ(quantile(v, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(quantile(v, 1.0), 4.0);
  EXPECT_DOUBLE_EQ(quantile(v, 0.5), 2.5);
  EXPECT_DOUBLE_EQ(quantile({7}, 0.9), 7.0);
}

TEST(FitLog, ExactAndDegenerate) {
  const std::vector<double> x{10, 12, 14, 16};
  const auto exact = fit_log(x, x);
  EXPECT_NEAR(exact.slope, 1.0, 1e-9);
  EXPECT_NEAR(exact.intercept, 0.0, 1e-9);
  const auto flat = fit_log(x, {5, 5, 5, 5});
  EXPECT_NEAR(flat.slope, 0.0, 1e-12);
  EXPECT_THROW(fit_log({10, 12}, {1, 2}), CycleError);
}

TEST(Sweep, SingleMachineDecidesInRoundOne) {
  SweepSpec spec;
  spec.ns = {64};
  spec.seeds = 5;
  spec.machines = 1;
  spec.memory_cap = 65;
  const auto res = run_sweep(spec);
  ASSERT_EQ(res.cells.size(), 1u);
  EXPECT_DOUBLE_EQ(*res.cells[0].round_p50, 1.0);
  EXPECT_DOUBLE_EQ(res.cells[0].decided_frac, 1.0);
}

TEST(Sweep, TwoCycleCellsStayUndecided) {
  SweepSpec spec;
  spec.ns = {256, 1024};
  spec.seeds = 6;
  spec.families = {Family::two_cycle, Family::mixed};
  spec.strategies = {"endpoint-hash", "id-block"};
  spec.rounds = 400;
  const auto res = run_sweep(spec);
  for (const auto& c : res.cells) {
    EXPECT_EQ(c.misclassified, 0u);
    if (c.family == Family::two_cycle) EXPECT_DOUBLE_EQ(c.decided_frac, 0.0);
  }
}

TEST(Sweep, EmptySpecIsRejected) {
  EXPECT_THROW(run_sweep(SweepSpec{}), CycleError);
  SweepSpec bad;
  bad.ns = {100};
  EXPECT_THROW(run_sweep(bad), CycleError);  // strict: not a power of rho
  bad.strict = false;
  const auto rounded = run_sweep(bad);
  EXPECT_FALSE(rounded.warnings.empty());
  EXPECT_EQ(rounded.cells[0].n, 128u);
}

TEST(Sweep, CsvIsReproducible) {
  SweepSpec spec;
  spec.ns = {256, 512, 1024};
  spec.seeds = 8;
  spec.strategies = {"endpoint-hash", "replicating-hash"};
  spec.master_seed = 5;
  std::ostringstream a, b;
  write_sweep_csv(a, spec, run_sweep(spec));
  write_sweep_csv(b, spec, run_sweep(spec));
  EXPECT_EQ(a.str(), b.str());
  std::istringstream lines(a.str());
  std::string first, header;
  std::getline(lines, first);
  std::getline(lines, header);
  EXPECT_EQ(first.rfind("# {", 0), 0u);
  EXPECT_EQ(header, kSweepCsvHeader);
  int rows = 0;
  for (std::string l; std::getline(lines, l);) ++rows;
  EXPECT_EQ(rows, 6);
}

TEST(Sweep, CellsCountAborts) {
  SweepSpec spec;
  spec.ns = {256};
  spec.seeds = 4;
  spec.strategies = {"all-to-zero"};
  const auto res = run_sweep(spec);
  EXPECT_EQ(res.cells[0].aborted, 4u);
  EXPECT_EQ(res.cells[0].samples, 0u);
}
