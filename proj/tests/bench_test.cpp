#include <sstream>

#include <gtest/gtest.h>

#include "support.hpp"

namespace tpds {
namespace {

std::vector<BenchRecord> synthetic(double power, Method m) {
  std::vector<BenchRecord> out;
  for (int p = 2; p <= 9; ++p) {
    BenchRecord rec;
    rec.method = m;
    rec.r = Index{1} << p;
    rec.time_s = 3e-6 * std::pow(static_cast<double>(rec.r), power);
    out.push_back(rec);
  }
  return out;
}

TEST(FitSlopeTest, ExactPowerLaws) {
  EXPECT_NEAR(fit_slope(synthetic(3.0, Method::dense), Method::dense), 3.0, 1e-9);
  EXPECT_NEAR(fit_slope(synthetic(1.0, Method::fourier), Method::fourier), 1.0, 1e-9);
}

TEST(FitSlopeTest, UsesOnlyTheLargestFourPoints) {
  auto recs = synthetic(1.0, Method::fourier);
  recs[0].time_s = 100.0;  // noise at small r must not matter
  recs[1].time_s = 100.0;
  EXPECT_NEAR(fit_slope(recs, Method::fourier), 1.0, 1e-9);
}

TEST(FitSlopeTest, NeedsThreePoints) {
  auto recs = synthetic(2.0, Method::dense);
  recs.resize(2);
  EXPECT_THROW(fit_slope(recs, Method::dense), InsufficientData);
  EXPECT_THROW(fit_slope(recs, Method::fourier), InsufficientData);
}

TEST(RunExperimentTest, RecordCountAndVerdicts) {
  BenchConfig cfg;
  cfg.p_range = {2, 3, 4, 5, 6};
  for (int reps : {1, 5}) {
    cfg.reps = reps;
    const auto recs = run_experiment(cfg);
    ASSERT_EQ(recs.size(), 10u);
    for (std::size_t i = 0; i < recs.size(); i += 2) {
      EXPECT_EQ(recs[i].r, recs[i + 1].r);
      EXPECT_EQ(recs[i].verdict, recs[i + 1].verdict);
      EXPECT_TRUE(recs[i].verdict);
      EXPECT_GT(recs[i].time_s, 0.0);
      EXPECT_EQ(recs[i].reps, reps);
    }
  }
}

TEST(RunExperimentTest, ControllabilityVerdictsAgree) {
  BenchConfig cfg;
  cfg.test = TestKind::controllability;
  cfg.p_range = {2, 3, 4};
  cfg.reps = 1;
  const auto recs = run_experiment(cfg);
  for (std::size_t i = 0; i < recs.size(); i += 2) EXPECT_EQ(recs[i].verdict, recs[i + 1].verdict);
}

TEST(RunExperimentTest, TimeCapSkipsLargerPoints) {
  BenchConfig cfg;
  cfg.p_range = {2, 3, 4};
  cfg.reps = 1;
  cfg.time_cap = 1e-12;
  const auto recs = run_experiment(cfg);
  ASSERT_EQ(recs.size(), 6u);
  EXPECT_FALSE(recs[0].skipped);
  for (std::size_t i = 2; i < recs.size(); ++i) EXPECT_TRUE(recs[i].skipped);
}

TEST(RunExperimentTest, RejectsBadConfig) {
  BenchConfig cfg;
  cfg.p_range = {};
  EXPECT_THROW(run_experiment(cfg), Error);
  cfg.p_range = {3, 2};
  EXPECT_THROW(run_experiment(cfg), Error);
  cfg.p_range = {2};
  cfg.reps = 0;
  EXPECT_THROW(run_experiment(cfg), Error);
}

TEST(BenchDataTest, SameSeedSameData) {
  BenchConfig cfg;
  const auto a = bench_data(cfg, 8), b = bench_data(cfg, 8);
  EXPECT_EQ(a.x0, b.x0);
  EXPECT_EQ(a.x1, b.x1);
  EXPECT_EQ(a.x0.dims(), (Dims{2, 20, 8}));
}

TEST(CsvTest, HeaderRowsAndQuoting) {
  std::vector<BenchRecord> recs(2);
  recs[0].r = 4;
  recs[0].time_s = 0.5;
  recs[0].n = recs[0].h = 2;
  recs[0].l = 10;
  recs[0].reps = 5;
  recs[1] = recs[0];
  recs[1].method = Method::fourier;
  recs[1].skipped = true;
  std::ostringstream os;
  write_csv(os, recs);
  EXPECT_EQ(os.str(),
            "test,method,r,n,h,l,reps,threads,time_s,time_per_r,time_per_r3\r\n"
            "sysid,unfold,4,2,2,10,5,1,0.5,0.125,0.0078125\r\n"
            "sysid,fourier,4,2,2,10,5,1,skipped,skipped,skipped\r\n");
  EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
  EXPECT_EQ(csv_field("plain"), "plain");
}

}  // namespace
}  // namespace tpds
