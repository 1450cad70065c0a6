#include "coupon/cli.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

#include "coupon/json_io.hpp"

namespace coupon {
namespace {

using nlohmann::json;

struct CliRun {
  int status;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  args.insert(args.begin(), "coupon");
  std::ostringstream out, err;
  const int status = cli::run(args, out, err);
  return {status, out.str(), err.str()};
}

std::string temp_path(const std::string& name) { return std::string(COUPON_TEST_TMPDIR) + "/" + name; }

TEST(Cli, MomentsJsonForTwoTypes) {
  const CliRun r = run({"moments", "--n", "2", "--format", "json"});
  ASSERT_EQ(r.status, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["n"], 2);
  EXPECT_EQ(j["mean"].get<double>(), 3.0);
  EXPECT_EQ(j["variance"].get<double>(), 2.0);
  EXPECT_EQ(j["second_moment_poissonized"].get<double>(), 14.0);
  EXPECT_EQ(j["method"], "closed-form");
  EXPECT_TRUE(j.contains("elapsed_ms"));
  EXPECT_NE(r.out.find("\"mean\":3.0"), std::string::npos);
}

TEST(Cli, MomentsInclusionExclusion) {
  const CliRun r = run({"moments", "--probs", "0.5,0.3,0.2", "--method", "inclusion-exclusion",
                     "--format", "json"});
  ASSERT_EQ(r.status, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_NEAR(j["mean"].get<double>(), 6.654761904761905, 1e-12);
  EXPECT_NEAR(j["variance"].get<double>(), 16.0749716553288, 1e-10);
  EXPECT_NEAR(j["second_moment_poissonized"].get<double>(), 67.015589569161, 1e-10);
  EXPECT_EQ(j["method"], "inclusion-exclusion");
}

TEST(Cli, EveryMethodGivesTheSameAnswer) {
  for (const char* method : {"closed-form", "recurrence", "inclusion-exclusion", "integration",
                             "oracle"}) {
    const CliRun r = run({"moments", "--n", "6", "--method", method, "--format", "json"});
    ASSERT_EQ(r.status, 0) << method << ": " << r.err;
    const json j = json::parse(r.out);
    EXPECT_NEAR(j["mean"].get<double>(), 14.7, 1e-7) << method;
    EXPECT_NEAR(j["variance"].get<double>(), 38.99, 1e-6) << method;
  }
  const CliRun sim = run({"moments", "--n", "6", "--method", "simulation", "--trials", "20000",
                       "--format", "json"});
  ASSERT_EQ(sim.status, 0);
  EXPECT_EQ(json::parse(sim.out)["method"], "simulation");
  EXPECT_TRUE(json::parse(sim.out)["second_moment_poissonized"].is_null());
}

TEST(Cli, MeanAndVarianceSubcommands) {
  const json mean = json::parse(run({"mean", "--n", "3", "--format", "json"}).out);
  EXPECT_DOUBLE_EQ(mean["mean"].get<double>(), 5.5);
  EXPECT_TRUE(mean["variance"].is_null());
  const json var = json::parse(run({"variance", "--n", "3", "--format", "json"}).out);
  EXPECT_DOUBLE_EQ(var["variance"].get<double>(), 6.75);
  EXPECT_TRUE(var["mean"].is_null());
}

TEST(Cli, TableAndCsvFormats) {
  const CliRun table = run({"moments", "--n", "10"});
  ASSERT_EQ(table.status, 0);
  EXPECT_NE(table.out.find("29.2896825397"), std::string::npos) << table.out;
  const CliRun csv = run({"moments", "--n", "2", "--format", "csv"});
  EXPECT_EQ(csv.out.rfind("n,mean,variance,second_moment_poissonized,method,elapsed_ms\n2,3,2,14,closed-form,", 0), 0u)
      << csv.out;
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({"moments", "--n", "3", "--probs", "0.5,0.5"}).status, 2);
  EXPECT_EQ(run({"moments"}).status, 2);
  EXPECT_EQ(run({}).status, 2);
  EXPECT_EQ(run({"moments", "--probs", "0.5,abc"}).status, 2);
  EXPECT_EQ(run({"moments", "--n", "three"}).status, 2);
  EXPECT_EQ(run({"moments", "--n", "3", "--format", "xml"}).status, 2);
  EXPECT_EQ(run({"moments", "--n", "3", "--method", "magic"}).status, 2);
  EXPECT_EQ(run({"frobnicate"}).status, 2);
  EXPECT_EQ(run({"--help"}).status, 0);
}

TEST(Cli, ComputationErrorsNameTheError) {
  const CliRun zero = run({"moments", "--probs", "0.5,0.0,0.5"});
  EXPECT_EQ(zero.status, 1);
  EXPECT_NE(zero.err.find("NonPositiveEntry"), std::string::npos) << zero.err;
  const CliRun sum = run({"moments", "--probs", "0.5,0.6"});
  EXPECT_EQ(sum.status, 1);
  EXPECT_NE(sum.err.find("SumOutOfTolerance"), std::string::npos);
  EXPECT_EQ(run({"moments", "--probs", "2,1,1", "--renormalize"}).status, 0);
  const CliRun closed = run({"moments", "--probs", "0.5,0.3,0.2", "--method", "closed-form"});
  EXPECT_EQ(closed.status, 1);
  const CliRun oracle = run({"moments", "--n", "21", "--method", "oracle"});
  EXPECT_EQ(oracle.status, 1);
  EXPECT_NE(oracle.err.find("UniverseTooLarge"), std::string::npos);
}

TEST(Cli, EnumerationCapFromEnvironment) {
  ::setenv("CCP_MAX_N", "3", 1);
  const CliRun r = run({"moments", "--probs", "0.25,0.25,0.25,0.25", "--method", "inclusion-exclusion"});
  ::unsetenv("CCP_MAX_N");
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.err.find("UniverseTooLarge"), std::string::npos);

  ::setenv("CCP_MAX_N", "27", 1);
  const CliRun raised = run({"moments", "--n", "4", "--method", "inclusion-exclusion"});
  ::unsetenv("CCP_MAX_N");
  EXPECT_EQ(raised.status, 0);
  EXPECT_NE(raised.err.find("warning"), std::string::npos);
}

TEST(Cli, ProbabilityFiles) {
  const std::string lines = temp_path("probs_lines.txt");
  std::ofstream(lines) << "0.5\n0.3\n\n0.2\n";
  const std::string array = temp_path("probs_array.json");
  std::ofstream(array) << "[0.5, 0.3, 0.2]\n";
  for (const auto& path : {lines, array}) {
    const CliRun r = run({"mean", "--probs-file", path, "--format", "json"});
    ASSERT_EQ(r.status, 0) << r.err;
    EXPECT_NEAR(json::parse(r.out)["mean"].get<double>(), 6.654761904761905, 1e-12);
  }
  const std::string bad = temp_path("probs_bad.json");
  std::ofstream(bad) << "[0.5, \"x\"]";
  EXPECT_EQ(run({"mean", "--probs-file", bad}).status, 2);
  EXPECT_EQ(run({"mean", "--probs-file", temp_path("does_not_exist")}).status, 2);
  EXPECT_EQ(cli::parse_probability_list("0.5, 0.5"), (std::vector<double>{0.5, 0.5}));
}

TEST(Cli, SimulateWritesHistogram) {
  const std::string path = temp_path("hist.csv");
  const CliRun r = run({"simulate", "--probs", "0.5,0.3,0.2", "--trials", "5000", "--seed", "3",
                     "--histogram", path, "--format", "json"});
  ASSERT_EQ(r.status, 0) << r.err;
  const SimulationReport rep = json::parse(r.out).get<SimulationReport>();
  EXPECT_EQ(rep.trials, 5000u);

  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "draws,count");
  std::uint64_t total = 0, prev = 0;
  while (std::getline(in, line)) {
    const auto comma = line.find(',');
    const std::uint64_t draws = std::stoull(line.substr(0, comma));
    EXPECT_GT(draws, prev);
    prev = draws;
    total += std::stoull(line.substr(comma + 1));
  }
  EXPECT_EQ(total, 5000u);
}

TEST(Cli, VerifyTwoTypeExample) {
  const CliRun r = run({"verify", "--probs", "0.6666667,0.3333333", "--tolerance", "1e-5"});
  EXPECT_EQ(r.status, 0) << r.out << r.err;
  const json j = json::parse(
      run({"verify", "--probs", "0.6666667,0.3333333", "--tolerance", "1e-5", "--format", "json"})
          .out);
  for (const auto& route : j["routes"]) {
    EXPECT_NEAR(route["mean"].get<double>(), 3.5, 1e-5 * 3.5) << route["method"];
    EXPECT_NEAR(route["variance"].get<double>(), 4.75, 1e-5 * 4.75) << route["method"];
  }
}

TEST(Cli, VerifyPassesForSmallN) {
  for (int n = 1; n <= 20; ++n) {
    const CliRun r = run({"verify", "--n", std::to_string(n)});
    ASSERT_EQ(r.status, 0) << n << "\n" << r.out << r.err;
  }
}

TEST(Cli, VerifyWithSimulation) {
  const CliRun r = run({"verify", "--probs", "0.4,0.3,0.2,0.1", "--trials", "100000", "--format",
                     "json"});
  ASSERT_EQ(r.status, 0) << r.out;
  const json j = json::parse(r.out);
  EXPECT_TRUE(j["passed"].get<bool>());
  EXPECT_LT(j["simulation"]["z_mean"].get<double>(), 5.0);
}

TEST(Cli, VerifyFailsOnImpossibleTolerance) {
  // Integration is only asked for ~1e-2 * tolerance relative, so a zero
  // tolerance cannot be met.
  EXPECT_EQ(run({"verify", "--n", "7", "--tolerance", "0"}).status, 1);
}

TEST(Cli, Identities) {
  const CliRun r = run({"identities", "--n", "3", "--r", "2", "--format", "json"});
  ASSERT_EQ(r.status, 0) << r.err;
  const json j = json::parse(r.out);
  ASSERT_EQ(j["reports"].size(), 2u);
  for (const auto& rep : j["reports"]) EXPECT_TRUE(rep["passed"].get<bool>());
  EXPECT_EQ(run({"identities", "--n", "100"}).status, 0);
  EXPECT_EQ(run({"identities", "--n", "61", "--r", "1"}).status, 1);
  EXPECT_EQ(run({"identities"}).status, 2);
}

// parse(print(x)) == x for every report type.
TEST(JsonIo, RoundTrips) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 200; ++i) {
    MomentSummary s{static_cast<std::size_t>(i), u(rng), u(rng), std::nullopt,
                    static_cast<Method>(i % 6), {}};
    if (i % 2) s.poissonized_second_moment = u(rng);
    if (i % 3 == 0) s.warnings = {"w" + std::to_string(i)};
    const auto back = json::parse(json(s).dump()).get<MomentSummary>();
    ASSERT_EQ(back.n, s.n);
    ASSERT_EQ(back.mean, s.mean);
    ASSERT_EQ(back.variance, s.variance);
    ASSERT_EQ(back.poissonized_second_moment, s.poissonized_second_moment);
    ASSERT_EQ(back.method, s.method);
    ASSERT_EQ(back.warnings, s.warnings);

    SimulationReport r;
    r.n = i;
    r.trials = 1000 + i;
    r.sample_mean = u(rng);
    r.sample_variance = u(rng);
    r.std_error_of_mean = u(rng);
    r.std_error_of_variance = u(rng);
    r.min_draws = i;
    r.max_draws = 10 * i;
    r.central_m2 = u(rng);
    r.central_m3 = u(rng);
    r.central_m4 = u(rng);
    if (i % 2) r.histogram = Histogram{{3, 7}, {static_cast<std::uint64_t>(4 + i), 9}};
    const auto rb = json::parse(json(r).dump()).get<SimulationReport>();
    ASSERT_EQ(rb.sample_mean, r.sample_mean);
    ASSERT_EQ(rb.central_m4, r.central_m4);
    ASSERT_EQ(rb.histogram, r.histogram);
    ASSERT_EQ(rb.trials, r.trials);

    const IdentityReport ir{"x", static_cast<std::size_t>(i), u(rng), u(rng), u(rng), u(rng), i % 2 == 0};
    const auto ib = json::parse(json(ir).dump()).get<IdentityReport>();
    ASSERT_EQ(ib.lhs, ir.lhs);
    ASSERT_EQ(ib.abs_diff, ir.abs_diff);
    ASSERT_EQ(ib.passed, ir.passed);

    const OracleResult o{u(rng), u(rng), u(rng), static_cast<std::uint64_t>(i)};
    const auto ob = json::parse(json(o).dump()).get<OracleResult>();
    ASSERT_EQ(ob.mean, o.mean);
    ASSERT_EQ(ob.second_moment, o.second_moment);
    ASSERT_EQ(ob.variance, o.variance);
    ASSERT_EQ(ob.states_solved, o.states_solved);
  }
}

}  // namespace
}  // namespace coupon
