#include "coupon/cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"

#include "coupon/error.hpp"
#include "coupon/exact_equal.hpp"
#include "coupon/exact_general.hpp"
#include "coupon/identities.hpp"
#include "coupon/json_io.hpp"
#include "coupon/oracle.hpp"
#include "coupon/simulator.hpp"

namespace coupon::cli {

using nlohmann::json;

namespace {

// Raised for malformed input that CLI11 itself cannot see (exit status 2).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

double parse_number(std::string_view token) {
  const std::string t = trim(token);
  double value = 0.0;
  const char* begin = t.data();
  const char* end = t.data() + t.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (t.empty() || ec != std::errc() || ptr != end) {
    throw std::invalid_argument("not a number: '" + t + "'");
  }
  return value;
}

}  // namespace

std::vector<double> parse_probability_list(const std::string& text) {
  std::vector<double> values;
  std::string_view rest = text;
  while (true) {
    const auto comma = rest.find(',');
    values.push_back(parse_number(rest.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return values;
}

std::vector<double> read_probability_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open probability file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string content = trim(buffer.str());

  std::vector<double> values;
  if (!content.empty() && content.front() == '[') {
    json parsed;
    try {
      parsed = json::parse(content);
    } catch (const json::parse_error& e) {
      throw std::invalid_argument(std::string("malformed JSON array: ") + e.what());
    }
    for (const json& v : parsed) {
      if (!v.is_number()) throw std::invalid_argument("JSON array must contain only numbers");
      values.push_back(v.get<double>());
    }
    return values;
  }
  std::istringstream lines(content);
  for (std::string line; std::getline(lines, line);) {
    if (trim(line).empty()) continue;
    values.push_back(parse_number(line));
  }
  return values;
}

namespace {

enum class Format { Table, Json, Csv };

struct Options {
  std::optional<std::size_t> n;
  std::string probs;
  std::string probs_file;
  bool renormalize = false;
  std::string method = "auto";
  std::string format = "table";
  std::optional<std::uint64_t> trials;
  std::uint64_t seed = 42;
  unsigned workers = 0;
  double tolerance = 1e-6;
  double quad_tol = 1e-8;
  std::string histogram_path;
  unsigned order = 0;
};

struct Input {
  std::size_t n = 0;
  std::optional<ProbabilityVector> pv;  // empty for --n
  bool uniform = false;

  ProbabilityVector vector() const { return pv ? *pv : uniform_probability_vector(n); }
  SimulationTarget target() const {
    return pv ? SimulationTarget(*pv) : SimulationTarget(n);
  }
};

Format parse_format(const std::string& s) {
  if (s == "table") return Format::Table;
  if (s == "json") return Format::Json;
  if (s == "csv") return Format::Csv;
  throw UsageError("unknown format '" + s + "'");
}

Input resolve_input(const Options& o) {
  const int given = (o.n ? 1 : 0) + (!o.probs.empty() ? 1 : 0) + (!o.probs_file.empty() ? 1 : 0);
  if (given != 1) throw UsageError("supply exactly one of --n, --probs, --probs-file");
  Input in;
  if (o.n) {
    if (*o.n == 0) throw Error(ErrorCode::InvalidCount, "coupon count must be at least 1");
    in.n = *o.n;
    in.uniform = true;
    return in;
  }
  std::vector<double> values;
  try {
    values = o.probs.empty() ? read_probability_file(o.probs_file) : parse_probability_list(o.probs);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  in.pv = make_probability_vector(values, o.renormalize);
  in.n = in.pv->size();
  in.uniform = is_uniform(*in.pv, 1e-12);
  return in;
}

EnumerationOptions enumeration_options(const Options& o, std::ostream& err) {
  EnumerationOptions e;
  e.workers = o.workers;
  if (const char* env = std::getenv("CCP_MAX_N"); env != nullptr && *env != '\0') {
    std::size_t cap = 0;
    const std::string_view s(env);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), cap);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw UsageError("CCP_MAX_N must be a positive integer");
    }
    if (cap > kDefaultMaxSubsetUniverse) {
      err << "warning: CCP_MAX_N=" << cap << " raises the subset enumeration cap above "
          << kDefaultMaxSubsetUniverse << "\n";
    }
    e.max_n = cap;
  }
  return e;
}

// Absolute quadrature targets scaled to the size of the moments, so that the
// integration route is compared at a relative accuracy well inside `rel`.
struct ScaledTolerances {
  double mean;
  double second;
};

ScaledTolerances integration_tolerances(const ProbabilityVector& pv, double rel) {
  const double scale = harmonic_number(pv.size(), 1) / pv.min();
  return {rel * 1e-2 * scale, rel * 1e-3 * scale * scale};
}

MomentSummary integration_summary(const ProbabilityVector& pv, const ScaledTolerances& tol) {
  MomentSummary s;
  s.n = pv.size();
  s.method = Method::Integration;
  s.mean = mean_via_integration(pv, tol.mean);
  const double second = second_moment_via_integration(pv, tol.second);
  s.poissonized_second_moment = second;
  s.variance = second - s.mean - s.mean * s.mean;
  return s;
}

MomentSummary simulation_summary(const Input& in, const Options& o, SimulationReport* report) {
  TrialConfig cfg;
  cfg.trials = o.trials.value_or(100000);
  cfg.seed = o.seed;
  cfg.workers = o.workers;
  SimulationReport r = run_trials(in.target(), cfg);
  MomentSummary s;
  s.n = in.n;
  s.mean = r.sample_mean;
  s.variance = r.sample_variance;
  s.method = Method::Simulation;
  if (report) *report = std::move(r);
  return s;
}

MomentSummary compute(Method method, const Input& in, const Options& o, std::ostream& err) {
  auto require_uniform = [&] {
    if (!in.uniform) {
      throw Error(ErrorCode::InvalidArgument,
                  std::string(method_name(method)) + " applies only to equal probabilities");
    }
  };
  switch (method) {
    case Method::ClosedForm:
      require_uniform();
      return moments_equal(in.n);
    case Method::Recurrence: {
      require_uniform();
      MomentSummary s;
      s.n = in.n;
      s.mean = mean_equal(in.n);
      s.variance = variance_equal_via_recurrence(in.n);
      s.poissonized_second_moment = second_moment_poissonized_equal(in.n);
      s.method = Method::Recurrence;
      return s;
    }
    case Method::InclusionExclusion:
      return moments_general(in.vector(), enumeration_options(o, err));
    case Method::Integration: {
      const ProbabilityVector pv = in.vector();
      return integration_summary(pv, ScaledTolerances{o.quad_tol, o.quad_tol});
    }
    case Method::Oracle: {
      const OracleResult r = exact_moments_bruteforce(in.vector());
      MomentSummary s;
      s.n = in.n;
      s.mean = r.mean;
      s.variance = r.variance;
      s.method = Method::Oracle;
      return s;
    }
    case Method::Simulation:
      return simulation_summary(in, o, nullptr);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown method");
}

Method choose_method(const Options& o, const Input& in) {
  if (o.method == "auto") return in.uniform ? Method::ClosedForm : Method::InclusionExclusion;
  const auto m = parse_method(o.method);
  if (!m) throw UsageError("unknown method '" + o.method + "'");
  return *m;
}

void print_warnings(const std::vector<std::string>& warnings, std::ostream& err) {
  for (const auto& w : warnings) err << "warning: " << w << "\n";
}

std::string csv_number(const std::optional<double>& v) {
  if (!v) return "";
  std::ostringstream s;
  s << std::setprecision(17) << *v;
  return s.str();
}

enum class Fields { MeanOnly, VarianceOnly, All };

void print_summary(const MomentSummary& s, Fields fields, Format format, double elapsed_ms,
                   std::ostream& out) {
  std::optional<double> mean = s.mean;
  std::optional<double> variance = s.variance;
  std::optional<double> second = s.poissonized_second_moment;
  if (fields == Fields::MeanOnly) variance.reset(), second.reset();
  if (fields == Fields::VarianceOnly) mean.reset(), second.reset();

  switch (format) {
    case Format::Json: {
      json j = s;
      j["mean"] = mean ? json(*mean) : json(nullptr);
      j["variance"] = variance ? json(*variance) : json(nullptr);
      j["second_moment_poissonized"] = second ? json(*second) : json(nullptr);
      j["elapsed_ms"] = elapsed_ms;
      j.erase("warnings");
      out << j.dump() << "\n";
      return;
    }
    case Format::Csv:
      out << "n,mean,variance,second_moment_poissonized,method,elapsed_ms\n"
          << s.n << "," << csv_number(mean) << "," << csv_number(variance) << ","
          << csv_number(second) << "," << method_name(s.method) << "," << elapsed_ms << "\n";
      return;
    case Format::Table: {
      out << std::setprecision(12);
      out << std::left << std::setw(28) << "n" << s.n << "\n";
      out << std::setw(28) << "method" << method_name(s.method) << "\n";
      if (mean) out << std::setw(28) << "mean" << *mean << "\n";
      if (variance) out << std::setw(28) << "variance" << *variance << "\n";
      if (second) out << std::setw(28) << "second_moment_poissonized" << *second << "\n";
      out << std::setw(28) << "elapsed_ms" << elapsed_ms << "\n";
      return;
    }
  }
}

void print_report(const SimulationReport& r, Format format, double elapsed_ms, std::ostream& out) {
  switch (format) {
    case Format::Json: {
      json j = r;
      j["elapsed_ms"] = elapsed_ms;
      out << j.dump() << "\n";
      return;
    }
    case Format::Csv:
      out << "n,trials,sample_mean,sample_variance,std_error_of_mean,std_error_of_variance,"
             "min_draws,max_draws,elapsed_ms\n"
          << r.n << "," << r.trials << "," << csv_number(r.sample_mean) << ","
          << csv_number(r.sample_variance) << "," << csv_number(r.std_error_of_mean) << ","
          << csv_number(r.std_error_of_variance) << "," << r.min_draws << "," << r.max_draws
          << "," << elapsed_ms << "\n";
      return;
    case Format::Table:
      out << std::setprecision(12) << std::left;
      out << std::setw(24) << "n" << r.n << "\n";
      out << std::setw(24) << "trials" << r.trials << "\n";
      out << std::setw(24) << "sample_mean" << r.sample_mean << "\n";
      out << std::setw(24) << "sample_variance" << r.sample_variance << "\n";
      out << std::setw(24) << "std_error_of_mean" << r.std_error_of_mean << "\n";
      out << std::setw(24) << "std_error_of_variance" << r.std_error_of_variance << "\n";
      out << std::setw(24) << "min_draws" << r.min_draws << "\n";
      out << std::setw(24) << "max_draws" << r.max_draws << "\n";
      out << std::setw(24) << "elapsed_ms" << elapsed_ms << "\n";
      return;
  }
}

void write_histogram_csv(const Histogram& h, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write histogram to '" + path + "'");
  f << "draws,count\n";
  for (const auto& [draws, count] : h) f << draws << "," << count << "\n";
}

class Stopwatch {
 public:
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

int cmd_moments(const Options& o, Fields fields, std::ostream& out, std::ostream& err) {
  const Format format = parse_format(o.format);
  const Input in = resolve_input(o);
  const Method method = choose_method(o, in);
  Stopwatch clock;
  const MomentSummary s = compute(method, in, o, err);
  print_warnings(s.warnings, err);
  print_summary(s, fields, format, clock.elapsed_ms(), out);
  return kExitOk;
}

int cmd_simulate(const Options& o, std::ostream& out) {
  const Format format = parse_format(o.format);
  const Input in = resolve_input(o);
  TrialConfig cfg;
  cfg.trials = o.trials.value_or(100000);
  cfg.seed = o.seed;
  cfg.workers = o.workers;
  cfg.want_histogram = !o.histogram_path.empty();
  Stopwatch clock;
  const SimulationReport r = run_trials(in.target(), cfg);
  const double elapsed = clock.elapsed_ms();
  if (r.histogram) write_histogram_csv(*r.histogram, o.histogram_path);
  print_report(r, format, elapsed, out);
  return kExitOk;
}

struct RouteRow {
  std::string route;
  double mean;
  double variance;
};

double relative_deviation(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

int cmd_verify(const Options& o, std::ostream& out, std::ostream& err) {
  const Format format = parse_format(o.format);
  const Input in = resolve_input(o);
  const ProbabilityVector pv = in.vector();
  const EnumerationOptions enumeration = enumeration_options(o, err);
  Stopwatch clock;

  std::vector<RouteRow> rows;
  std::vector<std::string> skipped;
  if (in.uniform) {
    rows.push_back({"closed-form", mean_equal(in.n), variance_equal(in.n)});
    rows.push_back({"recurrence", mean_equal(in.n), variance_equal_via_recurrence(in.n)});
  }
  if (in.n <= enumeration.max_n) {
    const MomentSummary s = moments_general(pv, enumeration);
    print_warnings(s.warnings, err);
    rows.push_back({"inclusion-exclusion", s.mean, s.variance});
  } else {
    skipped.push_back("inclusion-exclusion");
  }
  if (in.n <= 10000) {
    const MomentSummary s = integration_summary(pv, integration_tolerances(pv, o.tolerance));
    rows.push_back({"integration", s.mean, s.variance});
  } else {
    skipped.push_back("integration");
  }
  if (in.n <= kMaxOracleUniverse) {
    const OracleResult r = exact_moments_bruteforce(pv);
    rows.push_back({"oracle", r.mean, r.variance});
  } else {
    skipped.push_back("oracle");
  }

  double max_dev = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = i + 1; j < rows.size(); ++j) {
      max_dev = std::max({max_dev, relative_deviation(rows[i].mean, rows[j].mean),
                          relative_deviation(rows[i].variance, rows[j].variance)});
    }
  }
  bool passed = max_dev <= o.tolerance;

  std::optional<SimulationReport> sim;
  double z_mean = 0.0, z_variance = 0.0;
  if (o.trials) {
    SimulationReport r;
    simulation_summary(in, o, &r);
    const RouteRow& ref = rows.front();
    auto z = [](double diff, double se) {
      if (se > 0.0) return std::abs(diff) / se;
      return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    };
    z_mean = z(r.sample_mean - ref.mean, r.std_error_of_mean);
    z_variance = z(r.sample_variance - ref.variance, r.std_error_of_variance);
    passed = passed && z_mean <= 5.0 && z_variance <= 5.0;
    sim = std::move(r);
  }
  const double elapsed = clock.elapsed_ms();

  if (format == Format::Json) {
    json j;
    j["n"] = in.n;
    j["routes"] = json::array();
    for (const auto& r : rows) {
      j["routes"].push_back({{"method", r.route}, {"mean", r.mean}, {"variance", r.variance}});
    }
    j["skipped"] = skipped;
    j["max_deviation"] = max_dev;
    j["tolerance"] = o.tolerance;
    j["simulation"] = nullptr;
    if (sim) {
      j["simulation"] = {{"report", *sim}, {"z_mean", z_mean}, {"z_variance", z_variance}};
    }
    j["passed"] = passed;
    j["elapsed_ms"] = elapsed;
    out << j.dump() << "\n";
  } else if (format == Format::Csv) {
    out << "route,mean,variance\n";
    for (const auto& r : rows) {
      out << r.route << "," << csv_number(r.mean) << "," << csv_number(r.variance) << "\n";
    }
    if (sim) {
      out << "simulation," << csv_number(sim->sample_mean) << ","
          << csv_number(sim->sample_variance) << "\n";
    }
  } else {
    out << std::setprecision(12) << std::left;
    out << std::setw(22) << "route" << std::setw(22) << "mean" << "variance\n";
    for (const auto& r : rows) {
      out << std::setw(22) << r.route << std::setw(22) << r.mean << r.variance << "\n";
    }
    for (const auto& s : skipped) out << std::setw(22) << s << "(skipped: n too large)\n";
    out << "max pairwise relative deviation " << max_dev << " (tolerance " << o.tolerance
        << ")\n";
    if (sim) {
      out << std::setw(22) << "simulation" << std::setw(22) << sim->sample_mean
          << sim->sample_variance << "\n";
      out << "simulation z-scores: mean " << z_mean << ", variance " << z_variance
          << " (limit 5)\n";
    }
    out << (passed ? "PASS" : "FAIL") << "\n";
  }
  return passed ? kExitOk : kExitComputation;
}

int cmd_identities(const Options& o, std::ostream& out) {
  const Format format = parse_format(o.format);
  if (!o.n || *o.n == 0) throw UsageError("identities needs --n N with N >= 1");
  const std::size_t n = *o.n;
  std::vector<IdentityReport> reports;
  reports.push_back(check_harmonic_square_identity(n, 1e-9));
  if (o.order != 0) {
    reports.push_back(check_binomial_sum_identity(n, o.order));
  } else if (n <= kMaxBinomialSumN) {
    for (unsigned r = 1; r <= kMaxIdentityOrder; ++r) {
      reports.push_back(check_binomial_sum_identity(n, r));
    }
  }

  const bool all_passed =
      std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.passed; });
  if (format == Format::Json) {
    out << json{{"reports", reports}, {"passed", all_passed}}.dump() << "\n";
  } else if (format == Format::Csv) {
    out << "name,n,lhs,rhs,abs_diff,tolerance,passed\n";
    for (const auto& r : reports) {
      out << r.name << "," << r.n << "," << csv_number(r.lhs) << "," << csv_number(r.rhs) << ","
          << csv_number(r.abs_diff) << "," << csv_number(r.tolerance) << ","
          << (r.passed ? "true" : "false") << "\n";
    }
  } else {
    out << std::setprecision(12) << std::left;
    for (const auto& r : reports) {
      out << std::setw(18) << r.name << "n=" << std::setw(6) << r.n << " lhs=" << std::setw(16)
          << r.lhs << " rhs=" << std::setw(16) << r.rhs << " diff=" << std::setw(12)
          << r.abs_diff << (r.passed ? " PASS" : " FAIL") << "\n";
    }
  }
  return all_passed ? kExitOk : kExitComputation;
}

void add_input_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--n", o.n, "Number of equally likely coupon types");
  cmd->add_option("--probs", o.probs, "Comma-separated coupon probabilities");
  cmd->add_option("--probs-file", o.probs_file,
                  "File with one probability per line or a JSON array");
  cmd->add_flag("--renormalize", o.renormalize, "Divide the probabilities by their sum first");
  cmd->add_option("--format", o.format, "table | json | csv")->capture_default_str();
  cmd->add_option("--workers", o.workers, "Worker threads (0 = all cores)")->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mean and variance of the coupon collector's waiting time", "coupon"};
  app.require_subcommand(1);
  Options o;

  auto add_moment_cmd = [&](const char* name, const char* help) {
    CLI::App* cmd = app.add_subcommand(name, help);
    add_input_options(cmd, o);
    cmd->add_option("--method", o.method,
                    "auto | closed-form | recurrence | inclusion-exclusion | integration | "
                    "oracle | simulation")
        ->capture_default_str();
    cmd->add_option("--tolerance", o.quad_tol, "Absolute quadrature tolerance (integration)")
        ->capture_default_str();
    cmd->add_option("--trials", o.trials, "Trials for --method simulation");
    cmd->add_option("--seed", o.seed, "Simulation seed")->capture_default_str();
    return cmd;
  };
  CLI::App* mean_cmd = add_moment_cmd("mean", "Expected number of draws");
  CLI::App* variance_cmd = add_moment_cmd("variance", "Variance of the number of draws");
  CLI::App* moments_cmd = add_moment_cmd("moments", "Mean, variance and Poissonized E(X^2)");

  CLI::App* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo estimate of the moments");
  add_input_options(simulate_cmd, o);
  simulate_cmd->add_option("--trials", o.trials, "Number of trials (default 100000)");
  simulate_cmd->add_option("--seed", o.seed, "Seed")->capture_default_str();
  simulate_cmd->add_option("--histogram", o.histogram_path, "Write draws,count CSV here");

  CLI::App* verify_cmd = app.add_subcommand("verify", "Cross-check every applicable route");
  add_input_options(verify_cmd, o);
  verify_cmd->add_option("--tolerance", o.tolerance, "Max relative deviation between routes")
      ->capture_default_str();
  verify_cmd->add_option("--trials", o.trials, "Also simulate this many trials");
  verify_cmd->add_option("--seed", o.seed, "Simulation seed")->capture_default_str();

  CLI::App* identities_cmd = app.add_subcommand("identities", "Check the harmonic-sum identities");
  identities_cmd->add_option("--n", o.n, "Upper summation index")->required();
  identities_cmd->add_option("--r", o.order, "Order of the binomial sum (1-3; default all)");
  identities_cmd->add_option("--format", o.format, "table | json | csv")->capture_default_str();

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (mean_cmd->parsed()) return cmd_moments(o, Fields::MeanOnly, out, err);
    if (variance_cmd->parsed()) return cmd_moments(o, Fields::VarianceOnly, out, err);
    if (moments_cmd->parsed()) return cmd_moments(o, Fields::All, out, err);
    if (simulate_cmd->parsed()) return cmd_simulate(o, out);
    if (verify_cmd->parsed()) return cmd_verify(o, out, err);
    if (identities_cmd->parsed()) return cmd_identities(o, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << error_name(e.code()) << ": " << e.what() << "\n";
    return kExitComputation;
  }
  return kExitUsage;
}

}  // namespace coupon::cli
