#include "coupon/json_io.hpp"

#include "coupon/error.hpp"

namespace coupon {

using nlohmann::json;

void to_json(json& j, const MomentSummary& s) {
  j = json{{"n", s.n},
           {"mean", s.mean},
           {"variance", s.variance},
           {"second_moment_poissonized", nullptr},
           {"method", method_name(s.method)}};
  if (s.poissonized_second_moment) j["second_moment_poissonized"] = *s.poissonized_second_moment;
  if (!s.warnings.empty()) j["warnings"] = s.warnings;
}

void from_json(const json& j, MomentSummary& s) {
  s.n = j.at("n").get<std::size_t>();
  s.mean = j.at("mean").get<double>();
  s.variance = j.at("variance").get<double>();
  const json& second = j.at("second_moment_poissonized");
  s.poissonized_second_moment =
      second.is_null() ? std::nullopt : std::optional<double>(second.get<double>());
  const auto method = parse_method(j.at("method").get<std::string>());
  if (!method) throw Error(ErrorCode::InvalidArgument, "unknown method in json");
  s.method = *method;
  s.warnings = j.value("warnings", std::vector<std::string>{});
}

void to_json(json& j, const SimulationReport& r) {
  j = json{{"n", r.n},
           {"trials", r.trials},
           {"sample_mean", r.sample_mean},
           {"sample_variance", r.sample_variance},
           {"std_error_of_mean", r.std_error_of_mean},
           {"std_error_of_variance", r.std_error_of_variance},
           {"min_draws", r.min_draws},
           {"max_draws", r.max_draws},
           {"central_m2", r.central_m2},
           {"central_m3", r.central_m3},
           {"central_m4", r.central_m4},
           {"histogram", nullptr}};
  if (r.histogram) {
    json rows = json::array();
    for (const auto& [draws, count] : *r.histogram) rows.push_back({{"draws", draws}, {"count", count}});
    j["histogram"] = std::move(rows);
  }
}

void from_json(const json& j, SimulationReport& r) {
  r.n = j.at("n").get<std::size_t>();
  r.trials = j.at("trials").get<std::uint64_t>();
  r.sample_mean = j.at("sample_mean").get<double>();
  r.sample_variance = j.at("sample_variance").get<double>();
  r.std_error_of_mean = j.at("std_error_of_mean").get<double>();
  r.std_error_of_variance = j.at("std_error_of_variance").get<double>();
  r.min_draws = j.at("min_draws").get<std::uint64_t>();
  r.max_draws = j.at("max_draws").get<std::uint64_t>();
  r.central_m2 = j.at("central_m2").get<double>();
  r.central_m3 = j.at("central_m3").get<double>();
  r.central_m4 = j.at("central_m4").get<double>();
  r.histogram.reset();
  if (const json& rows = j.at("histogram"); !rows.is_null()) {
    Histogram h;
    for (const json& row : rows) {
      h[row.at("draws").get<std::uint64_t>()] = row.at("count").get<std::uint64_t>();
    }
    r.histogram = std::move(h);
  }
}

void to_json(json& j, const IdentityReport& r) {
  j = json{{"name", r.name},         {"n", r.n},
           {"lhs", r.lhs},           {"rhs", r.rhs},
           {"abs_diff", r.abs_diff}, {"tolerance", r.tolerance},
           {"passed", r.passed}};
}

void from_json(const json& j, IdentityReport& r) {
  r.name = j.at("name").get<std::string>();
  r.n = j.at("n").get<std::size_t>();
  r.lhs = j.at("lhs").get<double>();
  r.rhs = j.at("rhs").get<double>();
  r.abs_diff = j.at("abs_diff").get<double>();
  r.tolerance = j.at("tolerance").get<double>();
  r.passed = j.at("passed").get<bool>();
}

void to_json(json& j, const OracleResult& r) {
  j = json{{"mean", r.mean},
           {"second_moment", r.second_moment},
           {"variance", r.variance},
           {"states_solved", r.states_solved}};
}

void from_json(const json& j, OracleResult& r) {
  r.mean = j.at("mean").get<double>();
  r.second_moment = j.at("second_moment").get<double>();
  r.variance = j.at("variance").get<double>();
  r.states_solved = j.at("states_solved").get<std::uint64_t>();
}

}  // namespace coupon
