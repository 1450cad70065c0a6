#pragma once

#include "json.hpp"

#include "coupon/identities.hpp"
#include "coupon/moments.hpp"
#include "coupon/oracle.hpp"
#include "coupon/simulator.hpp"

namespace coupon {

// Field names follow the CLI's json output; absent optionals are null.
void to_json(nlohmann::json& j, const MomentSummary& s);
void from_json(const nlohmann::json& j, MomentSummary& s);

void to_json(nlohmann::json& j, const SimulationReport& r);
void from_json(const nlohmann::json& j, SimulationReport& r);

void to_json(nlohmann::json& j, const IdentityReport& r);
void from_json(const nlohmann::json& j, IdentityReport& r);

void to_json(nlohmann::json& j, const OracleResult& r);
void from_json(const nlohmann::json& j, OracleResult& r);

}  // namespace coupon
