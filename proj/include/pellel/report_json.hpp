#pragma once

#include <json.hpp>

#include "pellel/minnorm.hpp"
#include "pellel/pipeline.hpp"
#include "pellel/verify.hpp"

namespace pellel {

void to_json(nlohmann::json& j, const SolveReport& r);
void to_json(nlohmann::json& j, const PipelineReport& r);
void to_json(nlohmann::json& j, const CorollaryResult& r);
void to_json(nlohmann::json& j, const IdentityCheck& r);
void to_json(nlohmann::json& j, const BochnerTerms& r);
void to_json(nlohmann::json& j, const BasicEstimate& r);

}  // namespace pellel
