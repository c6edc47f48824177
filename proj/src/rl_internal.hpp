#pragma once

// Internal glue between the RL module and the JSON config loaders.

#include <string>

#include "json_util.hpp"
#include "qcs/rl.hpp"

namespace qcs {

RlConfig parse_rl_config_json(const jsonutil::json& doc, const std::string& ctx);

}  // namespace qcs
