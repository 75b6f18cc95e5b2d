#ifndef LDL_RECORD_HPP_
#define LDL_RECORD_HPP_

#include <string>

#include <json.hpp>

#include "ldl/experiments.hpp"

namespace ldl {

nlohmann::json spec_to_json(const ExperimentSpec& spec);
// Keys override `base`; every unknown key and bad value is reported in a
// single ConfigError.
ExperimentSpec spec_from_json(const nlohmann::json& j, ExperimentSpec base = {});

// Sorted keys, no whitespace; the spec is normalized first.
std::string canonical_json(const ExperimentSpec& spec);
// 16 hex digits over canonical_json.
std::string spec_hash(const ExperimentSpec& spec);

nlohmann::json record_to_json(const RunRecord& rec);

// %.12g, so equal doubles always print equally.
std::string format_double(double x);
std::string csv_header();
// One line per size, header included.
std::string record_csv(const RunRecord& rec);

}  // namespace ldl

#endif  // LDL_RECORD_HPP_
