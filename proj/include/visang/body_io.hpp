#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "visang/support.hpp"

namespace visang {

/// {"a0": x, "harmonics": [{"k": k, "a": a_k, "b": b_k}, ...]}. Zero harmonics are omitted.
nlohmann::json to_json(const FourierSupport& body);

/// Throws InvalidArgument on malformed input (missing a0, k < 1, repeated k).
FourierSupport body_from_json(const nlohmann::json& j);

FourierSupport read_body(const std::string& path);
void write_body(const std::string& path, const FourierSupport& body);

}  // namespace visang
