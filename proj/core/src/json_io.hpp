#pragma once

#include <json.hpp>
#include <string>
#include <string_view>

#include "spanmdp/mdp.hpp"

namespace spanmdp::detail {

using Json = nlohmann::ordered_json;

/// Parses text, mapping syntax errors to ParseError with a byte offset.
Json parse_json(std::string_view text);

/// Object with num_states / num_actions / transitions / rewards.
Json mdp_to_json(const Mdp& m);

/// Shape-checks and validates; throws ParseError / validation errors.
Mdp mdp_from_json(const Json& doc);

/// Object fields one per line; nested arrays keep their innermost level inline.
std::string format_document(const Json& doc);

/// Typed accessors producing ParseError("/pointer", ...) on schema violations.
const Json& require_field(const Json& obj, const std::string& pointer, const char* name);
double require_number(const Json& v, const std::string& pointer);
std::size_t require_count(const Json& v, const std::string& pointer);
const Json& require_array(const Json& v, const std::string& pointer, std::size_t expected);

}  // namespace spanmdp::detail
