#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "spanmdp/mdp.hpp"

namespace spanmdp {

/**
 * MDP document: a JSON object
 *
 *   { "num_states": S, "num_actions": A,
 *     "transitions": [S][A][S] numbers, "rewards": [S][A] numbers }
 *
 * Numbers are written in shortest round-trip form, so parse(serialize(m)) == m
 * bit for bit. Unknown fields are ignored on load.
 */
Mdp parse_mdp(std::string_view text);
Mdp load_mdp(const std::filesystem::path& path);
std::string serialize_mdp(const Mdp& m);
void save_mdp(const Mdp& m, const std::filesystem::path& path);

/// Reads a whole file; throws ValidationError if it cannot be opened.
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace spanmdp
