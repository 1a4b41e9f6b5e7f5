#include "spanmdp/codec.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json_io.hpp"
#include "spanmdp/errors.hpp"

namespace spanmdp {
namespace detail {

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("byte " + std::to_string(e.byte), e.what());
  }
}

const Json& require_field(const Json& obj, const std::string& pointer, const char* name) {
  if (!obj.is_object()) throw ParseError(pointer.empty() ? "/" : pointer, "expected an object");
  const auto it = obj.find(name);
  if (it == obj.end()) throw ParseError(pointer + "/" + name, "missing required field");
  return *it;
}

double require_number(const Json& v, const std::string& pointer) {
  if (!v.is_number()) throw ParseError(pointer, "expected a number");
  return v.get<double>();
}

std::size_t require_count(const Json& v, const std::string& pointer) {
  if (v.is_number_unsigned()) return v.get<std::size_t>();
  if (v.is_number_integer() && v.get<long long>() >= 0) return v.get<std::size_t>();
  if (v.is_number_float()) {
    const double x = v.get<double>();
    if (x >= 0 && std::floor(x) == x) return static_cast<std::size_t>(x);
  }
  throw ParseError(pointer, "expected a nonnegative integer");
}

const Json& require_array(const Json& v, const std::string& pointer, std::size_t expected) {
  if (!v.is_array()) throw ParseError(pointer, "expected an array");
  if (v.size() != expected) {
    throw ParseError(pointer, "expected " + std::to_string(expected) + " entries, found " +
                                  std::to_string(v.size()));
  }
  return v;
}

Json mdp_to_json(const Mdp& m) {
  const std::size_t S = m.num_states();
  const std::size_t A = m.num_actions();
  Json doc = Json::object();
  doc["num_states"] = S;
  doc["num_actions"] = A;
  Json P = Json::array();
  Json r = Json::array();
  for (StateIndex s = 0; s < S; ++s) {
    Json per_action = Json::array();
    Json rewards = Json::array();
    for (ActionIndex a = 0; a < A; ++a) {
      const auto row = m.row(s, a);
      per_action.push_back(Json(std::vector<double>(row.begin(), row.end())));
      rewards.push_back(m.reward(s, a));
    }
    P.push_back(std::move(per_action));
    r.push_back(std::move(rewards));
  }
  doc["transitions"] = std::move(P);
  doc["rewards"] = std::move(r);
  return doc;
}

Mdp mdp_from_json(const Json& doc) {
  const std::size_t S = require_count(require_field(doc, "", "num_states"), "/num_states");
  const std::size_t A = require_count(require_field(doc, "", "num_actions"), "/num_actions");
  if (S == 0 || A == 0) throw ParseError("/num_states", "state and action counts must be positive");
  const Json& P = require_array(require_field(doc, "", "transitions"), "/transitions", S);
  const Json& r = require_array(require_field(doc, "", "rewards"), "/rewards", S);

  std::vector<double> transitions;
  transitions.reserve(S * A * S);
  std::vector<double> rewards;
  rewards.reserve(S * A);
  for (StateIndex s = 0; s < S; ++s) {
    const std::string ps = "/transitions/" + std::to_string(s);
    const Json& per_action = require_array(P[s], ps, A);
    const std::string rs = "/rewards/" + std::to_string(s);
    const Json& reward_row = require_array(r[s], rs, A);
    for (ActionIndex a = 0; a < A; ++a) {
      const std::string pa = ps + "/" + std::to_string(a);
      const Json& row = require_array(per_action[a], pa, S);
      for (StateIndex t = 0; t < S; ++t) {
        transitions.push_back(require_number(row[t], pa + "/" + std::to_string(t)));
      }
      rewards.push_back(require_number(reward_row[a], rs + "/" + std::to_string(a)));
    }
  }
  Mdp m(S, A, std::move(transitions), std::move(rewards));
  validate_mdp(m);
  return m;
}

namespace {

bool is_flat_array(const Json& v) {
  if (!v.is_array()) return false;
  for (const auto& x : v) {
    if (x.is_array() || x.is_object()) return false;
  }
  return true;
}

void format_value(const Json& v, int indent, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  if (v.is_object()) {
    if (v.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    bool first = true;
    for (const auto& [key, value] : v.items()) {
      if (!first) out += ",\n";
      first = false;
      out += pad + "  " + Json(key).dump() + ": ";
      format_value(value, indent + 2, out);
    }
    out += "\n" + pad + "}";
  } else if (v.is_array() && !is_flat_array(v)) {
    bool nested_deeper = false;
    for (const auto& x : v) nested_deeper = nested_deeper || !is_flat_array(x);
    if (!nested_deeper) {
      // array of flat arrays: keep on one line when short
      std::string line = v.dump(-1, ' ', false);
      std::string compact;
      for (std::size_t i = 0; i < line.size(); ++i) {
        compact += line[i];
        if (line[i] == ',') compact += ' ';
      }
      if (compact.size() <= 100) {
        out += compact;
        return;
      }
    }
    out += "[\n";
    for (std::size_t i = 0; i < v.size(); ++i) {
      out += pad + "  ";
      format_value(v[i], indent + 2, out);
      if (i + 1 < v.size()) out += ",";
      out += "\n";
    }
    out += pad + "]";
  } else if (v.is_array()) {
    out += "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) out += ", ";
      out += v[i].dump();
    }
    out += "]";
  } else {
    out += v.dump();
  }
}

}  // namespace

std::string format_document(const Json& doc) {
  std::string out;
  format_value(doc, 0, out);
  out += "\n";
  return out;
}

}  // namespace detail

Mdp parse_mdp(std::string_view text) { return detail::mdp_from_json(detail::parse_json(text)); }

Mdp load_mdp(const std::filesystem::path& path) { return parse_mdp(read_text_file(path)); }

std::string serialize_mdp(const Mdp& m) { return detail::format_document(detail::mdp_to_json(m)); }

void save_mdp(const Mdp& m, const std::filesystem::path& path) {
  write_text_file(path, serialize_mdp(m));
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw ValidationError("failed writing " + path.string());
}

}  // namespace spanmdp
