#include "nsw/io.hpp"

#include <fstream>
#include <sstream>

namespace nsw {
namespace {

Rational rational_field(const nlohmann::json& j, const std::string& where) {
  try {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.dump());
    if (j.is_number_float()) return parse_rational(j.dump());
  } catch (const std::invalid_argument& e) {
    throw InputError(where + ": " + e.what());
  }
  throw InputError(where + ": expected a rational string or number");
}

std::pair<std::size_t, std::size_t> line_and_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, column = 1;
  for (std::size_t k = 0; k < byte && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

}  // namespace

Instance instance_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw InputError("instance: expected a JSON object");
  if (!j.contains("num_items") || !j["num_items"].is_number_integer() || j["num_items"].get<long long>() < 0) {
    throw InputError("instance: 'num_items' must be a nonnegative integer");
  }
  if (!j.contains("agents") || !j["agents"].is_array()) throw InputError("instance: 'agents' must be an array");
  Instance inst;
  inst.num_items = j["num_items"].get<std::size_t>();
  const auto& agents = j["agents"];
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const auto& a = agents[i];
    const std::string where = "agents[" + std::to_string(i) + "]";
    if (!a.is_object() || !a.contains("weight") || !a.contains("values") || !a["values"].is_array()) {
      throw InputError(where + ": expected {\"weight\": ..., \"values\": [...]}");
    }
    Agent agent;
    agent.weight = rational_field(a["weight"], where + ".weight");
    for (std::size_t k = 0; k < a["values"].size(); ++k) {
      agent.values.push_back(rational_field(a["values"][k], where + ".values[" + std::to_string(k) + "]"));
    }
    inst.agents.push_back(std::move(agent));
  }
  inst.scale.assign(inst.agents.size(), Rational(1));
  try {
    validate(inst);
  } catch (const InstanceError& e) {
    throw InputError(std::string("instance: ") + e.what());
  }
  return inst;
}

nlohmann::json instance_to_json(const Instance& instance) {
  nlohmann::json agents = nlohmann::json::array();
  for (AgentId i = 0; i < instance.num_agents(); ++i) {
    nlohmann::json values = nlohmann::json::array();
    for (ItemId j = 0; j < instance.num_items; ++j) values.push_back(format_rational(instance.original_value(i, j)));
    agents.push_back({{"weight", format_rational(instance.agents[i].weight)}, {"values", values}});
  }
  return {{"num_items", instance.num_items}, {"agents", agents}};
}

Allocation allocation_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("owner") || !j["owner"].is_array()) {
    throw InputError("allocation: expected {\"owner\": [...]}");
  }
  Allocation alloc;
  for (std::size_t k = 0; k < j["owner"].size(); ++k) {
    const auto& o = j["owner"][k];
    if (o.is_null()) {
      alloc.owner.emplace_back();
    } else if (o.is_number_unsigned() || (o.is_number_integer() && o.get<long long>() >= 0)) {
      alloc.owner.emplace_back(o.get<AgentId>());
    } else {
      throw InputError("allocation: owner[" + std::to_string(k) + "] must be an agent index or null");
    }
  }
  return alloc;
}

nlohmann::json allocation_to_json(const Allocation& alloc) {
  nlohmann::json owner = nlohmann::json::array();
  for (const auto& o : alloc.owner) {
    if (o) owner.push_back(*o);
    else owner.push_back(nullptr);
  }
  return {{"owner", owner}};
}

nlohmann::json parse_json_text(const std::string& text, const std::string& source_name) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const auto [line, column] = line_and_column(text, e.byte == 0 ? 0 : e.byte - 1);
    throw InputError(source_name + ":" + std::to_string(line) + ":" + std::to_string(column) +
                     ": malformed JSON (" + e.what() + ")");
  }
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_json_text(buf.str(), path.string());
}

Instance read_instance(const std::filesystem::path& path) { return instance_from_json(read_json_file(path)); }

Allocation read_allocation(const std::filesystem::path& path) {
  return allocation_from_json(read_json_file(path));
}

std::string to_text(const nlohmann::json& j) { return j.dump(2) + "\n"; }

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
}

}  // namespace nsw
