#pragma once

#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

namespace voxrep::cli {

// CLI11 config formatter for a JSON document mirroring flag names, with one
// nested object per subcommand: {"synth": {"scenes": 20, "seed": 7}}.
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App* app, bool default_also, bool, std::string) const override {
    return to_json(app, default_also).dump();
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    nlohmann::json j;
    try {
      input >> j;
    } catch (const nlohmann::json::exception& e) {
      throw CLI::ConversionError(std::string("config file is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw CLI::ConversionError("config file must hold a JSON object");
    std::vector<CLI::ConfigItem> items;
    collect(j, {}, items);
    return items;
  }

 private:
  static nlohmann::ordered_json to_json(const CLI::App* app, bool default_also) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const CLI::Option* opt : app->get_options({})) {
      if (opt->get_lnames().empty() || !opt->get_configurable()) continue;
      const std::string name = opt->get_lnames()[0];
      if (name == "help" || name == "config") continue;
      if (opt->get_type_size() != 0) {
        if (opt->count() == 1) j[name] = opt->results().at(0);
        else if (opt->count() > 1) j[name] = opt->results();
        else if (default_also && !opt->get_default_str().empty()) j[name] = opt->get_default_str();
      } else if (opt->count() > 0 || default_also) {
        j[name] = opt->count() > 0;
      }
    }
    for (const CLI::App* sub : app->get_subcommands({})) {
      if (sub->parsed()) j[sub->get_name()] = to_json(sub, default_also);
    }
    return j;
  }

  static void collect(const nlohmann::json& j, const std::vector<std::string>& parents,
                      std::vector<CLI::ConfigItem>& items) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (it->is_object()) {
        auto next = parents;
        next.push_back(it.key());
        collect(*it, next, items);
        continue;
      }
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = it.key();
      if (it->is_boolean()) {
        item.inputs = {it->get<bool>() ? "true" : "false"};
      } else if (it->is_string()) {
        item.inputs = {it->get<std::string>()};
      } else if (it->is_number()) {
        item.inputs = {it->dump()};
      } else if (it->is_array()) {
        for (const auto& v : *it) item.inputs.push_back(v.is_string() ? v.get<std::string>() : v.dump());
      } else {
        throw CLI::ConversionError("unsupported config value for '" + it.key() + "'");
      }
      items.push_back(std::move(item));
    }
  }
};

}  // namespace voxrep::cli
