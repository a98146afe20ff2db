#include <string>

#include <nlohmann/json.hpp>

#include "dersim/scenario.hpp"

namespace dersim {
namespace detail {
const std::vector<std::pair<std::string_view, std::string_view>>& EmbeddedScenarioFiles();
}  // namespace detail

const std::vector<BuiltinScenario>& BuiltinScenarios() {
  static const std::vector<BuiltinScenario> all = [] {
    std::vector<BuiltinScenario> out;
    for (const auto& [stem, text] : detail::EmbeddedScenarioFiles()) {
      const auto j = nlohmann::json::parse(text, nullptr, true, true);
      out.push_back({std::string(stem), j.value("description", std::string()), std::string(text)});
    }
    return out;
  }();
  return all;
}

}  // namespace dersim
