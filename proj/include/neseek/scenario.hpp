#pragma once

#include <string>

#include "neseek/errors.hpp"
#include "neseek/sim.hpp"

namespace neseek {

// Malformed scenario document. line() is set for syntax errors (1-based, 0 when unknown);
// field() is the JSON path of the offending value for schema errors, e.g. "agents[2].gains.ko".
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, std::string field, std::size_t line = 0)
      : Error(what), field_(std::move(field)), line_(line) {}
  const std::string& field() const { return field_; }
  std::size_t line() const { return line_; }

 private:
  std::string field_;
  std::size_t line_;
};

// source is only used in diagnostics.
ScenarioConfig parse_scenario(const std::string& text, const std::string& source = "<string>");
ScenarioConfig load_scenario(const std::string& path);

// Presets, sinusoid disturbances and tracking-form games are written in their compact form,
// so parse_scenario(to_json(cfg)) == cfg.
std::string to_json(const ScenarioConfig& cfg);
void save_scenario(const ScenarioConfig& cfg, const std::string& path);

}  // namespace neseek
