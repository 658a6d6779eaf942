// Copyright 2026 The flycap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FLYCAP_CONFIG_HPP_
#define FLYCAP_CONFIG_HPP_

#include <istream>
#include <stdexcept>
#include <string>
#include <vector>

#include "flycap/sim.hpp"

namespace flycap {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& msg);
  int line() const { return line_; }  // 0 when not tied to a line

 private:
  int line_;
};

/// Parses `key = value` lines ('#' starts a comment).  Lists are comma
/// separated, optionally bracketed.  Unspecified keys keep the values of
/// ScenarioConfig::nominal(); unknown or repeated keys are errors.  The
/// result is validated, and invariant violations are reported as
/// ConfigError on the line of the offending key.
ScenarioConfig parse_config(std::istream& in);
ScenarioConfig load_config(const std::string& path);

/// Explicit mode list: switch vectors separated by ';' or newlines,
/// e.g. "[1,0,0];[1,1,0]".  Each entry lasts one time unit.
HybridTimeTrajectory parse_mode_list(std::istream& in, int p);

std::vector<std::string> known_config_keys();

}  // namespace flycap

#endif  // FLYCAP_CONFIG_HPP_
