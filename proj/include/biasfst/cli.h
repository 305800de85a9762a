// Copyright (c) 2026 BiasFST Authors
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

#ifndef BIASFST_CLI_H_
#define BIASFST_CLI_H_

#include <map>
#include <string>
#include <vector>

namespace biasfst {

// Flat `key = value` config file. Repeated keys and `[a, b]` arrays both
// append; `#` starts a comment line. Keys are long flag names without dashes.
std::map<std::string, std::vector<std::string>> ReadConfigFile(const std::string& path);

// Entry point of the biasfst tool; returns the process exit status.
int RunCli(const std::vector<std::string>& args);
int RunCli(int argc, const char* const* argv);

}  // namespace biasfst

#endif  // BIASFST_CLI_H_
