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

#ifndef BIASFST_COMMON_H_
#define BIASFST_COMMON_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <spdlog/spdlog.h>

namespace biasfst {

// All module errors surface as this type; the CLI maps it to a nonzero exit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shared stderr logger. Level comes from BIASFST_LOG
// (trace|debug|info|warn|error|off), default warn.
spdlog::logger& Log();

// mt19937_64-backed generator with portable double/int mapping, so seeded
// runs are bit-identical across standard library implementations.
class Rng {
 public:
  explicit Rng(uint64_t seed);
  uint64_t Next();
  // Uniform in [0, 1).
  double Uniform();
  // Uniform in [0, n), n > 0.
  size_t Index(size_t n);

 private:
  std::mt19937_64 engine_;
};

// Stable 64-bit mix of a seed with a string key (FNV-1a + splitmix finalizer).
uint64_t DeriveSeed(uint64_t seed, std::string_view key);

// Runs fn(i) for i in [0, n) on up to `jobs` threads. The first exception
// thrown by any task is rethrown on the calling thread.
void ParallelFor(size_t n, int jobs, const std::function<void(size_t)>& fn);

std::vector<std::string> SplitWhitespace(std::string_view text);
std::string Join(const std::vector<std::string>& parts, std::string_view sep);

}  // namespace biasfst

#endif  // BIASFST_COMMON_H_
