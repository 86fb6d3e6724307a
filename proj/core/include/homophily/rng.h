// Copyright 2026 The Homophily Authors
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

#ifndef HOMOPHILY_RNG_H_
#define HOMOPHILY_RNG_H_

#include <cstdint>
#include <random>

#include "absl/strings/string_view.h"

namespace homophily {

using Rng = std::mt19937_64;

// Counter-based child seed: a pure function of (base, index, stream), so
// adding a new stream never shifts the draws of an existing one.
uint64_t MixSeed(uint64_t base, uint64_t index, absl::string_view stream);

inline Rng MakeStream(uint64_t base, uint64_t index, absl::string_view stream) {
  return Rng(MixSeed(base, index, stream));
}

}  // namespace homophily

#endif  // HOMOPHILY_RNG_H_
