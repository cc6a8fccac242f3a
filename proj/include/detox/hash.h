// Copyright 2026 The Detox Authors.
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

#ifndef DETOX_HASH_H_
#define DETOX_HASH_H_

#include <cstdint>
#include <string>
#include <string_view>

namespace detox {

// 64-bit FNV-1a. Used for content fingerprints, not for security.
uint64_t Fnv1a64(std::string_view bytes);

// Fnv1a64 rendered as 16 lowercase hex digits.
std::string Fingerprint(std::string_view bytes);

// SplitMix64 finalizer; derives independent sub-seeds from one seed.
uint64_t MixSeed(uint64_t seed, uint64_t stream);

}  // namespace detox

#endif  // DETOX_HASH_H_
