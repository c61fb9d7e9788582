/*
 * Copyright 2026 The secagg Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef SECAGG_HASH_H_
#define SECAGG_HASH_H_

#include <array>
#include <cstdint>
#include <initializer_list>

#include "secagg/bytes.h"

namespace secagg {

using Digest32 = std::array<uint8_t, 32>;
using Digest64 = std::array<uint8_t, 64>;

// SHA-256 / SHA-512 over the concatenation of the given parts.
Digest32 Sha256(std::initializer_list<ByteView> parts);
Digest64 Sha512(std::initializer_list<ByteView> parts);

inline Digest32 Sha256(ByteView data) { return Sha256({data}); }

}  // namespace secagg

#endif  // SECAGG_HASH_H_
