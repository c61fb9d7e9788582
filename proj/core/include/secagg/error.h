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

#ifndef SECAGG_ERROR_H_
#define SECAGG_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace secagg {

enum class ErrorCode {
  kInvalidIndexSet,
  kMissingShare,
  kEmptyExpansion,
  kThresholdTooLarge,
  kInsufficientShares,
  kDegenerateExtension,
  kAccessDenied,
  kDkgComplaint,
  kInvalidPeerKey,
  kAeAuthFailure,
  kInvalidIndex,
  kMerkleVerifyFailure,
  kInvalidConfig,
  kNotParticipant,
  kMissingSeed,
  kRoundAbort,
  kConsistencyAbort,
  kVerifyUnavailable,
  kCombineReject,
  kInvalidPlan,
  kMalformed,
};

std::string_view ErrorCodeName(ErrorCode code);

// All recoverable failures in the library are reported with this type. The
// code is the contract; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void Fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace secagg

#endif  // SECAGG_ERROR_H_
