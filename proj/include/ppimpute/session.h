// Copyright 2026 The ppimpute Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <functional>

#include "ppimpute/party.h"

namespace ppimpute::mpc {

struct SessionStats {
  std::array<Transcript, kNumParties> transcripts;
  std::array<Dealer::Usage, kNumParties> usage;
  double seconds = 0.0;

  std::uint64_t total_bytes() const;
  // Order-sensitive combination of the three per-party digests.
  std::uint64_t digest() const;
};

// Runs `body` on three concurrent parties (one thread each) after the session
// handshake. If any party throws, the network is torn down so that the
// others unblock, and the first failure is rethrown here.
SessionStats run_session(const SessionConfig& cfg,
                         const std::function<void(Party&)>& body);

// Per-party configurations; used to exercise disagreement handling.
SessionStats run_session(const std::array<SessionConfig, kNumParties>& cfgs,
                         const std::function<void(Party&)>& body);

}  // namespace ppimpute::mpc
