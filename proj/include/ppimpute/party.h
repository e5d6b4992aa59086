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

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "ppimpute/dealer.h"
#include "ppimpute/fixedpoint.h"
#include "ppimpute/prg.h"
#include "ppimpute/transport.h"

namespace ppimpute::mpc {

enum class TransportKind { kInProcess, kTcp };

struct SessionConfig {
  FxConfig fx;
  std::uint64_t session_id = 1;
  // Per-party local randomness seeds, indexed by Role.
  std::array<std::uint64_t, kNumParties> seeds{0x5eed0, 0x5eed1, 0x5eed2};
  TransportKind transport = TransportKind::kInProcess;
  // When false, every dealer request must be covered by a provisioned batch.
  bool on_demand_randomness = true;
};

class SessionMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MessageRecord {
  Role from;
  Role to;
  MsgTag tag;
  std::uint64_t bytes;
};

// What one party sent, in order. The digest folds in every frame byte, so two
// sessions with identical digests sent byte-identical traffic.
class Transcript {
 public:
  void record(Role from, Role to, MsgTag tag, std::span<const std::uint8_t> frame);

  const std::vector<MessageRecord>& records() const { return records_; }
  std::uint64_t bytes_sent() const { return bytes_; }
  std::uint64_t digest() const { return digest_; }

 private:
  std::vector<MessageRecord> records_;
  std::uint64_t bytes_ = 0;
  std::uint64_t digest_ = 0x6a09e667f3bcc908ULL;
};

// One party's view of a running session: identity, transport, randomness.
// Protocol code is written once and executed by all three parties in
// lockstep; the helper runs the same call sequence without data.
class Party {
 public:
  Party(Role role, const SessionConfig& cfg, std::unique_ptr<Endpoint> endpoint);
  Party(const Party&) = delete;
  Party& operator=(const Party&) = delete;

  Role role() const { return role_; }
  bool is_helper() const { return role_ == Role::Helper; }
  bool is_p0() const { return role_ == Role::P0; }
  // The other computing party. Not valid on the helper.
  Role peer() const;

  const FxConfig& fx() const { return cfg_.fx; }
  int frac_bits() const { return cfg_.fx.frac_bits; }
  std::uint64_t session_id() const { return cfg_.session_id; }

  // Agree on session id and fixed-point config, then distribute the
  // helper<->party PRG seeds. Called once by the session runner.
  void handshake();

  void send(Role to, MsgTag tag, std::span<const RingElement> payload);
  std::vector<RingElement> recv(Role from, MsgTag tag, std::size_t expected);
  // Computing parties only: send ours to the peer, return the peer's.
  std::vector<RingElement> exchange(MsgTag tag, std::span<const RingElement> mine);

  Prg& local_prg() { return local_; }
  // On P0/P1: the stream shared with the helper. On the helper: the stream
  // shared with `with` (P0 or P1).
  Prg& dealer_prg(Role with);

  Dealer& dealer() { return dealer_; }
  const Transcript& transcript() const { return transcript_; }

  void abort() { endpoint_->abort(); }

 private:
  Role role_;
  SessionConfig cfg_;
  std::unique_ptr<Endpoint> endpoint_;
  Prg local_;
  std::optional<Prg> with_p0_;
  std::optional<Prg> with_p1_;
  std::optional<Prg> with_helper_;
  Transcript transcript_;
  Dealer dealer_;
};

}  // namespace ppimpute::mpc
