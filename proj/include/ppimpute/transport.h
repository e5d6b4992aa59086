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
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ppimpute/fixedpoint.h"

namespace ppimpute::mpc {

enum class Role : std::uint8_t { P0 = 0, P1 = 1, Helper = 2 };

constexpr std::size_t kNumParties = 3;

constexpr std::size_t index_of(Role r) { return static_cast<std::size_t>(r); }
const char* role_name(Role r);

// Every message kind that crosses the wire. The classification below is what
// the transcript audit checks: computing parties only ever send values that
// are blinded by a fresh one-time mask, plus explicitly designated outputs.
enum class MsgTag : std::uint8_t {
  kHello = 1,         // session agreement (session id, frac bits)
  kKeySetup = 2,      // helper -> P0/P1 pairwise PRG seed
  kCorrelated = 3,    // helper -> P1 correction words of dealt randomness
  kBeaverOpen = 4,    // x - a, y - b with a, b uniform
  kAndOpen = 5,       // x ^ u, y ^ v with u, v uniform
  kBitOpen = 6,       // t ^ rho with rho a uniform bit
  kMatrixOpen = 7,    // X - A, Y - B with A, B uniform
  kOutput = 8,        // designated output opening
  kDebugReveal = 9,   // opt-in diagnostics only
};

const char* tag_name(MsgTag tag);

enum class TagClass { kSetup, kDealer, kBlinded, kOutput, kDebug };
TagClass classify(MsgTag tag);

class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Frame layout: u32 LE payload byte length | u8 tag | u64 LE session id |
// payload of u64 LE ring elements.
constexpr std::size_t kFrameHeaderBytes = 4 + 1 + 8;

struct Frame {
  MsgTag tag{};
  std::uint64_t session_id = 0;
  std::vector<RingElement> payload;
};

std::vector<std::uint8_t> encode_frame(MsgTag tag, std::uint64_t session_id,
                                       std::span<const RingElement> payload);
Frame decode_frame(std::span<const std::uint8_t> bytes);

// One party's ordered, reliable, per-peer byte pipe.
class Endpoint {
 public:
  virtual ~Endpoint() = default;
  virtual Role self() const = 0;
  virtual void send(Role to, std::vector<std::uint8_t> frame) = 0;
  virtual std::vector<std::uint8_t> recv(Role from) = 0;
  // Unblocks every pending and future recv on all parties of the network.
  virtual void abort() = 0;
};

// Three in-process endpoints backed by locked queues.
class InProcessNetwork {
 public:
  InProcessNetwork();
  std::unique_ptr<Endpoint> endpoint(Role self);
  void abort();

 private:
  std::shared_ptr<struct InProcessHub> hub_;
};

// Loopback TCP network. Listening sockets are bound in the caller; each
// returned factory connects its party when invoked on the party's thread.
class TcpNetwork {
 public:
  explicit TcpNetwork(std::string host = "127.0.0.1");
  ~TcpNetwork();
  TcpNetwork(const TcpNetwork&) = delete;
  TcpNetwork& operator=(const TcpNetwork&) = delete;

  std::uint16_t port(Role r) const { return ports_[index_of(r)]; }

  struct Shared;

  // Blocks until all connections of `self` are established.
  std::unique_ptr<Endpoint> connect(Role self);

  // Forces any party still connecting or receiving to fail.
  void abort();

 private:
  std::string host_;
  std::array<int, kNumParties> listen_fds_{-1, -1, -1};
  std::array<std::uint16_t, kNumParties> ports_{};
  std::shared_ptr<Shared> shared_;
};

}  // namespace ppimpute::mpc
