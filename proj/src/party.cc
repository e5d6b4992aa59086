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

#include "ppimpute/party.h"

#include <string>

namespace ppimpute::mpc {

void Transcript::record(Role from, Role to, MsgTag tag,
                        std::span<const std::uint8_t> frame) {
  records_.push_back({from, to, tag, frame.size()});
  bytes_ += frame.size();
  // Word-wise multiply-xorshift fold; a reproducibility fingerprint, not a MAC.
  std::uint64_t h = digest_ ^ (static_cast<std::uint64_t>(index_of(to)) << 8 |
                               static_cast<std::uint64_t>(tag));
  std::size_t i = 0;
  for (; i + 8 <= frame.size(); i += 8) {
    h = (h ^ load_le(frame.data() + i)) * 0x9e3779b97f4a7c15ULL;
    h ^= h >> 29;
  }
  for (; i < frame.size(); ++i) {
    h = (h ^ frame[i]) * 0x100000001b3ULL;
  }
  digest_ = h;
}

Party::Party(Role role, const SessionConfig& cfg, std::unique_ptr<Endpoint> endpoint)
    : role_(role),
      cfg_(cfg),
      endpoint_(std::move(endpoint)),
      local_(Prg::derive_seed(cfg.seeds[index_of(role)],
                              std::string("party-local/") + role_name(role))),
      dealer_(*this, cfg.on_demand_randomness) {
  cfg_.fx.validate();
}

Role Party::peer() const {
  if (role_ == Role::Helper) throw std::logic_error("the helper has no computing peer");
  return role_ == Role::P0 ? Role::P1 : Role::P0;
}

void Party::send(Role to, MsgTag tag, std::span<const RingElement> payload) {
  auto frame = encode_frame(tag, cfg_.session_id, payload);
  transcript_.record(role_, to, tag, frame);
  endpoint_->send(to, std::move(frame));
}

std::vector<RingElement> Party::recv(Role from, MsgTag tag, std::size_t expected) {
  Frame f = decode_frame(endpoint_->recv(from));
  if (f.session_id != cfg_.session_id) {
    throw SessionMismatch("message from " + std::string(role_name(from)) +
                          " carries session id " + std::to_string(f.session_id));
  }
  if (f.tag != tag) {
    throw TransportError(std::string("expected ") + tag_name(tag) + " from " +
                         role_name(from) + ", got " + tag_name(f.tag));
  }
  if (f.payload.size() != expected) {
    throw TransportError(std::string(tag_name(tag)) + " payload has " +
                         std::to_string(f.payload.size()) + " elements, expected " +
                         std::to_string(expected));
  }
  return std::move(f.payload);
}

std::vector<RingElement> Party::exchange(MsgTag tag, std::span<const RingElement> mine) {
  const Role other = peer();
  send(other, tag, mine);
  return recv(other, tag, mine.size());
}

Prg& Party::dealer_prg(Role with) {
  if (role_ == Role::Helper) {
    auto& p = with == Role::P0 ? with_p0_ : with_p1_;
    if (!p || with == Role::Helper) throw std::logic_error("helper PRG not set up");
    return *p;
  }
  if (!with_helper_) throw std::logic_error("dealer PRG used before handshake");
  return *with_helper_;
}

void Party::handshake() {
  const RingElement hello[2] = {static_cast<RingElement>(cfg_.fx.frac_bits),
                                cfg_.session_id};
  for (std::size_t i = 0; i < kNumParties; ++i) {
    const auto other = static_cast<Role>(i);
    if (other != role_) send(other, MsgTag::kHello, hello);
  }
  for (std::size_t i = 0; i < kNumParties; ++i) {
    const auto other = static_cast<Role>(i);
    if (other == role_) continue;
    const auto got = recv(other, MsgTag::kHello, 2);
    if (got[0] != hello[0] || got[1] != hello[1]) {
      throw SessionMismatch(std::string(role_name(other)) +
                            " disagrees on fixed-point config or session id");
    }
  }

  auto to_words = [](const Prg::Seed& s) {
    std::vector<RingElement> w(4);
    for (std::size_t i = 0; i < 4; ++i) w[i] = load_le(s.data() + 8 * i);
    return w;
  };
  auto from_words = [](const std::vector<RingElement>& w) {
    Prg::Seed s{};
    for (std::size_t i = 0; i < 4; ++i) store_le(w[i], s.data() + 8 * i);
    return s;
  };

  if (is_helper()) {
    const auto s0 = local_.next_seed();
    const auto s1 = local_.next_seed();
    send(Role::P0, MsgTag::kKeySetup, to_words(s0));
    send(Role::P1, MsgTag::kKeySetup, to_words(s1));
    with_p0_.emplace(s0);
    with_p1_.emplace(s1);
  } else {
    with_helper_.emplace(from_words(recv(Role::Helper, MsgTag::kKeySetup, 4)));
  }
}

}  // namespace ppimpute::mpc
