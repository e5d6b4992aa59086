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

#include "ppimpute/prg.h"

#include <sodium.h>

#include <algorithm>
#include <cstring>
#include <stdexcept>

namespace ppimpute {
namespace {

void ensure_sodium() {
  static const bool ready = [] { return sodium_init() >= 0; }();
  if (!ready) throw std::runtime_error("libsodium initialization failed");
}

}  // namespace

Prg::Prg(const Seed& seed) : key_(seed) { ensure_sodium(); }

Prg::Seed Prg::derive_seed(std::uint64_t value, std::string_view domain) {
  ensure_sodium();
  Seed out{};
  std::uint8_t msg[8];
  for (int i = 0; i < 8; ++i) msg[i] = static_cast<std::uint8_t>(value >> (8 * i));
  crypto_generichash_state st;
  crypto_generichash_init(&st, nullptr, 0, out.size());
  crypto_generichash_update(
      &st, reinterpret_cast<const unsigned char*>(domain.data()), domain.size());
  crypto_generichash_update(&st, msg, sizeof(msg));
  crypto_generichash_final(&st, out.data(), out.size());
  return out;
}

void Prg::refill() {
  std::uint8_t nonce[crypto_stream_chacha20_NONCEBYTES];
  for (std::size_t i = 0; i < sizeof(nonce); ++i) {
    nonce[i] = static_cast<std::uint8_t>(block_nonce_ >> (8 * i));
  }
  ++block_nonce_;
  crypto_stream_chacha20(reinterpret_cast<unsigned char*>(buffer_.data()),
                         sizeof(buffer_), nonce, key_.data());
  cursor_ = 0;
}

std::uint64_t Prg::next() {
  if (cursor_ == kBufferWords) refill();
  return buffer_[cursor_++];
}

void Prg::fill(std::span<std::uint64_t> out) {
  std::size_t done = 0;
  while (done < out.size()) {
    if (cursor_ == kBufferWords) refill();
    const std::size_t take = std::min(out.size() - done, kBufferWords - cursor_);
    std::memcpy(out.data() + done, buffer_.data() + cursor_,
                take * sizeof(std::uint64_t));
    cursor_ += take;
    done += take;
  }
}

Prg::Seed Prg::next_seed() {
  Seed s{};
  for (std::size_t i = 0; i < s.size(); i += 8) {
    const std::uint64_t w = next();
    std::memcpy(s.data() + i, &w, 8);
  }
  return s;
}

std::uint64_t Prg::uniform(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("Prg::uniform bound must be > 0");
  const std::uint64_t limit = max() - (max() % bound + 1) % bound;
  std::uint64_t v;
  do {
    v = next();
  } while (v > limit);
  return v % bound;
}

double Prg::uniform_real() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

}  // namespace ppimpute
