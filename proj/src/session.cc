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

#include "ppimpute/session.h"

#include <chrono>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>

namespace ppimpute::mpc {

std::uint64_t SessionStats::total_bytes() const {
  std::uint64_t total = 0;
  for (const auto& t : transcripts) total += t.bytes_sent();
  return total;
}

std::uint64_t SessionStats::digest() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& t : transcripts) {
    h = (h ^ t.digest()) * 0x100000001b3ULL;
    h ^= h >> 31;
  }
  return h;
}

SessionStats run_session(const SessionConfig& cfg,
                         const std::function<void(Party&)>& body) {
  return run_session(std::array<SessionConfig, kNumParties>{cfg, cfg, cfg}, body);
}

SessionStats run_session(const std::array<SessionConfig, kNumParties>& cfgs,
                         const std::function<void(Party&)>& body) {
  const TransportKind kind = cfgs[0].transport;
  for (const auto& c : cfgs) {
    if (c.transport != kind) throw std::invalid_argument("parties disagree on transport");
  }

  for (const auto& c : cfgs) c.fx.validate();

  std::optional<InProcessNetwork> inproc;
  std::optional<TcpNetwork> tcp;
  if (kind == TransportKind::kInProcess) {
    inproc.emplace();
  } else {
    tcp.emplace();
  }

  SessionStats stats;
  std::mutex mu;
  std::exception_ptr first_error;
  std::array<std::unique_ptr<Party>, kNumParties> parties;

  auto fail = [&](std::exception_ptr e) {
    std::lock_guard lock(mu);
    if (!first_error) first_error = e;
  };

  const auto start = std::chrono::steady_clock::now();
  std::array<std::thread, kNumParties> threads;
  for (std::size_t i = 0; i < kNumParties; ++i) {
    threads[i] = std::thread([&, i] {
      const auto role = static_cast<Role>(i);
      try {
        std::unique_ptr<Endpoint> ep = tcp ? tcp->connect(role) : inproc->endpoint(role);
        parties[i] = std::make_unique<Party>(role, cfgs[i], std::move(ep));
        parties[i]->handshake();
        body(*parties[i]);
      } catch (...) {
        fail(std::current_exception());
        if (tcp) tcp->abort();
        if (inproc) inproc->abort();
      }
    });
  }
  for (auto& t : threads) t.join();
  stats.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (first_error) std::rethrow_exception(first_error);
  for (std::size_t i = 0; i < kNumParties; ++i) {
    stats.transcripts[i] = parties[i]->transcript();
    stats.usage[i] = parties[i]->dealer().usage();
  }
  return stats;
}

}  // namespace ppimpute::mpc
