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

#include "ppimpute/transport.h"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <atomic>
#include <bit>
#include <cstring>
#include <cerrno>
#include <chrono>
#include <condition_variable>
#include <cstring>
#include <deque>
#include <mutex>
#include <thread>

namespace ppimpute::mpc {

const char* role_name(Role r) {
  switch (r) {
    case Role::P0: return "P0";
    case Role::P1: return "P1";
    case Role::Helper: return "Helper";
  }
  return "?";
}

const char* tag_name(MsgTag tag) {
  switch (tag) {
    case MsgTag::kHello: return "hello";
    case MsgTag::kKeySetup: return "key-setup";
    case MsgTag::kCorrelated: return "correlated";
    case MsgTag::kBeaverOpen: return "beaver-open";
    case MsgTag::kAndOpen: return "and-open";
    case MsgTag::kBitOpen: return "bit-open";
    case MsgTag::kMatrixOpen: return "matrix-open";
    case MsgTag::kOutput: return "output";
    case MsgTag::kDebugReveal: return "debug-reveal";
  }
  return "unknown";
}

TagClass classify(MsgTag tag) {
  switch (tag) {
    case MsgTag::kHello:
    case MsgTag::kKeySetup: return TagClass::kSetup;
    case MsgTag::kCorrelated: return TagClass::kDealer;
    case MsgTag::kBeaverOpen:
    case MsgTag::kAndOpen:
    case MsgTag::kBitOpen:
    case MsgTag::kMatrixOpen: return TagClass::kBlinded;
    case MsgTag::kOutput: return TagClass::kOutput;
    case MsgTag::kDebugReveal: return TagClass::kDebug;
  }
  throw TransportError("unclassified message tag");
}

std::vector<std::uint8_t> encode_frame(MsgTag tag, std::uint64_t session_id,
                                       std::span<const RingElement> payload) {
  const std::size_t payload_bytes = payload.size() * 8;
  if (payload_bytes > 0xffffffffULL) {
    throw TransportError("payload exceeds 4 GiB frame limit");
  }
  std::uint8_t header[kFrameHeaderBytes];
  const auto len = static_cast<std::uint32_t>(payload_bytes);
  for (int i = 0; i < 4; ++i) header[i] = static_cast<std::uint8_t>(len >> (8 * i));
  header[4] = static_cast<std::uint8_t>(tag);
  store_le(session_id, header + 5);

  std::vector<std::uint8_t> out;
  out.reserve(kFrameHeaderBytes + payload_bytes);
  out.insert(out.end(), header, header + kFrameHeaderBytes);
  if constexpr (std::endian::native == std::endian::little) {
    const auto* raw = reinterpret_cast<const std::uint8_t*>(payload.data());
    out.insert(out.end(), raw, raw + payload_bytes);
  } else {
    out.resize(kFrameHeaderBytes + payload_bytes);
    std::uint8_t* p = out.data() + kFrameHeaderBytes;
    for (RingElement v : payload) {
      store_le(v, p);
      p += 8;
    }
  }
  return out;
}

Frame decode_frame(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kFrameHeaderBytes) throw TransportError("truncated frame header");
  std::uint32_t len = 0;
  for (int i = 0; i < 4; ++i) len |= static_cast<std::uint32_t>(bytes[i]) << (8 * i);
  if (len % 8 != 0 || bytes.size() != kFrameHeaderBytes + len) {
    throw TransportError("frame length mismatch");
  }
  Frame f;
  f.tag = static_cast<MsgTag>(bytes[4]);
  f.session_id = load_le(bytes.data() + 5);
  f.payload.resize(len / 8);
  const std::uint8_t* p = bytes.data() + kFrameHeaderBytes;
  if constexpr (std::endian::native == std::endian::little) {
    if (len != 0) std::memcpy(f.payload.data(), p, len);
  } else {
    for (auto& v : f.payload) {
      v = load_le(p);
      p += 8;
    }
  }
  return f;
}

// ---------------------------------------------------------------------------
// In-process

struct Mailbox {
  std::mutex mu;
  std::condition_variable cv;
  std::deque<std::vector<std::uint8_t>> queue;
};

struct InProcessHub {
  // mailboxes[from][to]
  std::array<std::array<Mailbox, kNumParties>, kNumParties> mailboxes;
  std::atomic<bool> aborted{false};

  void abort_all() {
    aborted = true;
    for (auto& row : mailboxes) {
      for (auto& box : row) {
        std::lock_guard lock(box.mu);
        box.cv.notify_all();
      }
    }
  }
};

namespace {

class InProcessEndpoint final : public Endpoint {
 public:
  InProcessEndpoint(Role self, std::shared_ptr<InProcessHub> hub)
      : self_(self), hub_(std::move(hub)) {}

  Role self() const override { return self_; }

  void send(Role to, std::vector<std::uint8_t> frame) override {
    if (hub_->aborted) throw TransportError("session aborted");
    auto& box = hub_->mailboxes[index_of(self_)][index_of(to)];
    {
      std::lock_guard lock(box.mu);
      box.queue.push_back(std::move(frame));
    }
    box.cv.notify_one();
  }

  std::vector<std::uint8_t> recv(Role from) override {
    auto& box = hub_->mailboxes[index_of(from)][index_of(self_)];
    std::unique_lock lock(box.mu);
    box.cv.wait(lock, [&] { return !box.queue.empty() || hub_->aborted; });
    if (box.queue.empty()) throw TransportError("session aborted");
    auto out = std::move(box.queue.front());
    box.queue.pop_front();
    return out;
  }

  void abort() override { hub_->abort_all(); }

 private:
  Role self_;
  std::shared_ptr<InProcessHub> hub_;
};

}  // namespace

InProcessNetwork::InProcessNetwork() : hub_(std::make_shared<InProcessHub>()) {}

std::unique_ptr<Endpoint> InProcessNetwork::endpoint(Role self) {
  return std::make_unique<InProcessEndpoint>(self, hub_);
}

void InProcessNetwork::abort() { hub_->abort_all(); }

// ---------------------------------------------------------------------------
// TCP

struct TcpNetwork::Shared {
  std::mutex mu;
  std::vector<int> fds;
  std::atomic<bool> aborted{false};

  void track(int fd) {
    std::lock_guard lock(mu);
    fds.push_back(fd);
  }
  void abort_all() {
    aborted = true;
    std::lock_guard lock(mu);
    for (int fd : fds) ::shutdown(fd, SHUT_RDWR);
  }
};

namespace {

void write_all(int fd, const std::uint8_t* data, std::size_t len) {
  while (len > 0) {
    const ssize_t n = ::send(fd, data, len, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw TransportError(std::string("tcp send failed: ") + std::strerror(errno));
    }
    data += n;
    len -= static_cast<std::size_t>(n);
  }
}

void read_all(int fd, std::uint8_t* data, std::size_t len) {
  while (len > 0) {
    const ssize_t n = ::recv(fd, data, len, 0);
    if (n == 0) throw TransportError("tcp peer closed the connection");
    if (n < 0) {
      if (errno == EINTR) continue;
      throw TransportError(std::string("tcp recv failed: ") + std::strerror(errno));
    }
    data += n;
    len -= static_cast<std::size_t>(n);
  }
}

// A connected peer with a dedicated writer thread, so that two parties
// sending large frames to each other at the same time cannot deadlock on
// full socket buffers.
class TcpPeer {
 public:
  explicit TcpPeer(int fd) : fd_(fd), writer_([this] { write_loop(); }) {}

  ~TcpPeer() {
    {
      std::lock_guard lock(mu_);
      closing_ = true;
    }
    cv_.notify_all();
    writer_.join();
    ::close(fd_);
  }

  void send(std::vector<std::uint8_t> frame) {
    {
      std::lock_guard lock(mu_);
      if (failed_) throw TransportError("tcp writer failed");
      queue_.push_back(std::move(frame));
    }
    cv_.notify_one();
  }

  std::vector<std::uint8_t> recv() {
    std::vector<std::uint8_t> frame(kFrameHeaderBytes);
    read_all(fd_, frame.data(), kFrameHeaderBytes);
    std::uint32_t len = 0;
    for (int i = 0; i < 4; ++i) len |= static_cast<std::uint32_t>(frame[i]) << (8 * i);
    frame.resize(kFrameHeaderBytes + len);
    read_all(fd_, frame.data() + kFrameHeaderBytes, len);
    return frame;
  }

 private:
  void write_loop() {
    for (;;) {
      std::vector<std::uint8_t> frame;
      {
        std::unique_lock lock(mu_);
        cv_.wait(lock, [&] { return !queue_.empty() || closing_; });
        if (queue_.empty()) return;
        frame = std::move(queue_.front());
        queue_.pop_front();
      }
      try {
        write_all(fd_, frame.data(), frame.size());
      } catch (const TransportError&) {
        std::lock_guard lock(mu_);
        failed_ = true;
        return;
      }
    }
  }

  int fd_;
  std::mutex mu_;
  std::condition_variable cv_;
  std::deque<std::vector<std::uint8_t>> queue_;
  bool closing_ = false;
  bool failed_ = false;
  std::thread writer_;
};

class TcpEndpoint final : public Endpoint {
 public:
  TcpEndpoint(Role self, std::array<std::unique_ptr<TcpPeer>, kNumParties> peers,
              std::shared_ptr<TcpNetwork::Shared> shared)
      : self_(self), peers_(std::move(peers)), shared_(std::move(shared)) {}

  Role self() const override { return self_; }

  void send(Role to, std::vector<std::uint8_t> frame) override {
    if (shared_->aborted) throw TransportError("session aborted");
    peer(to).send(std::move(frame));
  }

  std::vector<std::uint8_t> recv(Role from) override {
    if (shared_->aborted) throw TransportError("session aborted");
    return peer(from).recv();
  }

  void abort() override { shared_->abort_all(); }

 private:
  TcpPeer& peer(Role r) {
    auto& p = peers_[index_of(r)];
    if (!p) throw TransportError("no connection to " + std::string(role_name(r)));
    return *p;
  }

  Role self_;
  std::array<std::unique_ptr<TcpPeer>, kNumParties> peers_;
  std::shared_ptr<TcpNetwork::Shared> shared_;
};

void set_nodelay(int fd) {
  int one = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
}

}  // namespace

TcpNetwork::TcpNetwork(std::string host)
    : host_(std::move(host)), shared_(std::make_shared<Shared>()) {
  for (std::size_t i = 0; i < kNumParties; ++i) {
    const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0) throw TransportError("socket() failed");
    int one = 1;
    ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = 0;
    if (::inet_pton(AF_INET, host_.c_str(), &addr.sin_addr) != 1) {
      ::close(fd);
      throw TransportError("invalid host address " + host_);
    }
    if (::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0 ||
        ::listen(fd, 4) != 0) {
      ::close(fd);
      throw TransportError(std::string("bind/listen failed: ") + std::strerror(errno));
    }
    socklen_t alen = sizeof(addr);
    ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &alen);
    listen_fds_[i] = fd;
    ports_[i] = ntohs(addr.sin_port);
  }
}

TcpNetwork::~TcpNetwork() {
  for (int fd : listen_fds_) {
    if (fd >= 0) ::close(fd);
  }
}

void TcpNetwork::abort() {
  shared_->abort_all();
  for (int fd : listen_fds_) {
    if (fd >= 0) ::shutdown(fd, SHUT_RDWR);
  }
}

// Party i accepts connections from every higher-indexed party and connects
// to every lower-indexed one. The connecting side announces its role in a
// single byte.
std::unique_ptr<Endpoint> TcpNetwork::connect(Role self) {
  const std::size_t me = index_of(self);
  std::array<std::unique_ptr<TcpPeer>, kNumParties> peers;

  for (std::size_t j = 0; j < me; ++j) {
    const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0) throw TransportError("socket() failed");
    shared_->track(fd);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(ports_[j]);
    ::inet_pton(AF_INET, host_.c_str(), &addr.sin_addr);
    if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
      throw TransportError(std::string("connect failed: ") + std::strerror(errno));
    }
    set_nodelay(fd);
    const std::uint8_t hello = static_cast<std::uint8_t>(me);
    write_all(fd, &hello, 1);
    peers[j] = std::make_unique<TcpPeer>(fd);
  }

  for (std::size_t accepted = 0; accepted < kNumParties - 1 - me; ++accepted) {
    pollfd pfd{listen_fds_[me], POLLIN, 0};
    for (;;) {
      if (shared_->aborted) throw TransportError("session aborted");
      const int rc = ::poll(&pfd, 1, 100);
      if (rc > 0) break;
      if (rc < 0 && errno != EINTR) throw TransportError("poll failed");
    }
    const int fd = ::accept(listen_fds_[me], nullptr, nullptr);
    if (fd < 0) throw TransportError("accept failed");
    shared_->track(fd);
    set_nodelay(fd);
    std::uint8_t who = 0;
    read_all(fd, &who, 1);
    if (who <= me || who >= kNumParties || peers[who]) {
      ::close(fd);
      throw TransportError("unexpected peer announcement");
    }
    peers[who] = std::make_unique<TcpPeer>(fd);
  }
  return std::make_unique<TcpEndpoint>(self, std::move(peers), shared_);
}

}  // namespace ppimpute::mpc
