#pragma once

#include <atomic>
#include <stdexcept>
#include <thread>
#include <vector>

#include "lakee/transport/channel.hpp"
#include "lakee/transport/handshake.hpp"

namespace lakee::transport {

class SocketError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Connected UDP socket: only datagrams from the server are received.
class UdpClientChannel final : public DatagramChannel {
 public:
  explicit UdpClientChannel(const Address& server);
  ~UdpClientChannel() override;
  UdpClientChannel(const UdpClientChannel&) = delete;
  UdpClientChannel& operator=(const UdpClientChannel&) = delete;

  void send(ByteView payload) override;
  std::optional<Bytes> receive(Millis timeout) override;
  const Clock& clock() const override { return clock_; }
  Address local_address() const;

 private:
  int fd_ = -1;
  SystemClock clock_;
};

/// Handshake server on one UDP socket, with `workers` threads reading it.
class UdpServer {
 public:
  UdpServer(protocol::ServerSessionTable& table, const Address& listen, unsigned workers = 2);
  ~UdpServer();
  UdpServer(const UdpServer&) = delete;
  UdpServer& operator=(const UdpServer&) = delete;

  void start();
  /// Joins the workers; safe to call twice.
  void stop();
  bool running() const { return running_; }

  Address local_address() const;
  HandshakeResponder& responder() { return responder_; }
  std::uint64_t datagrams_received() const { return received_; }

 private:
  void worker();

  int fd_ = -1;
  SystemClock clock_;
  HandshakeResponder responder_;
  unsigned worker_count_;
  std::vector<std::thread> workers_;
  std::atomic<bool> running_{false};
  std::atomic<std::uint64_t> received_{0};
};

}  // namespace lakee::transport
