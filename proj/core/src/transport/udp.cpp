#include "lakee/transport/udp.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <string>

namespace lakee::transport {

namespace {

constexpr std::size_t kMaxDatagram = 2048;

sockaddr_in to_sockaddr(const Address& a) {
  sockaddr_in sa{};
  sa.sin_family = AF_INET;
  sa.sin_addr.s_addr = htonl(a.ipv4);
  sa.sin_port = htons(a.port);
  return sa;
}

Address from_sockaddr(const sockaddr_in& sa) { return Address{ntohl(sa.sin_addr.s_addr), ntohs(sa.sin_port)}; }

[[noreturn]] void fail(const std::string& what) { throw SocketError(what + ": " + std::strerror(errno)); }

int open_socket() {
  int fd = ::socket(AF_INET, SOCK_DGRAM, 0);
  if (fd < 0) fail("socket");
  return fd;
}

Address bound_address(int fd) {
  sockaddr_in sa{};
  socklen_t len = sizeof(sa);
  if (::getsockname(fd, reinterpret_cast<sockaddr*>(&sa), &len) != 0) fail("getsockname");
  return from_sockaddr(sa);
}

}  // namespace

UdpClientChannel::UdpClientChannel(const Address& server) : fd_(open_socket()) {
  sockaddr_in sa = to_sockaddr(server);
  if (::connect(fd_, reinterpret_cast<sockaddr*>(&sa), sizeof(sa)) != 0) {
    ::close(fd_);
    fail("connect " + server.to_string());
  }
}

UdpClientChannel::~UdpClientChannel() {
  if (fd_ >= 0) ::close(fd_);
}

Address UdpClientChannel::local_address() const { return bound_address(fd_); }

void UdpClientChannel::send(ByteView payload) {
  if (::send(fd_, payload.data(), payload.size(), 0) < 0) fail("send");
}

std::optional<Bytes> UdpClientChannel::receive(Millis timeout) {
  const Millis deadline = clock_.now() + timeout;
  while (true) {
    Millis left = deadline - clock_.now();
    if (left.count() < 0) return std::nullopt;
    pollfd pfd{fd_, POLLIN, 0};
    int rc = ::poll(&pfd, 1, static_cast<int>(left.count()));
    if (rc < 0) {
      if (errno == EINTR) continue;
      fail("poll");
    }
    if (rc == 0) return std::nullopt;
    Bytes buf(kMaxDatagram);
    ssize_t n = ::recv(fd_, buf.data(), buf.size(), 0);
    if (n < 0) {
      // ICMP port unreachable surfaces here on a connected socket.
      if (errno == ECONNREFUSED || errno == EINTR) continue;
      fail("recv");
    }
    buf.resize(static_cast<std::size_t>(n));
    return buf;
  }
}

UdpServer::UdpServer(protocol::ServerSessionTable& table, const Address& listen, unsigned workers)
    : fd_(open_socket()), responder_(table, clock_), worker_count_(workers == 0 ? 1 : workers) {
  int one = 1;
  ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  sockaddr_in sa = to_sockaddr(listen);
  if (::bind(fd_, reinterpret_cast<sockaddr*>(&sa), sizeof(sa)) != 0) {
    ::close(fd_);
    fail("bind " + listen.to_string());
  }
}

UdpServer::~UdpServer() {
  stop();
  if (fd_ >= 0) ::close(fd_);
}

Address UdpServer::local_address() const { return bound_address(fd_); }

void UdpServer::start() {
  if (running_.exchange(true)) return;
  for (unsigned i = 0; i < worker_count_; ++i) workers_.emplace_back([this] { worker(); });
}

void UdpServer::stop() {
  running_ = false;
  for (auto& t : workers_) {
    if (t.joinable()) t.join();
  }
  workers_.clear();
}

void UdpServer::worker() {
  Bytes buf(kMaxDatagram);
  while (running_) {
    pollfd pfd{fd_, POLLIN, 0};
    int rc = ::poll(&pfd, 1, 50);
    if (rc <= 0) continue;
    sockaddr_in from{};
    socklen_t len = sizeof(from);
    ssize_t n = ::recvfrom(fd_, buf.data(), buf.size(), MSG_DONTWAIT, reinterpret_cast<sockaddr*>(&from), &len);
    if (n < 0) continue;  // another worker took it
    ++received_;
    auto reply = responder_.handle(ByteView(buf.data(), static_cast<std::size_t>(n)), from_sockaddr(from));
    if (reply) {
      ::sendto(fd_, reply->data(), reply->size(), 0, reinterpret_cast<sockaddr*>(&from), len);
    }
  }
}

}  // namespace lakee::transport
