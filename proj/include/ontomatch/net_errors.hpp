#pragma once

#include <stdexcept>
#include <string>

namespace ontomatch {

/// Peer unreachable, connection refused, or timed out.
class TransportError : public std::runtime_error {
 public:
  TransportError(std::string address, const std::string& what)
      : std::runtime_error(address + ": " + what), address_(std::move(address)) {}
  const std::string& address() const { return address_; }

 private:
  std::string address_;
};

/// Peer answered with an unexpected status or an unparseable body.
class ProtocolError : public std::runtime_error {
 public:
  ProtocolError(int status, const std::string& what)
      : std::runtime_error("HTTP " + std::to_string(status) + ": " + what), status_(status) {}
  int status() const { return status_; }

 private:
  int status_;
};

}  // namespace ontomatch
