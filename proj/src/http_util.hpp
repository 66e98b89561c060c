#pragma once

#include <initializer_list>
#include <string>
#include <thread>

#include <httplib.h>

#include "ontomatch/net_errors.hpp"
#include "ontomatch/value.hpp"

namespace ontomatch::detail {

/// httplib::Server bound up front and served from a background thread.
class BackgroundServer {
 public:
  BackgroundServer() = default;
  BackgroundServer(BackgroundServer&&) = delete;
  ~BackgroundServer() { stop(); }

  httplib::Server& http() { return server_; }

  int start(const std::string& host, int port) {
    const int bound = port == 0 ? server_.bind_to_any_port(host) : (server_.bind_to_port(host, port) ? port : -1);
    if (bound <= 0) throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
    return bound;
  }

  void listen_blocking(const std::string& host, int port) {
    if (!server_.listen(host, port)) throw std::runtime_error("cannot listen on " + host + ":" + std::to_string(port));
  }

  void stop() {
    server_.stop();
    if (thread_.joinable()) thread_.join();
  }

 private:
  httplib::Server server_;
  std::thread thread_;
};

inline void reply(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

inline httplib::Client make_client(const std::string& base_url, int timeout_ms) {
  httplib::Client cli(base_url);
  const time_t sec = timeout_ms / 1000;
  const time_t usec = (timeout_ms % 1000) * 1000;
  cli.set_connection_timeout(sec, usec);
  cli.set_read_timeout(sec, usec);
  cli.set_write_timeout(sec, usec);
  return cli;
}

inline json parse_body(const httplib::Response& res) {
  try {
    return json::parse(res.body);
  } catch (const json::parse_error& e) {
    throw ProtocolError(res.status, std::string("malformed reply: ") + e.what());
  }
}

// Returns the status when it is one of `allowed`; otherwise throws.
inline int expect_status(const httplib::Result& res, const std::string& address, std::initializer_list<int> allowed) {
  if (!res) throw TransportError(address, httplib::to_string(res.error()));
  for (int s : allowed)
    if (res->status == s) return s;
  std::string detail = res->body;
  try {
    const json body = json::parse(res->body);
    if (body.contains("error")) detail = body["error"].dump();
  } catch (...) {
  }
  throw ProtocolError(res->status, address + ": " + detail);
}

inline std::string url_encode(std::string_view s) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : s) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += kHex[c >> 4];
      out += kHex[c & 0xF];
    }
  }
  return out;
}

}  // namespace ontomatch::detail
