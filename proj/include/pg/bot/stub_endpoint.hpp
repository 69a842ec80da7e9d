#pragma once

// In-process completion endpoint for tests and offline runs. Speaks the same
// contract as a real endpoint; behaviour is switchable at runtime.

#include <atomic>
#include <chrono>
#include <functional>
#include <mutex>
#include <string>
#include <thread>

#include "httplib.h"
#include "json.hpp"

namespace pg::bot {

class StubCompletionServer {
 public:
  enum class Mode {
    Echo,      // text = prompt
    Fixed,     // text = fixed_text
    Fail,      // HTTP status fail_status
    Slow,      // sleep delay, then behave as Fixed
    Oversize,  // 2xx with a body larger than any sane cap
    Garbage,   // 2xx with a non-JSON body
    Scripted,  // text = responder(prompt)
  };

  StubCompletionServer() {
    server_.Post("/.*", [this](const httplib::Request& req, httplib::Response& res) { handle(req, res); });
  }

  ~StubCompletionServer() { stop(); }

  StubCompletionServer(const StubCompletionServer&) = delete;
  StubCompletionServer& operator=(const StubCompletionServer&) = delete;

  /// Binds an ephemeral port on 127.0.0.1 (or `port` when nonzero) and serves
  /// on a background thread.
  int start(const std::string& host = "127.0.0.1", int port = 0) {
    port_ = port == 0 ? server_.bind_to_any_port(host) : (server_.bind_to_port(host, port) ? port : -1);
    if (port_ < 0) throw std::runtime_error("stub endpoint could not bind");
    host_ = host;
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
    return port_;
  }

  /// Blocks serving on the calling thread.
  void serve_forever(const std::string& host, int port) {
    host_ = host;
    port_ = port;
    server_.listen(host, port);
  }

  void stop() {
    server_.stop();
    if (thread_.joinable()) thread_.join();
  }

  std::string url() const { return "http://" + host_ + ":" + std::to_string(port_) + "/v1/complete"; }
  int port() const { return port_; }
  int hits() const { return hits_.load(); }
  void reset_hits() { hits_ = 0; }
  std::string last_prompt() const {
    std::lock_guard lock(mu_);
    return last_prompt_;
  }
  std::string last_authorization() const {
    std::lock_guard lock(mu_);
    return last_auth_;
  }

  void set_mode(Mode m) {
    std::lock_guard lock(mu_);
    mode_ = m;
  }
  void set_fixed_text(std::string t) {
    std::lock_guard lock(mu_);
    fixed_text_ = std::move(t);
  }
  void set_fail_status(int s) {
    std::lock_guard lock(mu_);
    fail_status_ = s;
  }
  void set_delay(std::chrono::milliseconds d) {
    std::lock_guard lock(mu_);
    delay_ = d;
  }
  void set_responder(std::function<std::string(const std::string&)> f) {
    std::lock_guard lock(mu_);
    responder_ = std::move(f);
  }

 private:
  void handle(const httplib::Request& req, httplib::Response& res) {
    ++hits_;
    Mode mode;
    std::string fixed;
    int fail_status;
    std::chrono::milliseconds delay;
    std::function<std::string(const std::string&)> responder;
    std::string prompt;
    try {
      prompt = nlohmann::json::parse(req.body).at("prompt").get<std::string>();
    } catch (const nlohmann::json::exception&) {
      res.status = 400;
      return;
    }
    {
      std::lock_guard lock(mu_);
      mode = mode_;
      fixed = fixed_text_;
      fail_status = fail_status_;
      delay = delay_;
      responder = responder_;
      last_prompt_ = prompt;
      last_auth_ = req.get_header_value("Authorization");
    }
    auto reply = [&](const std::string& text) { res.set_content(nlohmann::json{{"text", text}}.dump(), "application/json"); };
    switch (mode) {
      case Mode::Echo: reply(prompt); break;
      case Mode::Fixed: reply(fixed); break;
      case Mode::Fail: res.status = fail_status; break;
      case Mode::Slow:
        std::this_thread::sleep_for(delay);
        reply(fixed);
        break;
      case Mode::Oversize: reply(std::string(1 << 20, 'x')); break;
      case Mode::Garbage: res.set_content("this is not json", "text/plain"); break;
      case Mode::Scripted: reply(responder ? responder(prompt) : std::string{}); break;
    }
  }

  httplib::Server server_;
  std::thread thread_;
  std::string host_ = "127.0.0.1";
  int port_ = 0;
  std::atomic<int> hits_{0};
  mutable std::mutex mu_;
  Mode mode_ = Mode::Echo;
  std::string fixed_text_;
  int fail_status_ = 500;
  std::chrono::milliseconds delay_{0};
  std::function<std::string(const std::string&)> responder_;
  std::string last_prompt_;
  std::string last_auth_;
};

}  // namespace pg::bot
