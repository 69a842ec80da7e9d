#pragma once

// Text-completion endpoint client.
//
// Contract: HTTP POST with JSON body {prompt, max_tokens, temperature}; a 2xx
// reply carries JSON {text}. Transport failures and non-2xx statuses are
// retried with exponential backoff inside a fixed wall-clock budget.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <string>
#include <thread>

#include "httplib.h"
#include "json.hpp"

namespace pg::bot {

struct EndpointConfig {
  std::string url;
  std::string api_key;
  int max_tokens = 128;
  double temperature = 0.7;
  int max_attempts = 3;
  std::chrono::milliseconds initial_backoff{50};
  std::chrono::milliseconds budget{10000};
  std::size_t max_response_bytes = 64 * 1024;

  /// URL from PG_LLM_URL, credential from PG_LLM_KEY.
  static EndpointConfig from_env() {
    EndpointConfig c;
    if (const char* url = std::getenv("PG_LLM_URL")) c.url = url;
    if (const char* key = std::getenv("PG_LLM_KEY")) c.api_key = key;
    return c;
  }
};

enum class CompletionStatus { Ok, Unavailable, MalformedResponse };

struct Completion {
  CompletionStatus status = CompletionStatus::Unavailable;
  std::string text;
  std::string detail;
  int attempts = 0;

  bool ok() const { return status == CompletionStatus::Ok; }
};

struct ParsedUrl {
  std::string origin;  // scheme://host:port
  std::string path;
};

inline std::optional<ParsedUrl> parse_http_url(const std::string& url) {
  const std::string scheme = "http://";
  if (url.rfind(scheme, 0) != 0) return std::nullopt;
  const auto slash = url.find('/', scheme.size());
  ParsedUrl p;
  p.origin = url.substr(0, slash);
  p.path = slash == std::string::npos ? "/" : url.substr(slash);
  if (p.origin.size() == scheme.size()) return std::nullopt;
  return p;
}

inline Completion llm_complete(const std::string& prompt, const EndpointConfig& cfg) {
  using clock = std::chrono::steady_clock;
  const auto give_up_at = clock::now() + cfg.budget;
  Completion result;
  const auto url = parse_http_url(cfg.url);
  if (!url) {
    result.detail = cfg.url.empty() ? "no endpoint configured" : "unsupported endpoint url " + cfg.url;
    return result;
  }
  const std::string body =
      nlohmann::json{{"prompt", prompt}, {"max_tokens", cfg.max_tokens}, {"temperature", cfg.temperature}}.dump();
  httplib::Headers headers;
  if (!cfg.api_key.empty()) headers.emplace("Authorization", "Bearer " + cfg.api_key);

  auto backoff = cfg.initial_backoff;
  for (int attempt = 1; attempt <= cfg.max_attempts; ++attempt) {
    const auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(give_up_at - clock::now());
    if (remaining.count() <= 0) {
      result.detail += " (budget exhausted)";
      break;
    }
    result.attempts = attempt;
    httplib::Client client(url->origin);
    const auto secs = remaining.count() / 1000;
    const auto usecs = (remaining.count() % 1000) * 1000;
    client.set_connection_timeout(secs, usecs);
    client.set_read_timeout(secs, usecs);
    client.set_write_timeout(secs, usecs);
    auto res = client.Post(url->path, headers, body, "application/json");
    if (res && res->status >= 200 && res->status < 300) {
      if (res->body.size() > cfg.max_response_bytes) {
        result.status = CompletionStatus::MalformedResponse;
        result.detail = "response of " + std::to_string(res->body.size()) + " bytes exceeds cap";
        return result;
      }
      try {
        const auto j = nlohmann::json::parse(res->body);
        result.text = j.at("text").get<std::string>();
        result.status = CompletionStatus::Ok;
        result.detail.clear();
        return result;
      } catch (const nlohmann::json::exception& e) {
        result.status = CompletionStatus::MalformedResponse;
        result.detail = e.what();
        return result;
      }
    }
    result.detail = res ? "status " + std::to_string(res->status) : "transport error: " + httplib::to_string(res.error());
    if (attempt == cfg.max_attempts) break;
    if (clock::now() + backoff >= give_up_at) {
      result.detail += " (budget exhausted)";
      break;
    }
    std::this_thread::sleep_for(backoff);
    backoff *= 2;
  }
  result.status = CompletionStatus::Unavailable;
  return result;
}

}  // namespace pg::bot
