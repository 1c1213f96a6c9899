#pragma once

#include <chrono>
#include <cstddef>
#include <memory>
#include <string>

#include <nlohmann/json.hpp>

namespace hpsql {

/// Connection settings shared by the scorer, classifier and generator clients.
struct EndpointConfig {
  std::string address;  // "http://host:port"
  std::chrono::milliseconds timeout{30000};
  int attempts = 3;  // total tries per request
  std::chrono::milliseconds backoff{200};  // doubled after every failed try
  std::size_t max_in_flight = 4;
  std::string auth_token;  // sent as "Authorization: Bearer ..." when non-empty
};

/// Reads HPSQL_ENDPOINT_TOKEN, empty when unset.
std::string endpoint_token_from_env();

/// JSON-over-HTTP POST with retries and a bound on concurrent requests.
/// Safe to share between threads.
class JsonEndpoint {
 public:
  explicit JsonEndpoint(EndpointConfig config);
  ~JsonEndpoint();
  JsonEndpoint(const JsonEndpoint&) = delete;
  JsonEndpoint& operator=(const JsonEndpoint&) = delete;

  /// Throws ServiceUnavailable once every attempt failed (connection error,
  /// timeout, non-200 status) and ProtocolError when a 200 reply is not JSON.
  nlohmann::json post(const std::string& path, const nlohmann::json& body) const;

  const EndpointConfig& config() const noexcept { return config_; }

 private:
  struct State;
  EndpointConfig config_;
  std::unique_ptr<State> state_;
};

}  // namespace hpsql
