#include "hpsql/http_client.h"

#include <condition_variable>
#include <cstdlib>
#include <mutex>
#include <thread>

#include <httplib.h>

#include "hpsql/error.h"

namespace hpsql {

std::string endpoint_token_from_env() {
  const char* token = std::getenv("HPSQL_ENDPOINT_TOKEN");
  return token ? token : "";
}

struct JsonEndpoint::State {
  std::mutex mutex;
  std::condition_variable released;
  std::size_t in_flight = 0;
};

JsonEndpoint::JsonEndpoint(EndpointConfig config)
    : config_(std::move(config)), state_(std::make_unique<State>()) {
  if (config_.address.empty()) throw ValidationError("endpoint address is empty");
  if (config_.attempts < 1) throw ValidationError("endpoint attempts must be >= 1");
  if (config_.max_in_flight < 1) config_.max_in_flight = 1;
}

JsonEndpoint::~JsonEndpoint() = default;

nlohmann::json JsonEndpoint::post(const std::string& path, const nlohmann::json& body) const {
  {
    std::unique_lock lock(state_->mutex);
    state_->released.wait(lock, [&] { return state_->in_flight < config_.max_in_flight; });
    ++state_->in_flight;
  }
  struct Release {
    State* state;
    ~Release() {
      {
        std::lock_guard lock(state->mutex);
        --state->in_flight;
      }
      state->released.notify_one();
    }
  } release{state_.get()};

  const std::string payload = body.dump();
  httplib::Headers headers;
  if (!config_.auth_token.empty()) headers.emplace("Authorization", "Bearer " + config_.auth_token);

  std::string last_failure;
  auto delay = config_.backoff;
  for (int attempt = 1; attempt <= config_.attempts; ++attempt) {
    httplib::Client client(config_.address);
    client.set_connection_timeout(config_.timeout);
    client.set_read_timeout(config_.timeout);
    client.set_write_timeout(config_.timeout);
    auto result = client.Post(path, headers, payload, "application/json");
    if (!result) {
      last_failure = httplib::to_string(result.error());
    } else if (result->status != 200) {
      last_failure = "HTTP " + std::to_string(result->status);
    } else {
      try {
        return nlohmann::json::parse(result->body);
      } catch (const nlohmann::json::exception& e) {
        throw ProtocolError(config_.address + path + ": reply is not JSON: " + e.what());
      }
    }
    if (attempt < config_.attempts) {
      std::this_thread::sleep_for(delay);
      delay *= 2;
    }
  }
  throw ServiceUnavailable(config_.address + path + ": " + last_failure + " after " +
                           std::to_string(config_.attempts) + " attempt(s)");
}

}  // namespace hpsql
