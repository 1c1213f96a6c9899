#include "fake_server.h"

#include <httplib.h>

namespace hpsql::testing {

FakeServer::FakeServer(Handler handler) : handler_(std::move(handler)), server_(std::make_unique<httplib::Server>()) {
  server_->new_task_queue = [] { return new httplib::ThreadPool(16); };
  server_->Post(R"(/.*)", [this](const httplib::Request& req, httplib::Response& res) {
    ++requests_;
    const int now = ++active_;
    int seen = max_concurrent_.load();
    while (now > seen && !max_concurrent_.compare_exchange_weak(seen, now)) {
    }
    {
      std::lock_guard lock(mutex_);
      authorization_ = req.get_header_value("Authorization");
    }
    auto reply = handler_(req.path, req.body);
    res.status = reply.status;
    res.set_content(reply.body, "application/json");
    --active_;
  });
  port_ = server_->bind_to_any_port("127.0.0.1");
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
}

FakeServer::~FakeServer() {
  server_->stop();
  if (thread_.joinable()) thread_.join();
}

std::string FakeServer::address() const { return "http://127.0.0.1:" + std::to_string(port_); }

std::string FakeServer::last_authorization() const {
  std::lock_guard lock(mutex_);
  return authorization_;
}

std::string unreachable_address() {
  httplib::Server probe;
  const int port = probe.bind_to_any_port("127.0.0.1");
  return "http://127.0.0.1:" + std::to_string(port);
}

}  // namespace hpsql::testing
