// Copyright 2026 The safestop Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "service/teleop_server.hpp"

#include "geometry/errors.hpp"
#include "service/logging.hpp"
#include "service/protocol.hpp"

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <deque>
#include <mutex>
#include <optional>
#include <set>
#include <thread>
#include <vector>

namespace safestop
{
namespace
{
namespace net = boost::asio;
namespace beast = boost::beast;
namespace websocket = beast::websocket;
using tcp = net::ip::tcp;
using nlohmann::json;

class Session;

/// Server side of a session: owns the session set (I/O thread only) and the inbox.
class Hub
{
public:
  virtual ~Hub() = default;
  virtual void join(const std::shared_ptr<Session> & session) = 0;
  virtual void leave(const Session * session) = 0;
  virtual json hello() const = 0;
  virtual void deliver(ClientMessage message) = 0;
};

class Session : public std::enable_shared_from_this<Session>
{
public:
  Session(tcp::socket socket, Hub & hub) : ws_(std::move(socket)), hub_(hub) {}

  void start()
  {
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.async_accept(beast::bind_front_handler(&Session::on_accept, shared_from_this()));
  }

  void send(const json & message)
  {
    if (closing_) {
      return;
    }
    json stamped = message;
    stamped["seq"] = ++seq_;
    queue_.push_back(std::make_shared<std::string>(stamped.dump()));
    if (queue_.size() == 1) {
      write_next();
    }
  }

  /// Sends an error notice, then closes once it is flushed.
  void fail(const std::string & why)
  {
    log()->warn("closing client: {}", why);
    send(error_message(why));
    closing_ = true;
    hub_.leave(this);
    if (queue_.empty()) {
      close(websocket::close_code::policy_error);
    }
  }

  void shutdown()
  {
    closing_ = true;
    beast::error_code ec;
    beast::get_lowest_layer(ws_).socket().close(ec);
  }

private:
  void on_accept(beast::error_code ec)
  {
    if (ec) {
      log()->debug("websocket handshake failed: {}", ec.message());
      return;
    }
    hub_.join(shared_from_this());
    send(hub_.hello());
    read_next();
  }

  void read_next()
  {
    ws_.async_read(buffer_, beast::bind_front_handler(&Session::on_read, shared_from_this()));
  }

  void on_read(beast::error_code ec, std::size_t)
  {
    if (ec) {
      hub_.leave(this);
      return;
    }
    if (closing_) {
      return;
    }
    const std::string text = beast::buffers_to_string(buffer_.data());
    buffer_.consume(buffer_.size());
    try {
      ClientMessage message = parse_client_message(text);
      if (last_client_seq_ && message.seq <= *last_client_seq_) {
        throw ProtocolError(
          "seq: " + std::to_string(message.seq) + " does not increase past " +
          std::to_string(*last_client_seq_));
      }
      last_client_seq_ = message.seq;
      hub_.deliver(message);
    } catch (const ProtocolError & e) {
      fail(e.what());
      return;
    }
    read_next();
  }

  void write_next()
  {
    ws_.text(true);
    ws_.async_write(
      net::buffer(*queue_.front()),
      beast::bind_front_handler(&Session::on_write, shared_from_this()));
  }

  void on_write(beast::error_code ec, std::size_t)
  {
    if (ec) {
      hub_.leave(this);
      return;
    }
    queue_.pop_front();
    if (!queue_.empty()) {
      write_next();
    } else if (closing_) {
      close(websocket::close_code::policy_error);
    }
  }

  void close(websocket::close_code code)
  {
    ws_.async_close(code, [self = shared_from_this()](beast::error_code) {});
  }

  websocket::stream<beast::tcp_stream> ws_;
  Hub & hub_;
  beast::flat_buffer buffer_;
  std::deque<std::shared_ptr<const std::string>> queue_;
  std::uint64_t seq_{0};
  std::optional<std::uint64_t> last_client_seq_;
  bool closing_{false};
};

}  // namespace

struct TeleopServer::Impl : Hub
{
  Impl(Scenario scenario, WorldConfig config, ServeOptions opts)
  : options(std::move(opts)),
    world(scenario, std::make_shared<ObstacleMap>(build_scenario_map(scenario)), config)
  {
    if (!(options.snapshot_rate > 0.0) || !(options.time_scale > 0.0) ||
        !(options.command_hold >= 0.0) || !(options.trajectory_sample_dt > 0.0))
    {
      throw ConfigError("serve options: rates, time scale and sample dt must be positive");
    }
    hello_cache = hello_message(world, options.snapshot_rate);
  }

  // Hub, called on the I/O thread.
  void join(const std::shared_ptr<Session> & session) override
  {
    sessions.insert(session);
    log()->info("client connected ({} total)", sessions.size());
  }

  void leave(const Session * session) override
  {
    for (auto it = sessions.begin(); it != sessions.end(); ++it) {
      if (it->get() == session) {
        sessions.erase(it);
        log()->info("client left ({} remaining)", sessions.size());
        return;
      }
    }
  }

  json hello() const override
  {
    json h = hello_cache;
    h["monitoring"] = monitoring.load();
    return h;
  }

  void deliver(ClientMessage message) override
  {
    std::lock_guard<std::mutex> lock(inbox_mutex);
    inbox.push_back(std::move(message));
  }

  /// Called from the simulation thread.
  void broadcast(json message)
  {
    auto shared = std::make_shared<const json>(std::move(message));
    net::post(ioc, [this, shared] {
      // Copy: send() may drop a session from the set.
      const auto targets = sessions;
      for (const auto & s : targets) {
        s->send(*shared);
      }
    });
  }

  void accept_next()
  {
    acceptor.async_accept([this](beast::error_code ec, tcp::socket socket) {
      if (ec) {
        if (ec != net::error::operation_aborted) {
          log()->warn("accept failed: {}", ec.message());
        }
        if (!acceptor.is_open()) {
          return;
        }
      } else {
        std::make_shared<Session>(std::move(socket), *this)->start();
      }
      accept_next();
    });
  }

  void simulate()
  {
    using clock = std::chrono::steady_clock;
    const double dt = world.config().dt;
    const auto tick = std::chrono::duration_cast<clock::duration>(
      std::chrono::duration<double>(dt / options.time_scale));
    const auto snapshot_every = std::max<std::uint64_t>(
      1, static_cast<std::uint64_t>(std::llround(1.0 / (options.snapshot_rate * dt))));

    OperatorCommand held;
    std::optional<double> held_since;  // world time the held command arrived
    std::uint64_t ticks = 0;
    auto next = clock::now();
    std::vector<ClientMessage> pending;
    while (!stopping.load()) {
      {
        std::lock_guard<std::mutex> lock(inbox_mutex);
        pending.swap(inbox);
      }
      for (const auto & m : pending) {
        switch (m.type) {
          case ClientMessageType::command: {
            held = m.command;
            const double speed = held.commanded_velocity.norm();
            if (speed > options.max_command_speed) {
              held.commanded_velocity *= options.max_command_speed / speed;
            }
            held_since = world.time();
            break;
          }
          case ClientMessageType::reset:
            world.reset();
            held = OperatorCommand{};
            held_since.reset();
            broadcast(event_message("reset", world.time()));
            break;
          case ClientMessageType::toggle_monitoring:
            world.set_monitoring(!world.monitoring_enabled());
            monitoring.store(world.monitoring_enabled());
            {
              json e = event_message("monitoring_toggled", world.time());
              e["monitoring"] = world.monitoring_enabled();
              broadcast(std::move(e));
            }
            break;
        }
      }
      pending.clear();

      // Zero-order hold, then zero once the command goes stale.
      OperatorCommand command;
      if (held_since && world.time() - *held_since <= options.command_hold + 1e-9) {
        command = held;
      }
      command.timestamp = world.time();

      if (!world.terminal()) {
        try {
          const StepResult result = world.step(command);
          for (const auto & e : result.events) {
            switch (e.type) {
              case WorldEventType::stop_issued:
                if (e.stop) {
                  broadcast(stop_event_message(world, *e.stop, options.trajectory_sample_dt));
                }
                break;
              case WorldEventType::collision:
                broadcast(event_message("collision", e.time));
                break;
              case WorldEventType::goal_reached:
                broadcast(event_message("goal", e.time));
                break;
              default:
                break;
            }
          }
        } catch (const Error & e) {
          log()->error("simulation step failed: {}", e.what());
          broadcast(error_message(std::string("simulation: ") + e.what()));
          world.reset();
        }
      }
      if (ticks % snapshot_every == 0) {
        broadcast(snapshot_message(world, options.max_obstacles, options.trajectory_sample_dt));
      }
      ++ticks;

      next += tick;
      const auto now = clock::now();
      if (now - next > std::chrono::milliseconds(250)) {
        next = now;  // fell far behind; do not try to catch up in a burst
      }
      std::this_thread::sleep_until(next);
    }
  }

  void shutdown()
  {
    std::lock_guard<std::mutex> lock(lifecycle_mutex);
    if (!started || joined) {
      return;
    }
    stopping.store(true);
    if (sim_thread.joinable()) {
      sim_thread.join();
    }
    net::post(ioc, [this] {
      beast::error_code ec;
      acceptor.close(ec);
      for (const auto & s : sessions) {
        s->shutdown();
      }
      sessions.clear();
      work.reset();
    });
    if (io_thread.joinable()) {
      io_thread.join();
    }
    joined = true;
  }

  ServeOptions options;
  World world;
  json hello_cache;
  std::atomic<bool> monitoring{true};

  net::io_context ioc{1};
  std::optional<net::executor_work_guard<net::io_context::executor_type>> work;
  tcp::acceptor acceptor{ioc};
  std::set<std::shared_ptr<Session>> sessions;

  std::mutex inbox_mutex;
  std::vector<ClientMessage> inbox;

  std::mutex lifecycle_mutex;
  std::atomic<bool> stopping{false};
  bool started{false};
  bool joined{false};
  std::uint16_t bound_port{0};
  std::thread io_thread;
  std::thread sim_thread;

  std::mutex wait_mutex;
  std::condition_variable wait_cv;
  bool stop_requested{false};
};

TeleopServer::TeleopServer(Scenario scenario, WorldConfig config, ServeOptions options)
: impl_(std::make_unique<Impl>(std::move(scenario), std::move(config), std::move(options)))
{
  impl_->monitoring.store(impl_->world.monitoring_enabled());
}

TeleopServer::~TeleopServer()
{
  stop();
  impl_->shutdown();
}

void TeleopServer::start()
{
  std::lock_guard<std::mutex> lock(impl_->lifecycle_mutex);
  if (impl_->started) {
    return;
  }
  auto & im = *impl_;
  beast::error_code ec;
  const auto address = net::ip::make_address(im.options.address, ec);
  if (ec) {
    throw IoError("invalid bind address " + im.options.address + ": " + ec.message());
  }
  const tcp::endpoint endpoint(address, im.options.port);
  im.acceptor.open(endpoint.protocol(), ec);
  if (!ec) im.acceptor.set_option(net::socket_base::reuse_address(true), ec);
  if (!ec) im.acceptor.bind(endpoint, ec);
  if (!ec) im.acceptor.listen(net::socket_base::max_listen_connections, ec);
  if (ec) {
    throw IoError("cannot listen on " + im.options.address + ":" +
                  std::to_string(im.options.port) + ": " + ec.message());
  }
  im.bound_port = im.acceptor.local_endpoint().port();
  im.work.emplace(net::make_work_guard(im.ioc));
  im.accept_next();
  im.io_thread = std::thread([&im] { im.ioc.run(); });
  im.sim_thread = std::thread([&im] { im.simulate(); });
  im.started = true;
  log()->info("teleop service listening on {}:{}", im.options.address, im.bound_port);
}

std::uint16_t TeleopServer::port() const { return impl_->bound_port; }

void TeleopServer::run()
{
  start();
  {
    std::unique_lock<std::mutex> lock(impl_->wait_mutex);
    impl_->wait_cv.wait(lock, [this] { return impl_->stop_requested; });
  }
  impl_->shutdown();
}

void TeleopServer::stop()
{
  {
    std::lock_guard<std::mutex> lock(impl_->wait_mutex);
    impl_->stop_requested = true;
  }
  impl_->wait_cv.notify_all();
}

}  // namespace safestop
