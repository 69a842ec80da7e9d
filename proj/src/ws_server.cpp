#include "pg/server/ws_server.hpp"

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>
#include <deque>
#include <filesystem>
#include <iostream>
#include <map>
#include <set>

namespace pg::server {

namespace beast = boost::beast;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;

bool valid_game_id(const std::string& id) {
  if (id.empty() || id.size() > 64) return false;
  return std::all_of(id.begin(), id.end(), [](unsigned char c) { return std::isalnum(c) || c == '_' || c == '-'; });
}

namespace {

TimestampMs wall_now() {
  using namespace std::chrono;
  return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

}  // namespace

class Session;

struct WsServer::Impl {
  struct Slot {
    std::unique_ptr<GameHost> host;
    std::map<PlayerId, std::weak_ptr<Session>> seats;
  };

  explicit Impl(ServerOptions o);

  void accept();
  void schedule_tick();
  void on_tick();
  void on_message(const std::shared_ptr<Session>& s, const std::string& text);
  void on_closed(const std::shared_ptr<Session>& s);
  Slot& game(const std::string& id, TimestampMs now);
  void deliver(Slot& slot, const std::vector<Outbound>& out);

  ServerOptions opts;
  net::io_context ioc{1};
  tcp::acceptor acceptor{ioc};
  net::steady_timer timer{ioc};
  std::map<std::string, Slot> games;
  std::set<std::shared_ptr<Session>> sessions;
  bot::BotFactory factory;
};

class Session : public std::enable_shared_from_this<Session> {
 public:
  Session(tcp::socket socket, WsServer::Impl& srv) : ws_(std::move(socket)), srv_(srv) {}

  void start() {
    ws_.text(true);
    ws_.read_message_max(1 << 20);
    ws_.async_accept([self = shared_from_this()](beast::error_code ec) {
      if (ec) return self->srv_.on_closed(self);
      self->read();
    });
  }

  void send(const nlohmann::json& frame) {
    if (closed_) return;
    queue_.push_back(frame.dump());
    if (queue_.size() == 1) write();
  }

  void close() {
    if (closed_) return;
    closed_ = true;
    queue_.clear();
    beast::error_code ec;
    beast::get_lowest_layer(ws_).socket().shutdown(tcp::socket::shutdown_both, ec);
    beast::get_lowest_layer(ws_).socket().close(ec);
  }

  std::string game;
  std::optional<PlayerId> player;

 private:
  void read() {
    ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) {
        self->closed_ = true;
        return self->srv_.on_closed(self);
      }
      std::string text = beast::buffers_to_string(self->buffer_.data());
      self->buffer_.consume(self->buffer_.size());
      self->srv_.on_message(self, text);
      if (!self->closed_) self->read();
    });
  }

  void write() {
    ws_.async_write(net::buffer(queue_.front()), [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) return self->close();
      if (!self->queue_.empty()) self->queue_.pop_front();
      if (!self->queue_.empty()) self->write();
    });
  }

  websocket::stream<beast::tcp_stream> ws_;
  beast::flat_buffer buffer_;
  std::deque<std::string> queue_;
  bool closed_ = false;
  WsServer::Impl& srv_;
};

WsServer::Impl::Impl(ServerOptions o) : opts(std::move(o)) {
  opts.config.validate();
  factory.default_lexicon_path = opts.lexicon_path;
  factory.prompts_dir = opts.prompts_dir;
  factory.endpoint = opts.endpoint;

  const tcp::endpoint ep(net::ip::make_address(opts.address), opts.port);
  acceptor.open(ep.protocol());
  acceptor.set_option(net::socket_base::reuse_address(true));
  acceptor.bind(ep);
  acceptor.listen();

  if (!opts.bots.empty()) {
    if (!valid_game_id(opts.bot_game)) fail(ErrorCode::InvalidConfig, "invalid game id '" + opts.bot_game + "'");
    const TimestampMs now = wall_now();
    Slot& slot = game(opts.bot_game, now);
    for (std::size_t i = 0; i < opts.bots.size(); ++i) {
      const std::string name = opts.bots[i].policy + "-" + std::to_string(i + 1);
      slot.host->seat_bot(factory.make(opts.bots[i], name, opts.bot_seed + i), now);
    }
  }
}

WsServer::Impl::Slot& WsServer::Impl::game(const std::string& id, TimestampMs now) {
  auto it = games.find(id);
  if (it != games.end()) return it->second;
  TranscriptLog log;
  if (!opts.log_dir.empty()) {
    const auto dir = std::filesystem::path(opts.log_dir) / "games";
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    log = TranscriptLog::open_file((dir / (id + ".jsonl")).string(), opts.sync_writes);
  }
  Slot slot;
  slot.host = std::make_unique<GameHost>(id, opts.config, std::move(log), now, opts.host);
  return games.emplace(id, std::move(slot)).first->second;
}

void WsServer::Impl::accept() {
  acceptor.async_accept([this](beast::error_code ec, tcp::socket socket) {
    if (ec) {
      if (ec != net::error::operation_aborted) accept();
      return;
    }
    auto s = std::make_shared<Session>(std::move(socket), *this);
    sessions.insert(s);
    s->start();
    accept();
  });
}

void WsServer::Impl::schedule_tick() {
  timer.expires_after(opts.tick_interval);
  timer.async_wait([this](beast::error_code ec) {
    if (ec) return;
    on_tick();
    schedule_tick();
  });
}

void WsServer::Impl::on_tick() {
  const TimestampMs now = wall_now();
  for (auto& [id, slot] : games) {
    const auto due = slot.host->next_deadline();
    if (due && now >= *due) deliver(slot, slot.host->tick(now));
  }
}

void WsServer::Impl::deliver(Slot& slot, const std::vector<Outbound>& out) {
  for (const auto& o : out) {
    if (o.to) {
      auto it = slot.seats.find(*o.to);
      if (it == slot.seats.end()) continue;
      if (auto s = it->second.lock()) s->send(o.frame);
      continue;
    }
    for (auto& [pid, weak] : slot.seats)
      if (auto s = weak.lock()) s->send(o.frame);
  }
}

void WsServer::Impl::on_message(const std::shared_ptr<Session>& s, const std::string& text) {
  const TimestampMs now = wall_now();
  nlohmann::json frame;
  try {
    frame = nlohmann::json::parse(text);
    if (!frame.is_object()) fail(ErrorCode::BadFrame, "frame must be a JSON object");
  } catch (const std::exception& e) {
    s->send(make_frame("ERROR", s->game, 0, error_payload(ErrorCode::BadFrame, e.what(), nullptr)));
    return;
  }
  const nlohmann::json ref_seq = frame.contains("seq") ? frame["seq"] : nlohmann::json(nullptr);
  auto reject = [&](ErrorCode code, const std::string& msg) {
    s->send(make_frame("ERROR", s->game, 0, error_payload(code, msg, ref_seq)));
  };

  if (!s->player) {
    if (!frame.contains("type") || frame["type"] != "JOIN") return reject(ErrorCode::NotJoined, "first frame must be JOIN");
    const std::string id = frame.contains("game") && frame["game"].is_string() ? frame["game"].get<std::string>() : "";
    if (!valid_game_id(id)) return reject(ErrorCode::BadFrame, "missing or invalid game id");
    Slot* slot = nullptr;
    try {
      slot = &game(id, now);
    } catch (const Error& e) {
      return reject(e.code(), e.detail());
    }
    auto res = slot->host->handle_join(frame.contains("payload") ? frame["payload"] : nlohmann::json::object(), now, ref_seq);
    if (res.player) {
      // One live session per participant: a token reconnect displaces the old one.
      auto it = slot->seats.find(*res.player);
      if (it != slot->seats.end())
        if (auto old = it->second.lock(); old && old != s) {
          old->player.reset();
          old->close();
        }
      s->game = id;
      s->player = res.player;
      slot->seats[*res.player] = s;
    }
    s->send(res.reply);
    deliver(*slot, res.out);
    return;
  }

  if (frame.contains("game") && frame["game"] != s->game) return reject(ErrorCode::BadFrame, "frame addressed to another game");
  Slot& slot = games.at(s->game);
  const PlayerId pid = *s->player;
  auto out = slot.host->dispatch(pid, frame, now);
  const bool rejected = std::any_of(out.begin(), out.end(), [&](const Outbound& o) {
    return o.to == pid && o.frame.at("type") == "ERROR";
  });
  deliver(slot, out);
  if (!rejected && frame.value("type", "") == "LEAVE") {
    slot.seats.erase(pid);
    s->player.reset();
  }
}

void WsServer::Impl::on_closed(const std::shared_ptr<Session>& s) {
  sessions.erase(s);
  if (!s->player) return;
  auto git = games.find(s->game);
  if (git == games.end()) return;
  auto& slot = git->second;
  auto it = slot.seats.find(*s->player);
  if (it != slot.seats.end() && it->second.lock() == s) {
    slot.seats.erase(it);
    deliver(slot, slot.host->disconnect(*s->player, wall_now()));
  }
  s->player.reset();
}

WsServer::WsServer(ServerOptions opts) : impl_(std::make_unique<Impl>(std::move(opts))) {}
WsServer::~WsServer() = default;

unsigned short WsServer::port() const { return impl_->acceptor.local_endpoint().port(); }

void WsServer::run() {
  impl_->accept();
  impl_->schedule_tick();
  impl_->ioc.run();
}

void WsServer::stop() {
  net::post(impl_->ioc, [impl = impl_.get()] {
    beast::error_code ec;
    impl->acceptor.close(ec);
    impl->timer.cancel();
    for (const auto& s : std::vector<std::shared_ptr<Session>>(impl->sessions.begin(), impl->sessions.end())) s->close();
    impl->ioc.stop();
  });
}

}  // namespace pg::server
