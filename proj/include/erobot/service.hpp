#pragma once

// Session server for interactive front ends. Each request is one JSON object
// `{session, verb, args}`; each response is `{ok, version, payload | error}`.
// The verbs mirror the workbench controls one to one (see docs/protocol.md).

#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace erobot::service {

class Service {
public:
    Service();
    ~Service();
    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    /// Handles one request line and returns one response line (no newline).
    /// Never throws; every failure is an error response.
    std::string handle(std::string_view request);

    std::size_t session_count() const;

private:
    struct Session;
    std::shared_ptr<Session> find(const std::string& id) const;

    mutable std::mutex mu_;
    std::map<std::string, std::shared_ptr<Session>> sessions_;
    std::uint64_t next_id_ = 1;
};

/// Line-delimited JSON over TCP on the loopback interface, one thread per
/// connection. Sessions outlive connections.
class SocketServer {
public:
    explicit SocketServer(Service& service) : service_(service) {}
    ~SocketServer();
    SocketServer(const SocketServer&) = delete;
    SocketServer& operator=(const SocketServer&) = delete;

    /// Binds 127.0.0.1:port (0 picks a free port) and starts accepting.
    /// Returns the bound port. Throws std::runtime_error on socket failures.
    int start(int port);
    void stop();

private:
    void accept_loop();
    void serve_connection(int fd);

    Service& service_;
    int listen_fd_ = -1;
    std::atomic<bool> running_{false};
    std::thread acceptor_;
    std::mutex conn_mu_;
    std::vector<std::thread> connections_;
    std::vector<int> open_fds_;
};

} // namespace erobot::service
