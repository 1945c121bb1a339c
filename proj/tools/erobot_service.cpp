// Session server for the workbench front end. Line-delimited JSON over
// 127.0.0.1:<port>, or over stdin/stdout with --stdio.

#include <unistd.h>

#include <csignal>
#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "erobot/service.hpp"

namespace {

volatile std::sig_atomic_t g_stop = 0;

void on_signal(int) { g_stop = 1; }

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"erobot session server"};
    int port = 7411;
    bool stdio = false;
    app.add_option("--port", port, "TCP port on the loopback interface (0 picks one)")
        ->check(CLI::Range(0, 65535));
    app.add_flag("--stdio", stdio, "serve one client over stdin/stdout");
    CLI11_PARSE(app, argc, argv);

    erobot::service::Service service;
    if (stdio) {
        std::string line;
        while (std::getline(std::cin, line)) {
            if (line.empty()) continue;
            std::cout << service.handle(line) << '\n' << std::flush;
        }
        return 0;
    }

    erobot::service::SocketServer server(service);
    try {
        const int bound = server.start(port);
        fmt::print("listening on 127.0.0.1:{}\n", bound);
        std::fflush(stdout);
    } catch (const std::exception& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return 1;
    }
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    while (!g_stop) pause();
    server.stop();
    return 0;
}
