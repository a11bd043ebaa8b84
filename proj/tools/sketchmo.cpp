#include <csignal>
#include <iostream>
#include <memory>

#include "sketchmo/cli.hpp"
#include "sketchmo/server.hpp"

namespace {

httplib::Server* g_server = nullptr;

int serve(const std::string& index_path, const std::string& host, int port) {
    auto index = std::make_shared<const sketchmo::DatasetIndex>(sketchmo::load_index(index_path));
    sketchmo::SessionManager manager;
    manager.add_dataset("default", index);

    httplib::Server server;
    sketchmo::install_routes(server, manager);
    g_server = &server;
    std::signal(SIGINT, [](int) {
        if (g_server) g_server->stop();
    });
    std::cout << "serving " << index->entries.size() << " entries on http://" << host << ':' << port << std::endl;
    if (!server.listen(host, port)) {
        std::cerr << "error: cannot listen on " << host << ':' << port << '\n';
        return sketchmo::cli::kDataError;
    }
    return sketchmo::cli::kOk;
}

}  // namespace

int main(int argc, char** argv) { return sketchmo::cli::run(argc, argv, std::cout, std::cerr, serve); }
