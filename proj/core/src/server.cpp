#include <httplib.h>

#include "inexa/service.hpp"

namespace inexa::service {

struct HttpServer::Impl {
  Impl(Router& r, ServerOptions o) : router(r), options(std::move(o)) {}

  Router& router;
  ServerOptions options;
  httplib::Server server;
  int port = -1;
};

HttpServer::HttpServer(Router& router, ServerOptions options)
    : impl_(std::make_unique<Impl>(router, std::move(options))) {
  auto dispatch = [this](const httplib::Request& req, httplib::Response& res) {
    std::map<std::string, std::string> query;
    for (const auto& [k, v] : req.params) query.emplace(k, v);
    auto out = impl_->router.handle(req.method, req.path, query, req.body);
    res.status = out.status;
    res.set_content(out.body, out.content_type);
  };
  impl_->server.Get(R"(/sessions(/.*)?)", dispatch);
  impl_->server.Post(R"(/sessions(/.*)?)", dispatch);
  impl_->server.Put(R"(/sessions(/.*)?)", dispatch);
  impl_->server.Delete(R"(/sessions(/.*)?)", dispatch);
}

HttpServer::~HttpServer() { stop(); }

bool HttpServer::bind() {
  auto& s = impl_->server;
  if (!impl_->options.static_dir.empty() && !s.set_mount_point("/", impl_->options.static_dir)) return false;
  if (impl_->options.port == 0) {
    impl_->port = s.bind_to_any_port(impl_->options.host);
  } else if (s.bind_to_port(impl_->options.host, impl_->options.port)) {
    impl_->port = impl_->options.port;
  }
  return impl_->port > 0;
}

int HttpServer::port() const noexcept { return impl_->port; }

void HttpServer::run() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

bool serve(Router& router, const ServerOptions& options) {
  HttpServer server(router, options);
  if (!server.bind()) return false;
  server.run();
  return true;
}

}  // namespace inexa::service
