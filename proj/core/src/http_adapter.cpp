#include <httplib.h>

#include "geobench/adapters.hpp"
#include "geobench/errors.hpp"
#include "geobench/wire.hpp"

namespace geobench {

struct HttpAdapter::Client {
  explicit Client(const std::string& base) : http(base) {}
  httplib::Client http;
  std::string path_prefix;
};

namespace {

// Splits "http://host:port/prefix" into the scheme+authority and the path.
std::pair<std::string, std::string> split_endpoint(const std::string& endpoint) {
  const auto scheme = endpoint.find("://");
  const auto path_start = endpoint.find('/', scheme == std::string::npos ? 0 : scheme + 3);
  if (path_start == std::string::npos) return {endpoint, ""};
  std::string path = endpoint.substr(path_start);
  while (!path.empty() && path.back() == '/') path.pop_back();
  return {endpoint.substr(0, path_start), path};
}

}  // namespace

HttpAdapter::HttpAdapter(HttpAdapterParams params) : params_(std::move(params)) {
  if (params_.endpoint.empty()) throw UsageError("external-http geoparser needs an endpoint");
  auto [base, prefix] = split_endpoint(params_.endpoint);
  client_ = std::make_unique<Client>(base);
  if (!client_->http.is_valid()) throw UsageError("invalid endpoint \"" + params_.endpoint + "\"");
  client_->path_prefix = prefix;
  const auto timeout = std::chrono::duration_cast<std::chrono::microseconds>(params_.timeout);
  client_->http.set_connection_timeout(timeout);
  client_->http.set_read_timeout(timeout);
  client_->http.set_write_timeout(timeout);
  client_->http.set_keep_alive(true);
}

HttpAdapter::~HttpAdapter() = default;

ParseOutput HttpAdapter::parse(const Document& doc) {
  const std::string body = wire::encode_request(doc);
  auto res = client_->http.Post(client_->path_prefix + "/parse", body, "application/json");
  if (!res) {
    const auto err = res.error();
    if (err == httplib::Error::Read || err == httplib::Error::Write ||
        err == httplib::Error::ConnectionTimeout) {
      throw AdapterTimeout("http adapter: " + httplib::to_string(err));
    }
    throw AdapterError("http adapter: " + httplib::to_string(err));
  }
  if (res->status != 200) {
    throw AdapterProtocolError("http adapter returned status " + std::to_string(res->status),
                               res->body);
  }
  return wire::decode_response(res->body, doc);
}

}  // namespace geobench
