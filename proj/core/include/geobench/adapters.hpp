#pragma once

#include <memory>
#include <string>

#include "geobench/geoparser.hpp"

namespace geobench {

/// Talks to a resident child process over stdin/stdout, one JSON line per
/// document each way. The child is started lazily and restarted after a
/// timeout or a crash.
class ProcessAdapter final : public Geoparser {
 public:
  explicit ProcessAdapter(ProcessAdapterParams params);
  ~ProcessAdapter() override;

  ProcessAdapter(const ProcessAdapter&) = delete;
  ProcessAdapter& operator=(const ProcessAdapter&) = delete;

  ParseOutput parse(const Document& doc) override;

 private:
  struct Child;
  void start();
  void stop() noexcept;
  std::string exchange(const std::string& request_line);

  ProcessAdapterParams params_;
  std::unique_ptr<Child> child_;
};

/// POSTs each document to <endpoint>/parse.
class HttpAdapter final : public Geoparser {
 public:
  explicit HttpAdapter(HttpAdapterParams params);
  ~HttpAdapter() override;

  HttpAdapter(const HttpAdapter&) = delete;
  HttpAdapter& operator=(const HttpAdapter&) = delete;

  ParseOutput parse(const Document& doc) override;

 private:
  struct Client;
  HttpAdapterParams params_;
  std::unique_ptr<Client> client_;
};

}  // namespace geobench
