#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace geobench {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input data: corpus records, gazetteer tables, cache files, configs.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Invalid command-line or configuration usage.
class UsageError : public Error {
 public:
  using Error::Error;
};

class CorpusError : public DataError {
 public:
  CorpusError(const std::string& message, std::size_t line, std::string document_id)
      : DataError(message), line_(line), document_id_(std::move(document_id)) {}

  /// 1-based line number in the corpus file, 0 when not file-related.
  std::size_t line() const noexcept { return line_; }
  const std::string& document_id() const noexcept { return document_id_; }

 private:
  std::size_t line_;
  std::string document_id_;
};

class GazetteerError : public DataError {
 public:
  using DataError::DataError;
};

/// No gazetteer candidate exists for a toponym.
class NoCandidate : public Error {
 public:
  explicit NoCandidate(const std::string& name)
      : Error("no gazetteer candidate for '" + name + "'"), name_(name) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

class AdapterError : public Error {
 public:
  using Error::Error;
};

class AdapterTimeout : public AdapterError {
 public:
  using AdapterError::AdapterError;
};

class AdapterProtocolError : public AdapterError {
 public:
  AdapterProtocolError(const std::string& message, std::string raw_payload)
      : AdapterError(message), raw_payload_(std::move(raw_payload)) {}

  /// The response bytes exactly as received, kept for diagnostics.
  const std::string& raw_payload() const noexcept { return raw_payload_; }

 private:
  std::string raw_payload_;
};

/// A run was aborted because too many documents failed in an adapter.
class RunAborted : public AdapterError {
 public:
  using AdapterError::AdapterError;
};

}  // namespace geobench
