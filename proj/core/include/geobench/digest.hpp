#pragma once

#include <string>
#include <string_view>

namespace geobench {

/// Incremental SHA-256, hex output.
class Sha256 {
 public:
  Sha256();
  ~Sha256();
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;

  Sha256& update(std::string_view bytes);
  std::string hex_digest();

 private:
  void* ctx_;
};

std::string sha256_hex(std::string_view bytes);

struct Corpus;
/// Digest of the corpus' interchange-format serialization and manifest fields.
std::string corpus_digest(const Corpus& corpus);

}  // namespace geobench
