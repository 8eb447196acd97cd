#include "geobench/digest.hpp"

#include <openssl/evp.h>

#include "geobench/corpus.hpp"
#include "geobench/errors.hpp"

namespace geobench {

Sha256::Sha256() : ctx_(EVP_MD_CTX_new()) {
  if (!ctx_ || EVP_DigestInit_ex(static_cast<EVP_MD_CTX*>(ctx_), EVP_sha256(), nullptr) != 1)
    throw Error("cannot initialize SHA-256");
}

Sha256::~Sha256() { EVP_MD_CTX_free(static_cast<EVP_MD_CTX*>(ctx_)); }

Sha256& Sha256::update(std::string_view bytes) {
  EVP_DigestUpdate(static_cast<EVP_MD_CTX*>(ctx_), bytes.data(), bytes.size());
  return *this;
}

std::string Sha256::hex_digest() {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(static_cast<EVP_MD_CTX*>(ctx_), md, &len);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[md[i] >> 4]);
    out.push_back(kHex[md[i] & 0xF]);
  }
  return out;
}

std::string sha256_hex(std::string_view bytes) {
  Sha256 sha;
  return sha.update(bytes).hex_digest();
}

std::string corpus_digest(const Corpus& corpus) {
  Sha256 sha;
  sha.update(corpus.name).update("\n").update(to_string(corpus.completeness)).update("\n");
  for (const Document& doc : corpus.documents) sha.update(serialize_document(doc)).update("\n");
  return sha.hex_digest();
}

}  // namespace geobench
