#include "csnet/digest.hpp"

#include <openssl/evp.h>

#include <array>
#include <cstdio>
#include <sstream>

#include "csnet/errors.hpp"

namespace csnet {

std::string sha256_hex(const std::string& data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> raw{};
  unsigned int len = 0;
  if (!EVP_Digest(data.data(), data.size(), raw.data(), &len, EVP_sha256(), nullptr)) {
    throw Error("sha256 digest failed");
  }
  std::string hex(len * 2, '0');
  static const char* digits = "0123456789abcdef";
  for (unsigned int i = 0; i < len; ++i) {
    hex[2 * i] = digits[raw[i] >> 4];
    hex[2 * i + 1] = digits[raw[i] & 0xf];
  }
  return hex;
}

std::string canonical_marking(const Marking& marking) {
  std::ostringstream out;
  bool first_place = true;
  for (const auto& [place, tokens] : marking.places()) {
    if (!first_place) out << ';';
    first_place = false;
    out << place << "=[";
    bool first = true;
    for (const auto& value : tokens.values()) {
      if (!first) out << ", ";
      first = false;
      out << value.to_text();
    }
    out << ']';
  }
  return out.str();
}

std::string marking_digest(const Marking& marking) {
  return sha256_hex(canonical_marking(marking));
}

}  // namespace csnet
