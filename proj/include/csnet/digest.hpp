#pragma once

#include <string>

#include "csnet/net.hpp"

namespace csnet {

// Hex-encoded SHA-256 of an arbitrary byte string.
std::string sha256_hex(const std::string& data);

// Canonical text form of a marking: places sorted by name, tokens in multiset
// order, e.g. "buffer=[1, 2];ready=[()]". Equal markings produce equal text.
std::string canonical_marking(const Marking& marking);

std::string marking_digest(const Marking& marking);

}  // namespace csnet
