#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace huescan {

/// "sha256:<lowercase hex>" of a byte buffer.
std::string sha256_hex(const std::vector<std::uint8_t>& bytes);

} // namespace huescan
