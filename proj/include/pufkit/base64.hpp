#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace pufkit {

std::string base64_encode(const std::vector<uint8_t>& data);
std::vector<uint8_t> base64_decode(const std::string& text);  // FormatError on bad input

}  // namespace pufkit
