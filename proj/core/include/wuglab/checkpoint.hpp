#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "wuglab/tensor.hpp"

namespace wuglab::numerics {

/// Flat binary tensor container: a header carrying an endianness marker and
/// the name/shape table, followed by all payloads as row-major doubles in
/// entry order. Byte-stable across platforms of equal endianness; loading a
/// file written with the other endianness raises DataError.
void save_checkpoint(const std::string& path,
                     const std::vector<std::pair<std::string, const Tensor*>>& entries);

std::vector<std::pair<std::string, Tensor>> load_checkpoint(const std::string& path);

/// Sidecar `key=value` text record (seed, epoch, vocab hash, config).
void save_metadata(const std::string& path, const std::map<std::string, std::string>& kv);
std::map<std::string, std::string> load_metadata(const std::string& path);

}  // namespace wuglab::numerics
