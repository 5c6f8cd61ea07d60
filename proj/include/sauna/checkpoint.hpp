#pragma once

#include <string>

#include "sauna/params.hpp"

#include <nlohmann/json_fwd.hpp>

namespace sauna {

// Checkpoint file layout:
//   bytes 0..7   magic "SAUNACP1"
//   u32 (LE)     header length in bytes
//   header       UTF-8 JSON: {"format", "version", "tensors":[{name,size}...],
//                plus caller-provided metadata under "meta"}
//   payload      all tensor values as little-endian float64, in span order
void save_checkpoint(const std::string& path, const ParamSpans& tensors,
                     const nlohmann::json& meta);

// Loads into the given spans; names and sizes must match the file exactly.
// Returns the "meta" object from the header.
nlohmann::json load_checkpoint(const std::string& path, const ParamSpans& tensors);

// Reads just the header metadata (for inspection).
nlohmann::json read_checkpoint_header(const std::string& path);

}  // namespace sauna
