#include "sauna/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

#include <nlohmann/json.hpp>

namespace sauna {

static_assert(std::endian::native == std::endian::little,
              "checkpoint serialization assumes a little-endian host");

namespace {

constexpr char kMagic[8] = {'S', 'A', 'U', 'N', 'A', 'C', 'P', '1'};

nlohmann::json make_header(const ParamSpans& tensors, const nlohmann::json& meta) {
  nlohmann::json tensor_list = nlohmann::json::array();
  for (const auto& t : tensors) {
    tensor_list.push_back({{"name", t.name}, {"size", t.size}});
  }
  return nlohmann::json{{"format", "sauna.checkpoint"},
                        {"version", 1},
                        {"tensors", tensor_list},
                        {"meta", meta}};
}

nlohmann::json read_header(std::ifstream& in, const std::string& path) {
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kMagic, 8) != 0) {
    throw std::runtime_error("not a sauna checkpoint: " + path);
  }
  std::uint32_t header_len = 0;
  in.read(reinterpret_cast<char*>(&header_len), sizeof(header_len));
  if (!in || header_len == 0 || header_len > (1u << 24)) {
    throw std::runtime_error("corrupt checkpoint header: " + path);
  }
  std::string header(header_len, '\0');
  in.read(header.data(), header_len);
  if (!in) {
    throw std::runtime_error("truncated checkpoint header: " + path);
  }
  return nlohmann::json::parse(header);
}

}  // namespace

void save_checkpoint(const std::string& path, const ParamSpans& tensors,
                     const nlohmann::json& meta) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open checkpoint for writing: " + path);
  }
  const std::string header = make_header(tensors, meta).dump();
  const std::uint32_t header_len = static_cast<std::uint32_t>(header.size());
  out.write(kMagic, 8);
  out.write(reinterpret_cast<const char*>(&header_len), sizeof(header_len));
  out.write(header.data(), header.size());
  for (const auto& t : tensors) {
    out.write(reinterpret_cast<const char*>(t.data),
              static_cast<std::streamsize>(t.size * sizeof(double)));
  }
  if (!out) {
    throw std::runtime_error("failed writing checkpoint: " + path);
  }
}

nlohmann::json load_checkpoint(const std::string& path, const ParamSpans& tensors) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open checkpoint: " + path);
  }
  const nlohmann::json header = read_header(in, path);
  const auto& tensor_list = header.at("tensors");
  if (tensor_list.size() != tensors.size()) {
    throw std::runtime_error("checkpoint tensor count mismatch: " + path);
  }
  for (std::size_t i = 0; i < tensors.size(); ++i) {
    if (tensor_list[i].at("name").get<std::string>() != tensors[i].name ||
        tensor_list[i].at("size").get<std::size_t>() != tensors[i].size) {
      throw std::runtime_error("checkpoint tensor layout mismatch at '" +
                               tensors[i].name + "': " + path);
    }
  }
  for (const auto& t : tensors) {
    in.read(reinterpret_cast<char*>(t.data),
            static_cast<std::streamsize>(t.size * sizeof(double)));
    if (!in) {
      throw std::runtime_error("truncated checkpoint payload: " + path);
    }
  }
  return header.value("meta", nlohmann::json::object());
}

nlohmann::json read_checkpoint_header(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open checkpoint: " + path);
  }
  return read_header(in, path);
}

}  // namespace sauna
