#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "restor/hamiltonian.hpp"
#include "restor/model_io.hpp"

namespace restor {

inline constexpr std::string_view kToolVersion = "0.3.0";

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t h);

/// Hash of the canonical model serialization.
std::string model_hash(const TorusHamiltonian& h);
/// Hash of a configuration object, keys in sorted order.
std::string config_hash(const json& config);

std::string utc_timestamp();

struct RunManifest {
  std::string command;
  json config;
  std::string config_hash;
  std::string model_hash;  // empty when no model is involved
  std::uint64_t seed = 0;
  std::string tool_version{kToolVersion};
  std::string started;
  std::string finished;
  std::vector<std::string> outputs;
};

json to_json(const RunManifest& m);
void write_json(const json& j, const std::filesystem::path& path);

}  // namespace restor
