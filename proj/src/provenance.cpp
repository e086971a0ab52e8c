#include "restor/provenance.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>

#include "restor/error.hpp"

namespace restor {

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string model_hash(const TorusHamiltonian& h) {
  return hex64(fnv1a64(model_to_json(h).dump()));
}

std::string config_hash(const json& config) { return hex64(fnv1a64(config.dump())); }

std::string utc_timestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json to_json(const RunManifest& m) {
  return json{{"command", m.command},
              {"config", m.config},
              {"config_hash", m.config_hash},
              {"model_hash", m.model_hash},
              {"seed", m.seed},
              {"tool_version", m.tool_version},
              {"started", m.started},
              {"finished", m.finished},
              {"outputs", m.outputs}};
}

void write_json(const json& j, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::usage, "cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace restor
