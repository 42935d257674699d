#include "casimir/fixtures.hpp"

#include <algorithm>
#include <cstdlib>

namespace casimir {

std::filesystem::path fixture_dir() {
  if (const char* env = std::getenv("CASIMIR_FIXTURES"); env != nullptr && *env != '\0') return env;
  return CASIMIR_FIXTURE_DIR;
}

std::vector<std::string> fixture_names() {
  std::vector<std::string> names;
  std::error_code ec;
  for (const auto& entry : std::filesystem::directory_iterator(fixture_dir(), ec)) {
    if (entry.path().extension() == ".sys") names.push_back(entry.path().stem().string());
  }
  std::sort(names.begin(), names.end());
  return names;
}

Fixture load_fixture(std::string_view name) {
  const auto path = fixture_dir() / (std::string(name) + ".sys");
  if (!std::filesystem::exists(path)) throw InvalidArgument("unknown fixture '" + std::string(name) + "'");
  return Fixture{std::string(name), path, load_system_file(path)};
}

}  // namespace casimir
