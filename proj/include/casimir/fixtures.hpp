#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "casimir/system_file.hpp"

namespace casimir {

struct Fixture {
  std::string name;
  std::filesystem::path path;
  SystemFile system;
};

/// $CASIMIR_FIXTURES if set, else the corpus shipped with the sources.
std::filesystem::path fixture_dir();

/// Names of every `*.sys` file in the corpus, sorted.
std::vector<std::string> fixture_names();

/// Throws InvalidArgument for an unknown name.
Fixture load_fixture(std::string_view name);

}  // namespace casimir
