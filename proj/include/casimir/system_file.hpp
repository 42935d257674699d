#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "casimir/poisson.hpp"

namespace casimir {

/// Malformed system file; line() is 1-based.
class SystemFileError : public Error {
 public:
  SystemFileError(const std::string& message, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + message), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Expected results from an `expect ... end` block. Expression texts are
/// parsed lazily because they need the system's variables.
struct Expectations {
  std::optional<std::size_t> rank;
  std::optional<std::vector<std::size_t>> dependent;  // 0-based rows
  struct GammaEntry {
    std::size_t dependent;    // 0-based
    std::size_t independent;  // 0-based
    std::string text;
  };
  std::vector<GammaEntry> gamma;
  std::vector<std::string> casimirs;
  /// "none" when the cost ratio is undefined.
  std::optional<std::string> ratio;
  /// Where each expected value comes from, keyed by field name.
  std::map<std::string, std::string> origin;
};

struct SystemFile {
  std::string name;
  std::vector<std::string> vars;
  std::vector<std::string> params;
  std::vector<std::pair<std::string, std::string>> lets;
  std::vector<std::tuple<std::size_t, std::size_t, std::string>> entries;  // 0-based, i < j
  std::optional<std::string> hamiltonian;
  std::vector<std::pair<std::string, Sign>> domain;
  std::optional<Expectations> expect;

  VariableSet variables() const;
  Bindings bindings() const;
  Domain domain_constraints() const;
  StructureMatrix structure() const;
  std::optional<Expr> hamiltonian_expr() const;
  /// Parses an expression over this system's symbols and bindings.
  Expr expression(std::string_view text) const;
};

SystemFile parse_system_file(std::string_view text);
SystemFile load_system_file(const std::filesystem::path& path);

}  // namespace casimir
