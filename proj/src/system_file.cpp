#include "casimir/system_file.hpp"

#include <algorithm>
#include <fstream>
#include <regex>
#include <sstream>

namespace casimir {

VariableSet SystemFile::variables() const { return VariableSet(vars, params); }

Bindings SystemFile::bindings() const {
  const VariableSet v = variables();
  Bindings b;
  for (const auto& [name, text] : lets) b.emplace(name, parse(text, v, b));
  return b;
}

Domain SystemFile::domain_constraints() const {
  const VariableSet v = variables();
  Domain d(v);
  for (const auto& [name, sign] : domain) d.set(*v.index_of(name), sign);
  return d;
}

StructureMatrix SystemFile::structure() const {
  const VariableSet v = variables();
  const Bindings b = bindings();
  std::vector<std::tuple<std::size_t, std::size_t, Expr>> upper;
  for (const auto& [i, j, text] : entries) upper.emplace_back(i, j, parse(text, v, b));
  return StructureMatrix::from_upper(v, upper, domain_constraints());
}

std::optional<Expr> SystemFile::hamiltonian_expr() const {
  if (!hamiltonian) return std::nullopt;
  return expression(*hamiltonian);
}

Expr SystemFile::expression(std::string_view text) const { return parse(text, variables(), bindings()); }

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> words(const std::string& s) {
  std::string t = s;
  for (char& c : t) {
    if (c == ',') c = ' ';
  }
  std::istringstream is(t);
  std::vector<std::string> out;
  for (std::string w; is >> w;) out.push_back(w);
  return out;
}

std::size_t row_index(const std::string& text, std::size_t n, std::size_t line) {
  std::size_t pos = 0;
  unsigned long v = 0;
  try {
    v = std::stoul(text, &pos);
  } catch (const std::exception&) {
    throw SystemFileError("expected a row number, got '" + text + "'", line);
  }
  if (pos != text.size() || v < 1 || v > n) {
    throw SystemFileError("row number '" + text + "' out of range 1.." + std::to_string(n), line);
  }
  return v - 1;
}

class Reader {
 public:
  explicit Reader(std::string_view text) {
    std::istringstream is{std::string(text)};
    for (std::string l; std::getline(is, l);) lines_.push_back(l);
  }

  SystemFile run() {
    for (line_ = 1; line_ <= lines_.size(); ++line_) {
      std::string l = strip(lines_[line_ - 1]);
      if (l.empty()) continue;
      if (in_expect_) {
        expect_line(l);
      } else {
        directive(l);
      }
    }
    line_ = std::max<std::size_t>(lines_.size(), 1);
    if (in_expect_) {
      line_ = expect_line_;
      fail("expect block not closed by 'end'");
    }
    if (f_.vars.empty()) fail("missing 'vars' directive");
    return f_;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw SystemFileError(what, line_); }

  static std::string strip(const std::string& l) {
    const auto hash = l.find('#');
    return trim(hash == std::string::npos ? l : l.substr(0, hash));
  }

  void need_vars() const {
    if (f_.vars.empty()) fail("'vars' must come first");
  }

  VariableSet vars() const {
    try {
      return f_.variables();
    } catch (const Error& e) {
      fail(e.what());
    }
  }

  Expr parse_here(const std::string& text) const {
    try {
      return parse(text, vars(), bindings_);
    } catch (const Error& e) {
      fail(e.what());
    }
  }

  void directive(const std::string& l) {
    static const std::regex entry(R"(^J\s*\[\s*(\d+)\s*\]\s*\[\s*(\d+)\s*\]\s*=\s*(.+)$)");
    static const std::regex let(R"(^let\s+([A-Za-z][A-Za-z0-9_]*)\s*=\s*(.+)$)");
    static const std::regex ham(R"(^H\s*=\s*(.+)$)");
    static const std::regex dom(R"(^domain\s+(.+?)\s*(>\s*0|<\s*0|!=\s*0|real)$)");
    std::smatch m;
    const auto w = words(l);
    const std::string& head = w.front();
    if (head == "system") {
      if (w.size() != 2) fail("usage: system <name>");
      f_.name = w[1];
    } else if (head == "vars") {
      if (!f_.vars.empty()) fail("duplicate 'vars'");
      f_.vars.assign(w.begin() + 1, w.end());
      if (f_.vars.empty()) fail("'vars' needs at least one name");
      vars();
    } else if (head == "params") {
      need_vars();
      if (!f_.params.empty()) fail("duplicate 'params'");
      f_.params.assign(w.begin() + 1, w.end());
      vars();
    } else if (std::regex_match(l, m, let)) {
      need_vars();
      const std::string name = m[1];
      if (vars().index_of(name) || bindings_.count(name) || name == "ln") fail("'" + name + "' is already defined");
      bindings_.emplace(name, parse_here(m[2]));
      f_.lets.emplace_back(name, trim(m[2]));
    } else if (std::regex_match(l, m, entry)) {
      need_vars();
      const std::size_t n = f_.vars.size();
      const std::size_t i = row_index(m[1], n, line_);
      const std::size_t j = row_index(m[2], n, line_);
      if (i >= j) fail("only entries with i < j may be given");
      for (const auto& [a, b, t] : f_.entries) {
        if (a == i && b == j) fail("duplicate entry J[" + std::string(m[1]) + "][" + std::string(m[2]) + "]");
      }
      parse_here(m[3]);
      f_.entries.emplace_back(i, j, trim(m[3]));
    } else if (std::regex_match(l, m, ham)) {
      need_vars();
      if (f_.hamiltonian) fail("duplicate Hamiltonian");
      parse_here(m[1]);
      f_.hamiltonian = trim(m[1]);
    } else if (std::regex_match(l, m, dom)) {
      need_vars();
      std::string rel = m[2];
      rel.erase(std::remove(rel.begin(), rel.end(), ' '), rel.end());
      const Sign s = rel == ">0" ? Sign::Positive : rel == "<0" ? Sign::Negative : rel == "!=0" ? Sign::Nonzero : Sign::Any;
      for (const auto& name : words(m[1])) {
        if (!vars().index_of(name)) fail("unknown identifier '" + name + "' in domain");
        f_.domain.emplace_back(name, s);
      }
    } else if (head == "expect") {
      need_vars();
      if (w.size() != 1) fail("'expect' takes no arguments");
      if (f_.expect) fail("duplicate expect block");
      f_.expect = Expectations{};
      in_expect_ = true;
      expect_line_ = line_;
    } else {
      fail("unknown directive '" + head + "'");
    }
  }

  void expect_line(const std::string& l) {
    static const std::regex gamma(R"(^gamma\s+(\d+)\s+(\d+)\s*=\s*(.+)$)");
    std::smatch m;
    auto& e = *f_.expect;
    const auto w = words(l);
    const std::string& head = w.front();
    const std::size_t n = f_.vars.size();
    if (head == "end") {
      in_expect_ = false;
    } else if (head == "rank") {
      if (w.size() != 2) fail("usage: rank <2m>");
      try {
        e.rank = std::stoul(w[1]);
      } catch (const std::exception&) {
        fail("bad rank '" + w[1] + "'");
      }
    } else if (head == "dependent") {
      std::vector<std::size_t> rows;
      for (std::size_t k = 1; k < w.size(); ++k) rows.push_back(row_index(w[k], n, line_));
      e.dependent = rows;
    } else if (std::regex_match(l, m, gamma)) {
      parse_here(m[3]);
      e.gamma.push_back({row_index(m[1], n, line_), row_index(m[2], n, line_), trim(m[3])});
    } else if (head == "casimir") {
      const std::string text = trim(l.substr(std::string("casimir").size()));
      parse_here(text);
      e.casimirs.push_back(text);
    } else if (head == "ratio") {
      if (w.size() != 2) fail("usage: ratio <p/q | none>");
      e.ratio = w[1];
    } else if (head == "origin") {
      if (w.size() < 3) fail("usage: origin <field> <source>");
      std::string rest;
      for (std::size_t k = 2; k < w.size(); ++k) rest += (k > 2 ? " " : "") + w[k];
      e.origin[w[1]] = rest;
    } else {
      fail("unknown expectation '" + head + "'");
    }
  }

  std::vector<std::string> lines_;
  std::size_t line_ = 0;
  bool in_expect_ = false;
  std::size_t expect_line_ = 0;
  Bindings bindings_;
  SystemFile f_;
};

}  // namespace

SystemFile parse_system_file(std::string_view text) { return Reader(text).run(); }

SystemFile load_system_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open system file '" + path.string() + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return parse_system_file(os.str());
}

}  // namespace casimir
