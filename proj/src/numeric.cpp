#include "casimir/numeric.hpp"

#include <algorithm>
#include <cmath>

namespace casimir {

std::vector<CompiledFunction::Term> CompiledFunction::lower(const Polynomial& p,
                                                            std::vector<Atom>& atoms) {
  std::vector<Term> out;
  out.reserve(p.term_count());
  for (const auto& [m, c] : p.terms()) {
    Term t{c.get_d(), {}};
    for (const auto& [atom, k] : m) {
      auto it = std::find(atoms.begin(), atoms.end(), atom);
      std::size_t slot = static_cast<std::size_t>(it - atoms.begin());
      if (it == atoms.end()) atoms.push_back(atom);
      t.factors.emplace_back(slot, k);
    }
    out.push_back(std::move(t));
  }
  return out;
}

CompiledFunction::CompiledFunction(const RationalFunction& f) {
  num_ = lower(f.numerator(), atoms_);
  if (!f.is_polynomial()) {
    den_ = lower(f.denominator(), atoms_);
  } else {
    const double d = f.denominator().constant_value().get_d();
    for (auto& t : num_) t.coefficient /= d;
  }
}

double CompiledFunction::sum(const std::vector<Term>& terms, const std::vector<double>& values) {
  double acc = 0;
  for (const auto& t : terms) {
    double v = t.coefficient;
    for (const auto& [slot, k] : t.factors) {
      const double x = values[slot];
      switch (k) {
        case 1:
          v *= x;
          break;
        case 2:
          v *= x * x;
          break;
        default:
          v *= std::pow(x, k);
      }
    }
    acc += v;
  }
  return acc;
}

double CompiledFunction::operator()(const Point<double>& p) const {
  if (num_.empty()) return 0.0;
  std::vector<double> values(atoms_.size());
  for (std::size_t i = 0; i < atoms_.size(); ++i) values[i] = evaluate(atoms_[i], p);
  const double n = sum(num_, values);
  if (den_.empty()) return n;
  const double d = sum(den_, values);
  if (d == 0) throw EvalError("division by zero");
  return n / d;
}

CompiledVector::CompiledVector(const std::vector<RationalFunction>& fs) {
  parts_.reserve(fs.size());
  for (const auto& f : fs) parts_.emplace_back(f);
}

Point<double> CompiledVector::operator()(const Point<double>& p) const {
  Point<double> out(static_cast<Eigen::Index>(parts_.size()));
  for (std::size_t i = 0; i < parts_.size(); ++i) out(static_cast<Eigen::Index>(i)) = parts_[i](p);
  return out;
}

}  // namespace casimir
