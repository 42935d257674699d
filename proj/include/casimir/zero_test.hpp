#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "casimir/rational_function.hpp"

namespace casimir {

// Any: unconstrained; sampled with a random sign, never a boundary.
enum class Sign { Positive, Negative, Nonzero, Any };

/// Sign constraint per symbol (state variables and parameters). The default
/// domain is the positive orthant.
class Domain {
 public:
  Domain() = default;
  explicit Domain(const VariableSet& vars) : signs_(vars.size(), Sign::Positive) {}

  std::size_t size() const { return signs_.size(); }
  Sign sign(std::size_t index) const { return signs_.at(index); }
  void set(std::size_t index, Sign s) { signs_.at(index) = s; }

  bool contains(const Point<double>& p, std::size_t state_dim, double margin = 0) const;

  friend bool operator==(const Domain&, const Domain&) = default;

 private:
  std::vector<Sign> signs_;
};

/// Draws generic points: each coordinate a random rational p/q with
/// magnitude in [lo, hi], sign from the domain.
class Sampler {
 public:
  Sampler(const VariableSet& vars, const Domain& domain, std::uint64_t seed, double lo = 1.0,
          double hi = 10.0);

  Point<double> next();
  std::uint64_t seed() const { return seed_; }

 private:
  std::size_t size_;
  Domain domain_;
  std::uint64_t seed_;
  double lo_;
  double hi_;
  std::mt19937_64 rng_;
};

struct ZeroTestOptions {
  int samples = 20;
  double tolerance = 1e-9;
  std::uint64_t seed = 0x5eed;
};

enum class ZeroKind { Zero, NonZero, ProbablyZero };

struct ZeroVerdict {
  ZeroKind kind = ZeroKind::Zero;
  int samples = 0;            // points evaluated by the numeric fallback
  double max_relative = 0.0;  // largest |value| / scale seen

  bool zero() const { return kind != ZeroKind::NonZero; }
  bool certain() const { return kind != ZeroKind::ProbablyZero; }
};

const char* to_string(ZeroKind k);

/// Canonical form first; if that is not literally zero, the numerator is
/// evaluated at generic points and compared against the sum of its term
/// magnitudes.
ZeroVerdict is_zero(const RationalFunction& f, const VariableSet& vars, const Domain& domain,
                    const ZeroTestOptions& options = {});
ZeroVerdict is_zero(const Expr& e, const VariableSet& vars, const Domain& domain,
                    const ZeroTestOptions& options = {});

}  // namespace casimir
