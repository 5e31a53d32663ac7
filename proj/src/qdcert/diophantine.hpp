#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "qdcert/unitriangular.hpp"

namespace qdcert {

/// Exact description of the rotation number theta in [0,1).
///
/// Decimal literals are parsed into an exact rational, so every kind has an
/// exact continued-fraction expansion. Quadratic irrationals are
/// (a + b sqrt(D)) / c.
struct ThetaSpec {
  enum class Kind { rational, quadratic, decimal };

  Kind kind = Kind::rational;
  Int p = 0, q = 1;
  Int a = 0, b = 0, D = 0, c = 1;
  std::string decimal;
  unsigned precision_bits = 256;

  static ThetaSpec rational(Int p, Int q);
  static ThetaSpec quadratic(Int a, Int b, Int D, Int c);
  static ThetaSpec decimal_literal(std::string digits);
  // (sqrt(5) - 1) / 2
  static ThetaSpec golden();
};

inline constexpr unsigned kMinThetaBits = 192;

/// Evaluated theta: an exact form plus a fixed-point approximation
/// floor(theta * 2^bits) with a certified error bound.
///
/// All phases e^{2 pi i theta k} are produced from the exact integer k by
/// reducing k*theta mod 1 in fixed point before a single double-precision
/// exponential.
class Theta {
 public:
  explicit Theta(ThetaSpec spec);

  const ThetaSpec& spec() const noexcept { return spec_; }
  bool is_rational() const noexcept { return rational_; }
  // Exact value; only meaningful when is_rational().
  const mpq_class& exact() const noexcept { return exact_; }
  unsigned bits() const noexcept { return bits_; }
  double approx() const;

  // k*theta mod 1, centered in [-1/2, 1/2).
  double centered_frac(const Int& k) const;
  // Certified bound on |computed - true| for centered_frac(k).
  double frac_error_bound(const Int& k) const;

  double dist_to_Z(const Int& n) const;
  // Certified test of dist(n*theta, Z) < 1/n.
  bool dist_below_reciprocal(const Int& n) const;
  // Certified test of |q*theta - p| < 1/q.
  bool approximation_below_reciprocal(const Int& p, const Int& q) const;

  // e^{2 pi i theta k}
  std::complex<double> character(const Int& k) const;
  // |e^{2 pi i theta k} - 1| = 2 |sin(pi frac(k theta))|
  double phase_gap(const Int& k) const;

  // First `count` partial quotients [a0; a1, a2, ...]; shorter for rationals.
  std::vector<Int> partial_quotients(std::size_t count) const;

 private:
  // fixed-point residue of k*theta mod 1 in [0, 2^bits)
  Int residue(const Int& k) const;

  ThetaSpec spec_;
  unsigned bits_;
  bool rational_ = false;
  mpq_class exact_;
  Int fixed_;
  Int err_ulps_;
  Int one_;  // 2^bits
  // reduced quadratic form (P + sqrt(R)) / Q with Q | (R - P^2)
  Int qp_, qr_, qq_;
};

struct Convergent {
  Int p, q;
  std::size_t index = 0;
};

// First `count` convergents with strictly increasing denominators. Each one
// is checked against |q theta - p| < 1/q in fixed point before it is
// returned; rationals stop at their last convergent.
std::vector<Convergent> convergents(const Theta& theta, std::size_t count);
// All convergents with q <= max_q.
std::vector<Convergent> convergents_up_to(const Theta& theta, const Int& max_q);

double analytic_bound(int d, const Int& n);

struct NSelection {
  Int n;
  bool analytic_bound_met = false;
  double bound = 0.0;
};

inline constexpr long kDefaultNCap = 1'000'000;

// Smallest convergent denominator (multiple of the denominator for rational
// theta) n <= cap with n > p^4, dist(n theta, Z) < 1/n and
// 2 pi d^2 n^{-1/2} < eps. Falls back to the largest n satisfying the first
// two conditions with analytic_bound_met = false.
NSelection select_n(const Theta& theta, const Int& p, double eps, int d,
                    const Int& cap = kDefaultNCap);

// n > p^4 and dist(n theta, Z) < 1/n.
bool qualifies(const Theta& theta, const Int& p, const Int& n);

}  // namespace qdcert
