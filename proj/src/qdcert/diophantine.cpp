#include "qdcert/diophantine.hpp"

#include <cmath>
#include <numbers>
#include <optional>

#include "qdcert/errors.hpp"

namespace qdcert {

ThetaSpec ThetaSpec::rational(Int p, Int q) {
  ThetaSpec s;
  s.kind = Kind::rational;
  s.p = std::move(p);
  s.q = std::move(q);
  return s;
}

ThetaSpec ThetaSpec::quadratic(Int a, Int b, Int D, Int c) {
  ThetaSpec s;
  s.kind = Kind::quadratic;
  s.a = std::move(a);
  s.b = std::move(b);
  s.D = std::move(D);
  s.c = std::move(c);
  return s;
}

ThetaSpec ThetaSpec::decimal_literal(std::string digits) {
  ThetaSpec s;
  s.kind = Kind::decimal;
  s.decimal = std::move(digits);
  return s;
}

ThetaSpec ThetaSpec::golden() { return quadratic(-1, 1, 5, 2); }

namespace {

mpq_class parse_decimal(const std::string& text) {
  const auto dot = text.find('.');
  const std::string whole = text.substr(0, dot);
  const std::string frac = dot == std::string::npos ? "" : text.substr(dot + 1);
  auto all_digits = [](const std::string& s) {
    for (char ch : s)
      if (ch < '0' || ch > '9') return false;
    return true;
  };
  if ((whole.empty() && frac.empty()) || !all_digits(whole) || !all_digits(frac))
    throw ConfigError("theta decimal literal must look like 0.ddd: '" + text + "'");
  Int num(whole.empty() ? "0" : whole, 10);
  Int den = 1;
  for (char ch : frac) {
    num = num * 10 + (ch - '0');
    den *= 10;
  }
  mpq_class v(num, den);
  v.canonicalize();
  return v;
}

Int floor_div(const Int& a, const Int& b) {
  Int r;
  mpz_fdiv_q(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

Int isqrt(const Int& v) {
  Int r;
  mpz_sqrt(r.get_mpz_t(), v.get_mpz_t());
  return r;
}

// Incremental continued-fraction expansion of a rational or a reduced
// quadratic surd (P + sqrt(R)) / Q.
class CfStream {
 public:
  static CfStream of_rational(const mpq_class& v) {
    CfStream s;
    s.quadratic_ = false;
    s.num_ = v.get_num();
    s.den_ = v.get_den();
    return s;
  }
  static CfStream of_quadratic(const Int& P, const Int& R, const Int& Q) {
    CfStream s;
    s.quadratic_ = true;
    s.P_ = P;
    s.R_ = R;
    s.Q_ = Q;
    s.root_ = isqrt(R);
    return s;
  }

  std::optional<Int> next() {
    if (!quadratic_) {
      if (sgn(den_) == 0) return std::nullopt;
      Int a = floor_div(num_, den_);
      Int rem = num_ - a * den_;
      num_ = den_;
      den_ = rem;
      return a;
    }
    // floor((P + sqrt R)/Q) from the integer root, since sqrt R is irrational
    Int a = sgn(Q_) > 0 ? floor_div(P_ + root_, Q_) : floor_div(P_ + root_ + 1, Q_);
    P_ = a * Q_ - P_;
    Q_ = (R_ - P_ * P_) / Q_;
    return a;
  }

 private:
  bool quadratic_ = false;
  Int num_, den_;
  Int P_, R_, Q_, root_;
};

}  // namespace

Theta::Theta(ThetaSpec spec) : spec_(std::move(spec)), bits_(spec_.precision_bits) {
  if (bits_ < kMinThetaBits)
    throw ConfigError("theta precision must be at least " + std::to_string(kMinThetaBits) + " bits");
  mpz_ui_pow_ui(one_.get_mpz_t(), 2, bits_);

  switch (spec_.kind) {
    case ThetaSpec::Kind::rational:
      if (sgn(spec_.q) == 0) throw ConfigError("rational theta has zero denominator");
      exact_ = mpq_class(spec_.p, spec_.q);
      exact_.canonicalize();
      rational_ = true;
      break;
    case ThetaSpec::Kind::decimal:
      exact_ = parse_decimal(spec_.decimal);
      rational_ = true;
      break;
    case ThetaSpec::Kind::quadratic: {
      if (sgn(spec_.c) == 0) throw ConfigError("quadratic theta has zero denominator");
      if (sgn(spec_.D) < 0) throw ConfigError("quadratic theta needs D >= 0");
      const Int root = isqrt(spec_.D);
      if (sgn(spec_.b) == 0 || root * root == spec_.D) {
        exact_ = mpq_class(spec_.a + spec_.b * root, spec_.c);
        exact_.canonicalize();
        rational_ = true;
        break;
      }
      // (a + b sqrt D)/c = (P + sqrt R)/Q with R = b^2 D
      const int sb = sgn(spec_.b);
      qp_ = spec_.a * sb;
      qr_ = spec_.b * spec_.b * spec_.D;
      qq_ = spec_.c * sb;
      if (!mpz_divisible_p(Int(qr_ - qp_ * qp_).get_mpz_t(), qq_.get_mpz_t())) {
        const Int aq = abs(qq_);
        qp_ *= aq;
        qr_ *= qq_ * qq_;
        qq_ *= aq;
      }
      // numerator a 2^B + b sqrt(D) 2^B lies strictly between
      // a 2^B + b S and a 2^B + b (S+1), S = isqrt(D 4^B)
      const Int s = isqrt(Int(spec_.D * one_ * one_));
      fixed_ = floor_div(spec_.a * one_ + spec_.b * s, spec_.c);
      err_ulps_ = abs(spec_.b) + 1;
      break;
    }
  }

  if (rational_) {
    if (sgn(exact_) < 0 || exact_ >= 1) throw ConfigError("theta must lie in [0,1)");
    fixed_ = floor_div(exact_.get_num() * one_, exact_.get_den());
    err_ulps_ = 1;
  } else {
    auto cf = CfStream::of_quadratic(qp_, qr_, qq_);
    const Int whole = *cf.next();
    if (sgn(whole) != 0) throw ConfigError("theta must lie in [0,1)");
  }
}

double Theta::approx() const {
  if (rational_) return exact_.get_d();
  return std::ldexp(mpz_get_d(fixed_.get_mpz_t()), -static_cast<int>(bits_));
}

Int Theta::residue(const Int& k) const {
  Int r = k * fixed_;
  mpz_fdiv_r_2exp(r.get_mpz_t(), r.get_mpz_t(), bits_);
  return r;
}

double Theta::centered_frac(const Int& k) const {
  if (rational_) {
    const Int& den = exact_.get_den();
    Int r = k * exact_.get_num();
    mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), den.get_mpz_t());
    if (2 * r >= den) r -= den;
    return mpq_class(r, den).get_d();
  }
  Int r = residue(k);
  if (2 * r >= one_) r -= one_;
  return std::ldexp(mpz_get_d(r.get_mpz_t()), -static_cast<int>(bits_));
}

double Theta::frac_error_bound(const Int& k) const {
  if (rational_) return 0.0;
  const Int ulps = abs(k) * err_ulps_ + 1;
  return std::ldexp(mpz_get_d(ulps.get_mpz_t()), -static_cast<int>(bits_));
}

double Theta::dist_to_Z(const Int& n) const { return std::abs(centered_frac(n)); }

bool Theta::dist_below_reciprocal(const Int& n) const {
  if (sgn(n) <= 0) throw ConfigError("dist(n theta, Z) < 1/n needs n >= 1");
  if (rational_) {
    const Int& den = exact_.get_den();
    Int r = n * exact_.get_num();
    mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), den.get_mpz_t());
    const Int dist = r < den - r ? r : Int(den - r);
    return dist * n < den;
  }
  const Int r = residue(n);
  const Int dist = r < one_ - r ? r : Int(one_ - r);
  return (dist + n * err_ulps_) * n < one_;
}

bool Theta::approximation_below_reciprocal(const Int& p, const Int& q) const {
  if (sgn(q) <= 0) return false;
  if (rational_) {
    const Int gap = abs(q * exact_.get_num() - p * exact_.get_den());
    return gap * q < exact_.get_den();
  }
  const Int gap = abs(q * fixed_ - p * one_) + q * err_ulps_;
  return gap * q < one_;
}

std::complex<double> Theta::character(const Int& k) const {
  const double angle = 2.0 * std::numbers::pi * centered_frac(k);
  return {std::cos(angle), std::sin(angle)};
}

double Theta::phase_gap(const Int& k) const {
  return 2.0 * std::abs(std::sin(std::numbers::pi * centered_frac(k)));
}

std::vector<Int> Theta::partial_quotients(std::size_t count) const {
  auto cf = rational_ ? CfStream::of_rational(exact_) : CfStream::of_quadratic(qp_, qr_, qq_);
  std::vector<Int> out;
  while (out.size() < count) {
    auto a = cf.next();
    if (!a) break;
    out.push_back(std::move(*a));
  }
  return out;
}

namespace {

template <typename Keep>
std::vector<Convergent> build_convergents(const Theta& theta, Keep keep_going) {
  std::vector<Convergent> out;
  // terms are pulled in doubling blocks; quadratic expansions never end
  std::size_t pulled = 0;
  std::vector<Int> terms;
  Int p_prev = 1, q_prev = 0, p_prev2 = 0, q_prev2 = 1;
  std::size_t index = 0;
  for (;;) {
    if (pulled == terms.size()) {
      terms = theta.partial_quotients(terms.size() * 2 + 16);
      if (pulled == terms.size()) break;
    }
    const Int& a = terms[pulled++];
    Int p = a * p_prev + p_prev2;
    Int q = a * q_prev + q_prev2;
    p_prev2 = p_prev;
    q_prev2 = q_prev;
    p_prev = p;
    q_prev = q;
    Convergent c{p, q, index++};
    if (!theta.approximation_below_reciprocal(c.p, c.q))
      throw InvariantViolation("convergent " + c.p.get_str() + "/" + c.q.get_str() +
                               " fails |q theta - p| < 1/q");
    if (!out.empty() && out.back().q == c.q) {
      out.back() = std::move(c);  // [0; 1, ...] repeats q = 1; keep the better one
    } else {
      if (!keep_going(out, c)) break;
      out.push_back(std::move(c));
    }
  }
  return out;
}

}  // namespace

std::vector<Convergent> convergents(const Theta& theta, std::size_t count) {
  if (count == 0) throw ConfigError("convergent count must be >= 1");
  auto out = build_convergents(theta, [&](const std::vector<Convergent>& acc, const Convergent&) {
    return acc.size() < count;
  });
  return out;
}

std::vector<Convergent> convergents_up_to(const Theta& theta, const Int& max_q) {
  return build_convergents(theta, [&](const std::vector<Convergent>&, const Convergent& c) {
    return c.q <= max_q;
  });
}

double analytic_bound(int d, const Int& n) {
  return 2.0 * std::numbers::pi * d * d / std::sqrt(n.get_d());
}

bool qualifies(const Theta& theta, const Int& p, const Int& n) {
  Int p4;
  mpz_pow_ui(p4.get_mpz_t(), p.get_mpz_t(), 4);
  return n > p4 && theta.dist_below_reciprocal(n);
}

NSelection select_n(const Theta& theta, const Int& p, double eps, int d, const Int& cap) {
  if (sgn(p) < 1) throw ConfigError("select_n requires p >= 1");
  if (!(eps > 0.0)) throw ConfigError("select_n requires eps > 0");
  if (cap < 2) throw ConfigError("select_n requires cap >= 2");
  Int p4;
  mpz_pow_ui(p4.get_mpz_t(), p.get_mpz_t(), 4);

  std::optional<Int> fallback;
  auto consider = [&](const Int& q) -> std::optional<NSelection> {
    if (q <= p4 || q > cap || !theta.dist_below_reciprocal(q)) return std::nullopt;
    const double bound = analytic_bound(d, q);
    if (bound < eps) return NSelection{q, true, bound};
    fallback = q;
    return std::nullopt;
  };

  if (theta.is_rational()) {
    const Int& den = theta.exact().get_den();
    for (Int q = (p4 / den + 1) * den; q <= cap; q += den)
      if (auto hit = consider(q)) return *hit;
  } else {
    for (const auto& c : convergents_up_to(theta, cap))
      if (auto hit = consider(c.q)) return *hit;
  }
  if (!fallback)
    throw ConfigError("no n <= " + cap.get_str() + " satisfies n > p^4 and dist(n theta, Z) < 1/n");
  return NSelection{*fallback, false, analytic_bound(d, *fallback)};
}

}  // namespace qdcert
