#include "qdcert/gns.hpp"

#include <cmath>

#include "qdcert/errors.hpp"

namespace qdcert {

Complex CentralCharacter::operator()(const UniTri& x) const {
  if (!is_central(x)) return 0.0;
  return theta_.character(x.at(1, x.dim()));
}

Int psi_exponent(const UniTri& y, const QuotientElt& x) {
  if (y.dim() != x.dim()) throw ConfigError("dimension mismatch in psi");
  const int d = y.dim();
  const UniTri& r = x.rep();
  Int k = y.at(1, d);
  for (int i = 2; i < d; ++i) mpz_addmul(k.get_mpz_t(), y.at(1, i).get_mpz_t(), r.at(i, d).get_mpz_t());
  return k;
}

Complex psi(const Theta& theta, const UniTri& y, const QuotientElt& x) {
  return theta.character(psi_exponent(y, x));
}

SparseVec SparseVec::basis(const QuotientElt& x, Complex amplitude) {
  SparseVec v;
  v.add(x, amplitude);
  return v;
}

void SparseVec::add(const QuotientElt& key, Complex amplitude) {
  auto [it, inserted] = entries_.try_emplace(key, amplitude);
  if (!inserted) it->second += amplitude;
  if (std::abs(it->second) < kDropBelow) entries_.erase(it);
}

Complex SparseVec::get(const QuotientElt& key) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? Complex{} : it->second;
}

void SparseVec::scale(Complex s) {
  for (auto& [key, amp] : entries_) amp *= s;
  prune();
}

void SparseVec::prune() {
  std::erase_if(entries_, [](const auto& kv) { return std::abs(kv.second) < kDropBelow; });
}

double SparseVec::norm() const {
  double s = 0.0;
  for (const auto& [key, amp] : entries_) s += std::norm(amp);
  return std::sqrt(s);
}

Complex inner(const SparseVec& v, const SparseVec& w) {
  const auto& small = v.size() <= w.size() ? v : w;
  Complex s{};
  for (const auto& [key, amp] : small.entries()) s += std::conj(v.get(key)) * w.get(key);
  return s;
}

SparseVec operator+(const SparseVec& a, const SparseVec& b) {
  SparseVec r = a;
  for (const auto& [key, amp] : b.entries()) r.add(key, amp);
  return r;
}

SparseVec operator-(const SparseVec& a, const SparseVec& b) {
  SparseVec r = a;
  for (const auto& [key, amp] : b.entries()) r.add(key, -amp);
  return r;
}

const char* to_string(OpKind kind) {
  switch (kind) {
    case OpKind::lambda:
      return "lambda";
    case OpKind::diagonal:
      return "D";
    case OpKind::twisted:
      return "twisted";
  }
  return "?";
}

TwistedOp::TwistedOp(UniTri y, OpKind kind)
    : y_(std::move(y)), y_inv_image_(inv(y_)), image_(y_), kind_(kind) {}

BasisImage TwistedOp::on_basis(const Theta& theta, const QuotientElt& x) const {
  switch (kind_) {
    case OpKind::lambda:
      return {quotient_mul(image_, x), 1.0};
    case OpKind::diagonal:
      return {x, psi(theta, y_, x)};
    case OpKind::twisted:
      return {quotient_mul(image_, x), psi(theta, y_, x)};
  }
  throw InvariantViolation("unknown operator kind");
}

BasisImage TwistedOp::adjoint_on_basis(const Theta& theta, const QuotientElt& x) const {
  // T delta_w = c delta_x with w = y^-1 x, hence T* delta_x = conj(c) delta_w
  switch (kind_) {
    case OpKind::lambda:
      return {quotient_mul(y_inv_image_, x), 1.0};
    case OpKind::diagonal:
      return {x, std::conj(psi(theta, y_, x))};
    case OpKind::twisted: {
      QuotientElt w = quotient_mul(y_inv_image_, x);
      Complex c = std::conj(psi(theta, y_, w));
      return {std::move(w), c};
    }
  }
  throw InvariantViolation("unknown operator kind");
}

SparseVec apply(const TwistedOp& op, const Theta& theta, const SparseVec& v) {
  SparseVec out;
  for (const auto& [key, amp] : v.entries()) {
    if (key.dim() != op.dim()) throw ConfigError("dimension mismatch applying operator");
    auto img = op.on_basis(theta, key);
    out.add(img.target, img.phase * amp);
  }
  return out;
}

SparseVec apply_adjoint(const TwistedOp& op, const Theta& theta, const SparseVec& v) {
  SparseVec out;
  for (const auto& [key, amp] : v.entries()) {
    if (key.dim() != op.dim()) throw ConfigError("dimension mismatch applying operator");
    auto img = op.adjoint_on_basis(theta, key);
    out.add(img.target, img.phase * amp);
  }
  return out;
}

SparseVec apply_twisted(const Theta& theta, const UniTri& y, const SparseVec& v) {
  return apply(TwistedOp(y, OpKind::twisted), theta, v);
}

SparseVec apply_D(const Theta& theta, const UniTri& y, const SparseVec& v) {
  return apply(TwistedOp(y, OpKind::diagonal), theta, v);
}

SparseVec apply_lambda(const UniTri& y, const SparseVec& v) {
  // lambda never reads theta; any valid value will do
  static const Theta unused(ThetaSpec::rational(0, 1));
  return apply(TwistedOp(y, OpKind::lambda), unused, v);
}

}  // namespace qdcert
