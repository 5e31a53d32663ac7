#pragma once

#include <complex>
#include <cstddef>
#include <unordered_map>

#include "qdcert/diophantine.hpp"
#include "qdcert/quotient.hpp"

namespace qdcert {

using Complex = std::complex<double>;

/// The character phi_theta of U_d: e^{2 pi i theta k} on 1 + k e_1d, zero
/// off the center.
class CentralCharacter {
 public:
  explicit CentralCharacter(Theta theta) : theta_(std::move(theta)) {}
  const Theta& theta() const noexcept { return theta_; }
  Complex operator()(const UniTri& x) const;

 private:
  Theta theta_;
};

// k = sum_{i=2}^{d} y_1i x_id with x_dd = 1; equals (y x)_1d for x in C.
Int psi_exponent(const UniTri& y, const QuotientElt& x);
// psi_y(x) = e^{2 pi i theta k}
Complex psi(const Theta& theta, const UniTri& y, const QuotientElt& x);

/// Finitely supported vector in l^2(G/Z), keyed by canonical representatives.
class SparseVec {
 public:
  using Map = std::unordered_map<QuotientElt, Complex, QuotientHash>;
  static constexpr double kDropBelow = 1e-300;

  SparseVec() = default;
  static SparseVec basis(const QuotientElt& x, Complex amplitude = 1.0);

  void add(const QuotientElt& key, Complex amplitude);
  Complex get(const QuotientElt& key) const;
  void scale(Complex s);
  // Removes amplitudes below kDropBelow.
  void prune();

  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  const Map& entries() const noexcept { return entries_; }
  double norm() const;

 private:
  Map entries_;
};

// sum_k conj(v_k) w_k
Complex inner(const SparseVec& v, const SparseVec& w);
SparseVec operator+(const SparseVec& a, const SparseVec& b);
SparseVec operator-(const SparseVec& a, const SparseVec& b);

enum class OpKind { lambda, diagonal, twisted };
const char* to_string(OpKind kind);

struct BasisImage {
  QuotientElt target;
  Complex phase;
};

/// One of lambda_{G/Z}(y), D_y, or the twisted product lambda_{G/Z}(y) D_y,
/// which is the GNS operator pi_phi(y) transported to l^2(G/Z).
class TwistedOp {
 public:
  explicit TwistedOp(UniTri y, OpKind kind = OpKind::twisted);

  const UniTri& element() const noexcept { return y_; }
  const QuotientElt& image() const noexcept { return image_; }
  OpKind kind() const noexcept { return kind_; }
  int dim() const noexcept { return y_.dim(); }

  BasisImage on_basis(const Theta& theta, const QuotientElt& x) const;
  BasisImage adjoint_on_basis(const Theta& theta, const QuotientElt& x) const;

 private:
  UniTri y_;
  QuotientElt y_inv_image_;
  QuotientElt image_;
  OpKind kind_;
};

SparseVec apply(const TwistedOp& op, const Theta& theta, const SparseVec& v);
SparseVec apply_adjoint(const TwistedOp& op, const Theta& theta, const SparseVec& v);

// delta_x -> psi_y(x) delta_{yx}
SparseVec apply_twisted(const Theta& theta, const UniTri& y, const SparseVec& v);
// delta_x -> psi_y(x) delta_x
SparseVec apply_D(const Theta& theta, const UniTri& y, const SparseVec& v);
// delta_x -> delta_{yx}
SparseVec apply_lambda(const UniTri& y, const SparseVec& v);

}  // namespace qdcert
