#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace qdcert {

using Int = mpz_class;

/// Element of the unitriangular group U_d <= GL_d(Z).
///
/// Only the strictly-upper entries are stored, row-major:
/// (1,2), (1,3), ..., (1,d), (2,3), ..., (d-1,d). Indices are 1-based to
/// match the usual matrix-coefficient notation x_ij.
class UniTri {
 public:
  explicit UniTri(int d);

  static UniTri identity(int d) { return UniTri(d); }
  // 1 + v * e_ij
  static UniTri elementary(int d, int i, int j, const Int& v = 1);

  int dim() const noexcept { return d_; }
  std::size_t free_count() const noexcept { return e_.size(); }

  const Int& at(int i, int j) const { return e_[slot(i, j)]; }
  Int& at(int i, int j) { return e_[slot(i, j)]; }
  // Full matrix coefficient, including the implicit diagonal and lower zeros.
  Int coeff(int i, int j) const;

  std::span<const Int> upper() const noexcept { return e_; }
  std::span<Int> upper() noexcept { return e_; }

  bool is_identity() const;
  // max |x_ij| over strictly-upper entries
  Int max_abs_entry() const;

  friend bool operator==(const UniTri& a, const UniTri& b);

  std::size_t slot(int i, int j) const;

 private:
  int d_;
  std::vector<Int> e_;
};

UniTri mul(const UniTri& a, const UniTri& b);
UniTri inv(const UniTri& a);
UniTri operator*(const UniTri& a, const UniTri& b);

// Ring combination x - y + 1, which stays inside U_d.
UniTri ring_shift(const UniTri& x, const UniTri& y);

/// Element 1 + k e_1d of the center Z_d.
struct CentralElt {
  Int k;
  UniTri as_unitri(int d) const;
  friend bool operator==(const CentralElt&, const CentralElt&) = default;
};

bool is_central(const UniTri& a);

// Every strictly-upper entry lies in nZ.
bool in_Ln(const UniTri& a, const Int& n);

std::size_t hash_value(const UniTri& a) noexcept;

/// Canonical representative in C = {x : x_1d = 0} of a coset of Z in G.
class QuotientElt {
 public:
  explicit QuotientElt(int d) : rep_(d) {}
  // Projects onto C by discarding the (1,d) entry.
  explicit QuotientElt(UniTri a);

  static QuotientElt identity(int d) { return QuotientElt(d); }

  const UniTri& rep() const noexcept { return rep_; }
  int dim() const noexcept { return rep_.dim(); }

  friend bool operator==(const QuotientElt& a, const QuotientElt& b) {
    return a.rep_ == b.rep_;
  }

 private:
  UniTri rep_;
};

struct QuotientHash {
  std::size_t operator()(const QuotientElt& x) const noexcept {
    return hash_value(x.rep());
  }
};

// a = a' (1 + k e_1d) with a' in C and k = a_1d.
std::pair<QuotientElt, CentralElt> coset_rep(const UniTri& a);

/// G[lo,hi]: elements of C whose strictly-upper entries all lie in [lo,hi].
struct BoxSpec {
  int d = 0;
  std::int64_t lo = 0;
  std::int64_t hi = 0;

  std::int64_t width() const noexcept { return hi - lo + 1; }
  // Number of free positions, d(d-1)/2 - 1.
  std::size_t free_positions() const noexcept;
  // width^free_positions, or nullopt-like saturation at UINT64_MAX.
  std::uint64_t count() const noexcept;
  bool contains(const QuotientElt& x) const;
};

inline constexpr std::uint64_t kDefaultEnumCap = 10'000'000;

// Visits G[lo,hi] in lexicographic row-major order. Throws CapExceeded when
// the box holds more than `cap` elements.
void for_each_in_box(const BoxSpec& spec,
                     const std::function<void(const QuotientElt&)>& visit,
                     std::uint64_t cap = kDefaultEnumCap);
std::vector<QuotientElt> enumerate_box(const BoxSpec& spec,
                                       std::uint64_t cap = kDefaultEnumCap);

// Compact human-readable form, e.g. "1+e12-2e23".
std::string to_string(const UniTri& a);

}  // namespace qdcert
