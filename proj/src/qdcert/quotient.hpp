#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qdcert/unitriangular.hpp"

namespace qdcert {

QuotientElt quotient_mul(const QuotientElt& x, const QuotientElt& y);
QuotientElt quotient_inv(const QuotientElt& x);
// Image of a group element in G/Z.
inline QuotientElt project(const UniTri& a) { return QuotientElt(a); }

// Box of coset representatives K_n of (G/Z)/L_n:
//   [-(n-1)/2, (n-1)/2] for odd n, [-n/2+1, n/2] for even n.
BoxSpec kn_spec(std::int64_t n, int d);

// The unique y in K_n with x L_n = y L_n (centered residues entrywise).
QuotientElt reduce_to_Kn(const QuotientElt& x, std::int64_t n);

// Position of an element of K_n in the lexicographic enumeration of kn_spec.
std::uint64_t kn_index(const QuotientElt& y, const BoxSpec& kn);

/// A Følner set F_n = pi(G[-m,m]) chosen inside K_n, together with the
/// box data it was verified against.
struct FolnerData {
  int d = 0;
  std::int64_t n = 0;
  BoxSpec kn;
  std::int64_t m = 0;
  std::vector<QuotientElt> fn_elements;
  bool verified = false;

  std::uint64_t size_kn() const noexcept { return kn.count(); }
  std::size_t size_fn() const noexcept { return fn_elements.size(); }
};

// F_n is contained in K_n.
bool check_folner_inside_kn(const FolnerData& fd);
// The C-representative of every inverse f^-1 has all entries
// bounded by n^(1/4) in absolute value.
bool check_inverse_bound(const FolnerData& fd);

// Largest m, starting from ceil(n^(1/(4(d-1)))), for which G[-m,m] passes
// both checks above by direct enumeration.
FolnerData build_folner(std::int64_t n, int d, std::uint64_t cap = kDefaultEnumCap);

struct ExactRatio {
  std::uint64_t num = 0;
  std::uint64_t den = 1;
  double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
};

// |F delta Fx| / |F|, counted exactly.
ExactRatio folner_ratio_exact(const std::vector<QuotientElt>& F, const QuotientElt& x);
double folner_ratio(const std::vector<QuotientElt>& F, const QuotientElt& x);

}  // namespace qdcert
