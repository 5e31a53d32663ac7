#include "qdcert/quotient.hpp"

#include <unordered_set>

#include "qdcert/errors.hpp"

namespace qdcert {

QuotientElt quotient_mul(const QuotientElt& x, const QuotientElt& y) {
  return QuotientElt(mul(x.rep(), y.rep()));
}

QuotientElt quotient_inv(const QuotientElt& x) { return QuotientElt(inv(x.rep())); }

BoxSpec kn_spec(std::int64_t n, int d) {
  if (n < 2) throw ConfigError("K_n requires n >= 2");
  if (n % 2 == 1) return BoxSpec{d, -(n - 1) / 2, (n - 1) / 2};
  return BoxSpec{d, -n / 2 + 1, n / 2};
}

QuotientElt reduce_to_Kn(const QuotientElt& x, std::int64_t n) {
  const BoxSpec kn = kn_spec(n, x.dim());
  UniTri y = x.rep();
  const Int modulus = n;
  Int r;
  for (auto& v : y.upper()) {
    r = v - kn.lo;
    mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), modulus.get_mpz_t());
    v = r + kn.lo;
  }
  return QuotientElt(std::move(y));
}

std::uint64_t kn_index(const QuotientElt& y, const BoxSpec& kn) {
  const auto skip = y.rep().slot(1, y.dim());
  const auto w = static_cast<std::uint64_t>(kn.width());
  std::uint64_t idx = 0;
  auto e = y.rep().upper();
  for (std::size_t k = 0; k < e.size(); ++k) {
    if (k == skip) continue;
    if (cmp(e[k], kn.lo) < 0 || cmp(e[k], kn.hi) > 0)
      throw InvariantViolation("element " + to_string(y.rep()) + " is not in K_n");
    idx = idx * w + static_cast<std::uint64_t>(mpz_get_si(e[k].get_mpz_t()) - kn.lo);
  }
  return idx;
}

bool check_folner_inside_kn(const FolnerData& fd) {
  for (const auto& f : fd.fn_elements)
    if (!fd.kn.contains(f)) return false;
  return true;
}

bool check_inverse_bound(const FolnerData& fd) {
  const Int n = fd.n;
  Int fourth;
  for (const auto& f : fd.fn_elements) {
    const QuotientElt finv = quotient_inv(f);
    for (const auto& v : finv.rep().upper()) {
      mpz_pow_ui(fourth.get_mpz_t(), v.get_mpz_t(), 4);
      if (fourth > n) return false;
    }
  }
  return true;
}

namespace {

std::int64_t folner_start_radius(std::int64_t n, int d) {
  const auto exponent = static_cast<unsigned long>(4 * (d - 1));
  const Int target = n;
  Int power;
  std::int64_t m = 0;
  do {
    ++m;
    mpz_ui_pow_ui(power.get_mpz_t(), static_cast<unsigned long>(m), exponent);
  } while (power < target);
  return m;
}

}  // namespace

FolnerData build_folner(std::int64_t n, int d, std::uint64_t cap) {
  FolnerData fd;
  fd.d = d;
  fd.n = n;
  fd.kn = kn_spec(n, d);
  for (std::int64_t m = folner_start_radius(n, d); m >= 0; --m) {
    fd.m = m;
    fd.fn_elements = enumerate_box(BoxSpec{d, -m, m}, cap);
    if (check_folner_inside_kn(fd) && check_inverse_bound(fd)) {
      fd.verified = true;
      return fd;
    }
  }
  throw InvariantViolation("no Folner radius m >= 0 satisfies the containment properties");
}

ExactRatio folner_ratio_exact(const std::vector<QuotientElt>& F, const QuotientElt& x) {
  if (F.empty()) throw ConfigError("Folner ratio of an empty set");
  std::unordered_set<QuotientElt, QuotientHash> members(F.begin(), F.end());
  if (members.size() != F.size()) throw ConfigError("Folner set contains duplicates");
  // right translation is injective, so |F delta Fx| = 2 |Fx \ F|
  std::uint64_t outside = 0;
  for (const auto& f : F)
    if (!members.contains(quotient_mul(f, x))) ++outside;
  return ExactRatio{2 * outside, F.size()};
}

double folner_ratio(const std::vector<QuotientElt>& F, const QuotientElt& x) {
  return folner_ratio_exact(F, x).value();
}

}  // namespace qdcert
