#include "qdcert/unitriangular.hpp"

#include <limits>
#include <sstream>

#include "qdcert/errors.hpp"

namespace qdcert {

UniTri::UniTri(int d) : d_(d) {
  if (d < 2) throw ConfigError("unitriangular dimension must be >= 2");
  e_.resize(static_cast<std::size_t>(d) * (d - 1) / 2);
}

UniTri UniTri::elementary(int d, int i, int j, const Int& v) {
  UniTri a(d);
  a.at(i, j) = v;
  return a;
}

std::size_t UniTri::slot(int i, int j) const {
  if (i < 1 || j > d_ || i >= j)
    throw std::out_of_range("unitriangular index (" + std::to_string(i) + "," +
                            std::to_string(j) + ") is not strictly upper");
  const auto row_offset = static_cast<std::size_t>((i - 1) * (2 * d_ - i) / 2);
  return row_offset + static_cast<std::size_t>(j - i - 1);
}

Int UniTri::coeff(int i, int j) const {
  if (i == j) return 1;
  if (i > j) return 0;
  return at(i, j);
}

bool UniTri::is_identity() const {
  for (const auto& v : e_)
    if (sgn(v) != 0) return false;
  return true;
}

Int UniTri::max_abs_entry() const {
  Int best = 0;
  for (const auto& v : e_)
    if (mpz_cmpabs(v.get_mpz_t(), best.get_mpz_t()) > 0) best = abs(v);
  return best;
}

bool operator==(const UniTri& a, const UniTri& b) {
  if (a.d_ != b.d_) return false;
  for (std::size_t k = 0; k < a.e_.size(); ++k)
    if (cmp(a.e_[k], b.e_[k]) != 0) return false;
  return true;
}

UniTri mul(const UniTri& a, const UniTri& b) {
  if (a.dim() != b.dim())
    throw ConfigError("dimension mismatch in unitriangular product");
  const int d = a.dim();
  UniTri c(d);
  Int acc;
  for (int i = 1; i < d; ++i) {
    for (int j = i + 1; j <= d; ++j) {
      acc = a.at(i, j);
      acc += b.at(i, j);
      for (int k = i + 1; k < j; ++k) mpz_addmul(acc.get_mpz_t(), a.at(i, k).get_mpz_t(), b.at(k, j).get_mpz_t());
      c.at(i, j) = acc;
    }
  }
  return c;
}

UniTri operator*(const UniTri& a, const UniTri& b) { return mul(a, b); }

UniTri inv(const UniTri& a) {
  // a x = 1 gives x_ij = -a_ij - sum_{i<k<j} a_ik x_kj; rows are solved bottom-up.
  const int d = a.dim();
  UniTri x(d);
  Int acc;
  for (int i = d - 1; i >= 1; --i) {
    for (int j = i + 1; j <= d; ++j) {
      acc = a.at(i, j);
      for (int k = i + 1; k < j; ++k) mpz_addmul(acc.get_mpz_t(), a.at(i, k).get_mpz_t(), x.at(k, j).get_mpz_t());
      x.at(i, j) = -acc;
    }
  }
  return x;
}

UniTri ring_shift(const UniTri& x, const UniTri& y) {
  if (x.dim() != y.dim()) throw ConfigError("dimension mismatch in x - y + 1");
  UniTri r(x.dim());
  auto rx = x.upper();
  auto ry = y.upper();
  auto out = r.upper();
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = rx[k] - ry[k];
  return r;
}

UniTri CentralElt::as_unitri(int d) const { return UniTri::elementary(d, 1, d, k); }

bool is_central(const UniTri& a) {
  const int d = a.dim();
  for (int i = 1; i < d; ++i)
    for (int j = i + 1; j <= d; ++j)
      if (!(i == 1 && j == d) && sgn(a.at(i, j)) != 0) return false;
  return true;
}

bool in_Ln(const UniTri& a, const Int& n) {
  if (sgn(n) <= 0) throw ConfigError("in_Ln requires n >= 1");
  for (const auto& v : a.upper())
    if (!mpz_divisible_p(v.get_mpz_t(), n.get_mpz_t())) return false;
  return true;
}

std::size_t hash_value(const UniTri& a) noexcept {
  std::size_t h = static_cast<std::size_t>(a.dim()) * 0x9e3779b97f4a7c15ULL;
  for (const auto& v : a.upper()) {
    std::size_t x;
    if (mpz_fits_slong_p(v.get_mpz_t())) {
      x = static_cast<std::size_t>(mpz_get_si(v.get_mpz_t()));
    } else {
      x = static_cast<std::size_t>(mpz_get_ui(v.get_mpz_t())) ^
          (static_cast<std::size_t>(mpz_sizeinbase(v.get_mpz_t(), 2)) << 32) ^
          static_cast<std::size_t>(sgn(v));
    }
    h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

std::string to_string(const UniTri& a) {
  std::ostringstream os;
  os << '1';
  const int d = a.dim();
  for (int i = 1; i < d; ++i) {
    for (int j = i + 1; j <= d; ++j) {
      const Int& v = a.at(i, j);
      if (sgn(v) == 0) continue;
      os << (sgn(v) > 0 ? '+' : '-');
      if (mpz_cmpabs_ui(v.get_mpz_t(), 1) != 0) os << Int(abs(v)).get_str();
      os << 'e' << i << j;
      if (d > 9) os << ' ';
    }
  }
  return os.str();
}

QuotientElt::QuotientElt(UniTri a) : rep_(std::move(a)) {
  rep_.at(1, rep_.dim()) = 0;
}

std::pair<QuotientElt, CentralElt> coset_rep(const UniTri& a) {
  // a (1 - a_1d e_1d) only changes the (1,d) entry, because column 1 of a is e_1.
  CentralElt k{a.at(1, a.dim())};
  return {QuotientElt(a), std::move(k)};
}

std::size_t BoxSpec::free_positions() const noexcept {
  return static_cast<std::size_t>(d) * (d - 1) / 2 - 1;
}

std::uint64_t BoxSpec::count() const noexcept {
  if (width() <= 0) return 0;
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  const auto w = static_cast<std::uint64_t>(width());
  std::uint64_t total = 1;
  for (std::size_t k = 0; k < free_positions(); ++k) {
    if (total > kMax / w) return kMax;
    total *= w;
  }
  return total;
}

bool BoxSpec::contains(const QuotientElt& x) const {
  if (x.dim() != d) return false;
  const auto skip = x.rep().slot(1, d);
  auto e = x.rep().upper();
  for (std::size_t k = 0; k < e.size(); ++k) {
    if (k == skip) continue;
    if (cmp(e[k], lo) < 0 || cmp(e[k], hi) > 0) return false;
  }
  return true;
}

void for_each_in_box(const BoxSpec& spec,
                     const std::function<void(const QuotientElt&)>& visit,
                     std::uint64_t cap) {
  if (spec.d < 2) throw ConfigError("box dimension must be >= 2");
  if (spec.lo > spec.hi) throw ConfigError("box requires lo <= hi");
  const auto total = spec.count();
  if (total > cap)
    throw CapExceeded("box G[" + std::to_string(spec.lo) + "," + std::to_string(spec.hi) +
                      "] in dimension " + std::to_string(spec.d) + " has more than " +
                      std::to_string(cap) + " elements");

  UniTri cur(spec.d);
  std::vector<std::size_t> slots;
  for (int i = 1; i < spec.d; ++i)
    for (int j = i + 1; j <= spec.d; ++j)
      if (!(i == 1 && j == spec.d)) slots.push_back(cur.slot(i, j));
  auto e = cur.upper();
  for (auto s : slots) e[s] = spec.lo;

  for (std::uint64_t visited = 0; visited < total; ++visited) {
    visit(QuotientElt(cur));
    // odometer, last slot fastest
    for (auto it = slots.rbegin(); it != slots.rend(); ++it) {
      if (cmp(e[*it], spec.hi) < 0) {
        ++e[*it];
        break;
      }
      e[*it] = spec.lo;
    }
  }
}

std::vector<QuotientElt> enumerate_box(const BoxSpec& spec, std::uint64_t cap) {
  std::vector<QuotientElt> out;
  out.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(spec.count(), cap)));
  for_each_in_box(spec, [&](const QuotientElt& x) { out.push_back(x); }, cap);
  return out;
}

}  // namespace qdcert
