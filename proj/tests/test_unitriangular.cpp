#include <random>

#include "doctest.h"
#include "qdcert/checks.hpp"
#include "qdcert/errors.hpp"
#include "qdcert/quotient.hpp"

using namespace qdcert;

namespace {

UniTri e(int d, int i, int j, long v = 1) { return UniTri::elementary(d, i, j, v); }

UniTri from_entries(int d, std::initializer_list<std::tuple<int, int, long>> entries) {
  UniTri a(d);
  for (auto [i, j, v] : entries) a.at(i, j) = v;
  return a;
}

// Naive dense product over the full matrix, independent of the packed layout.
UniTri dense_mul(const UniTri& a, const UniTri& b) {
  const int d = a.dim();
  UniTri c(d);
  for (int i = 1; i <= d; ++i)
    for (int j = i + 1; j <= d; ++j) {
      Int s = 0;
      for (int k = 1; k <= d; ++k) s += a.coeff(i, k) * b.coeff(k, j);
      c.at(i, j) = s;
    }
  return c;
}

}  // namespace

TEST_CASE("hand-computed products") {
  const UniTri h = from_entries(3, {{1, 2, 1}, {2, 3, 1}, {1, 3, 1}});
  CHECK(mul(e(3, 1, 2), e(3, 2, 3)) == h);
  CHECK(mul(h, UniTri::identity(3)) == h);
  CHECK(mul(e(3, 1, 2), e(3, 1, 2, -1)).is_identity());
}

TEST_CASE("inverses") {
  CHECK(inv(e(3, 1, 2)) == e(3, 1, 2, -1));
  CHECK(inv(UniTri::identity(4)).is_identity());
  const UniTri h = from_entries(3, {{1, 2, 1}, {2, 3, 1}, {1, 3, 1}});
  CHECK(inv(h) == from_entries(3, {{1, 2, -1}, {2, 3, -1}}));
}

TEST_CASE("coset representatives") {
  auto [q1, k1] = coset_rep(e(3, 1, 3, 5));
  CHECK(q1.rep().is_identity());
  CHECK(k1.k == 5);

  auto [q2, k2] = coset_rep(e(3, 1, 2));
  CHECK(q2.rep() == e(3, 1, 2));
  CHECK(k2.k == 0);

  auto [q3, k3] = coset_rep(from_entries(3, {{1, 2, 1}, {2, 3, 1}, {1, 3, 1}}));
  CHECK(q3.rep() == from_entries(3, {{1, 2, 1}, {2, 3, 1}}));
  CHECK(k3.k == 1);
}

TEST_CASE("box enumeration") {
  CHECK(enumerate_box(BoxSpec{3, -2, 2}).size() == 25);
  const auto single = enumerate_box(BoxSpec{3, 0, 0});
  REQUIRE(single.size() == 1);
  CHECK(single[0].rep().is_identity());

  const auto d4 = enumerate_box(BoxSpec{4, -2, 2});
  CHECK(d4.size() == 3125);
  for (const auto& x : d4) CHECK(sgn(x.rep().at(1, 4)) == 0);

  // last slot varies fastest
  const auto small = enumerate_box(BoxSpec{3, 0, 1});
  REQUIRE(small.size() == 4);
  CHECK(small[1].rep() == e(3, 2, 3));
  CHECK(small[2].rep() == e(3, 1, 2));

  CHECK_THROWS_AS(enumerate_box(BoxSpec{4, -2, 2}, 3124), CapExceeded);
}

TEST_CASE("membership in L_n") {
  CHECK(in_Ln(UniTri::identity(3), 7));
  CHECK(in_Ln(e(3, 1, 2, 5), 5));
  CHECK_FALSE(in_Ln(e(3, 1, 2), 5));
}

TEST_CASE("string form") {
  CHECK(to_string(UniTri::identity(3)) == "1");
  CHECK(to_string(from_entries(3, {{1, 2, 1}, {2, 3, -2}})) == "1+e12-2e23");
}

TEST_CASE("product agrees with naive dense multiplication") {
  std::mt19937_64 rng(1);
  for (int d : {2, 3, 4, 6}) {
    for (int t = 0; t < 50; ++t) {
      const UniTri a = random_unitri(d, 1000, rng), b = random_unitri(d, 1000, rng);
      CHECK(mul(a, b) == dense_mul(a, b));
    }
  }
}

TEST_CASE("group laws on random samples") {
  std::mt19937_64 rng(2);
  for (int d : {3, 4, 5}) {
    for (int t = 0; t < 200; ++t) {
      const UniTri a = random_unitri(d, 1000, rng), b = random_unitri(d, 1000, rng),
                   c = random_unitri(d, 1000, rng);
      CHECK(mul(mul(a, b), c) == mul(a, mul(b, c)));
      CHECK(mul(a, inv(a)).is_identity());
      CHECK(mul(inv(a), a).is_identity());
      auto [q, k] = coset_rep(a);
      CHECK(mul(q.rep(), k.as_unitri(d)) == a);
      CHECK(is_central(k.as_unitri(d)));
    }
  }
}

TEST_CASE("L_n is closed under products and inverses") {
  std::mt19937_64 rng(3);
  for (long n : {2L, 5L, 12L}) {
    for (int t = 0; t < 100; ++t) {
      UniTri a = random_unitri(4, 30, rng), b = random_unitri(4, 30, rng);
      for (auto& v : a.upper()) v *= n;
      for (auto& v : b.upper()) v *= n;
      CHECK(in_Ln(mul(a, b), n));
      CHECK(in_Ln(inv(a), n));
    }
  }
}

TEST_CASE("ring shift of congruent lifts stays in L_n with bounded entries") {
  std::mt19937_64 rng(4);
  for (int d : {3, 4}) {
    for (long n : {5L, 13L, 34L}) {
      const FolnerData fd = build_folner(n, d);
      const BoxSpec kn = kn_spec(n, d);
      std::uniform_int_distribution<long> pick_k(kn.lo, kn.hi);
      std::uniform_int_distribution<std::size_t> pick_f(0, fd.fn_elements.size() - 1);
      const double bound = d * std::pow(static_cast<double>(n), 1.25);
      for (int t = 0; t < 200; ++t) {
        // alpha = f^-1 k with k in K_n, and y its representative
        UniTri k(d);
        for (auto& v : k.upper()) v = pick_k(rng);
        k.at(1, d) = 0;
        const QuotientElt alpha =
            quotient_mul(quotient_inv(fd.fn_elements[pick_f(rng)]), QuotientElt(k));
        const QuotientElt y = reduce_to_Kn(alpha, n);
        const UniTri shifted = ring_shift(alpha.rep(), y.rep());
        CHECK(in_Ln(shifted, n));
        CHECK(shifted.max_abs_entry().get_d() <= bound);
      }
    }
  }
}
