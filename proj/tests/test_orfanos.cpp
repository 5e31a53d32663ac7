#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "qdcert/checks.hpp"
#include "qdcert/errors.hpp"
#include "qdcert/orfanos.hpp"
#include "oracles.hpp"

using namespace qdcert;

namespace {

UniTri e(int d, int i, int j, long v = 1) { return UniTri::elementary(d, i, j, v); }

std::vector<UniTri> golden_gens() {
  return {e(3, 1, 2, 1), e(3, 1, 2, -1), e(3, 2, 3, 1), e(3, 2, 3, -1)};
}

ProjectionBasis projection(long n, int d) { return build_projection(build_weights(build_folner(n, d))); }

double fib_delta(const Theta& theta, long n) {
  return 2 * std::sin(std::numbers::pi * theta.dist_to_Z(n));
}

}  // namespace

TEST_CASE("weights match direct counting") {
  for (long n : {5L, 13L, 34L}) {
    const FolnerData fd = build_folner(n, 3);
    const OrfanosWeights w = build_weights(fd);
    const BoxSpec kn = fd.kn;
    std::size_t support = 0;
    for (const auto& alpha : enumerate_box(BoxSpec{3, kn.lo - fd.m - 2, kn.hi + fd.m + 2})) {
      std::size_t count = 0;
      for (const auto& f : fd.fn_elements) count += kn.contains(quotient_mul(f, alpha));
      support += count > 0;
      CHECK(w.weight(alpha) == doctest::Approx(std::sqrt(double(count) / double(fd.size_fn()))).epsilon(1e-15));
    }
    CHECK(w.support.size() == support);
  }
}

TEST_CASE("weight examples") {
  const OrfanosWeights w = build_weights(build_folner(13, 3));
  CHECK(w.weight(QuotientElt::identity(3)) == 1.0);
  CHECK(w.weight(QuotientElt(e(3, 1, 2, 40))) == 0.0);

  const OrfanosWeights single = build_weights(build_folner(5, 4));
  CHECK(single.fn_size == 1);
  CHECK(single.support.size() == 3125);
  for (std::size_t i = 0; i < single.support.size(); i += 97) CHECK(single.weight_at(i) == 1.0);
  CHECK(single.weight(QuotientElt(e(4, 3, 4, 3))) == 0.0);

  FolnerData unverified = build_folner(5, 3);
  unverified.verified = false;
  CHECK_THROWS_AS(build_weights(unverified), InvariantViolation);
  CHECK_THROWS_AS(build_weights(build_folner(34, 3), 1000), CapExceeded);
}

TEST_CASE("projection family is orthonormal with the right rank") {
  for (auto [n, d] : {std::pair{5L, 3}, {13L, 3}, {34L, 3}, {2L, 4}, {4L, 4}, {5L, 4}}) {
    CAPTURE(n);
    CAPTURE(d);
    const ProjectionBasis P = projection(n, d);
    CHECK(P.rank() == static_cast<std::size_t>(std::llround(std::pow(n, d * (d - 1) / 2 - 1))));
    CHECK(gram_deviation(P) <= 1e-12);
    CHECK(idempotence_defect(P, 30, 10) <= 1e-12);
    CHECK(selfadjoint_defect(P, 31, 10) <= 1e-12);
  }
  const ProjectionBasis P = projection(5, 3);
  double total = 0.0;
  for (std::size_t y = 0; y < P.rank(); ++y) {
    const double norm = P.vector(y).norm();
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));
    total += norm * norm;
  }
  CHECK(total == doctest::Approx(25.0).epsilon(1e-12));
}

TEST_CASE("single-point Folner sets give coordinate projections") {
  const ProjectionBasis P = projection(5, 4);
  for (std::size_t y = 0; y < P.rank(); y += 111) {
    const SparseVec v = P.vector(y);
    REQUIRE(v.size() == 1);
    CHECK(v.get(P.reps[y]) == Complex(1.0));
  }
}

TEST_CASE("corrupted weights break orthonormality") {
  ProjectionBasis P = projection(13, 3);
  REQUIRE(gram_deviation(P) <= 1e-12);
  P.weights[P.members[7][0]] *= 1.001;
  CHECK(gram_deviation(P) > 1e-6);
}

TEST_CASE("apply_P") {
  const ProjectionBasis P = projection(13, 3);
  for (std::size_t y = 0; y < P.rank(); y += 17) {
    const SparseVec xi = P.vector(y);
    CHECK((apply_P(P, xi) - xi).norm() < 1e-13);
  }
  CHECK(apply_P(P, SparseVec::basis(QuotientElt(e(3, 2, 3, 50)))).norm() == 0.0);
  CHECK(pointwise_defect(P, QuotientElt::identity(3)) < 1e-12);
}

TEST_CASE("pointwise defects") {
  for (long n : {5L, 13L, 34L, 89L}) {
    const ProjectionBasis P = projection(n, 3);
    CHECK(pointwise_defect(P, QuotientElt(e(3, 1, 2))) < 1e-12);
    CHECK(std::abs(pointwise_defect(P, QuotientElt(e(3, 1, 2, 4 * n + 3))) - 1.0) < 1e-12);
  }
  // a boundary point with weight strictly between 0 and 1
  const ProjectionBasis P = projection(5, 3);
  const QuotientElt edge(e(3, 1, 2, 3));
  const double w = P.weight(edge);
  CHECK(w > 0.0);
  CHECK(w < 1.0);
  CHECK(pointwise_defect(P, edge) == doctest::Approx(std::sqrt(1 - w * w)).epsilon(1e-12));
}

TEST_CASE("discrepancy") {
  const Theta g(ThetaSpec::golden());
  const ProjectionBasis P = projection(34, 3);
  CHECK(max_discrepancy({UniTri::identity(3)}, P, g).value == 0.0);
  CHECK(max_discrepancy({e(3, 1, 3, 4)}, P, g).value < 1e-12);

  for (long n : {5L, 13L, 34L, 89L}) {
    const FolnerData fd = build_folner(n, 3);
    const Discrepancy D = max_discrepancy(golden_gens(), fd, g);
    CHECK(D.value == doctest::Approx(fib_delta(g, n)).epsilon(1e-12));
    CHECK(D.value <= analytic_bound(3, n));
    const ProjectionBasis Pn = build_projection(build_weights(fd));
    CHECK(point_discrepancy(golden_gens()[D.generator], Pn, D.point, g) == D.value);
  }
}

TEST_CASE("per-vector diagonal bound and the factor two") {
  const Theta g(ThetaSpec::golden());
  for (auto [n, d] : {std::pair{5L, 3}, {13L, 3}, {34L, 3}, {5L, 4}}) {
    const ProjectionBasis P = projection(n, d);
    std::vector<UniTri> gens;
    for (int i = 1; i < d; ++i) gens.push_back(e(d, i, i + 1));
    gens.push_back(e(d, 1, d - 1, -2));
    const double delta = max_discrepancy(gens, P, g).value;
    for (const auto& z : gens) {
      for (std::size_t y = 0; y < P.rank(); ++y) CHECK(diagonal_vector_defect(z, P, y, g) <= delta + 1e-15);
      CHECK(commutator_norm(TwistedOp(z, OpKind::diagonal), P, g).value <= 2 * delta + 1e-9);
    }
  }
}

TEST_CASE("trivial commutators") {
  const Theta g(ThetaSpec::golden());
  const Theta zero(ThetaSpec::rational(0, 1));
  const ProjectionBasis P = projection(13, 3);
  for (OpKind kind : {OpKind::lambda, OpKind::diagonal, OpKind::twisted})
    CHECK(commutator_norm(TwistedOp(UniTri::identity(3), kind), P, g).value < 1e-12);
  CHECK(commutator_norm(TwistedOp(e(3, 1, 3, 5)), P, zero).value < 1e-12);
  CHECK(commutator_norm(TwistedOp(e(3, 1, 2), OpKind::diagonal), P, zero).value < 1e-12);
  CHECK_THROWS_AS(commutator_norm(TwistedOp(e(4, 1, 2)), P, g), ConfigError);
}

TEST_CASE("power and dense norms agree") {
  const Theta g(ThetaSpec::golden());
  for (long n : {5L, 13L}) {
    const ProjectionBasis P = projection(n, 3);
    for (const auto& z : golden_gens())
      for (OpKind kind : {OpKind::lambda, OpKind::diagonal, OpKind::twisted}) {
        const TwistedOp T(z, kind);
        NormOptions opt;
        const NormResult pw = commutator_norm(T, P, g, opt);
        opt.method = NormMethod::dense;
        const NormResult de = commutator_norm(T, P, g, opt);
        CHECK(pw.converged);
        CHECK(std::abs(pw.value - de.value) <= 1e-6);
        CHECK(pw.dimension == de.dimension);
      }
  }
  NormOptions tight;
  tight.method = NormMethod::dense;
  tight.dense_cap = 10;
  CHECK_THROWS_AS(commutator_norm(TwistedOp(e(3, 1, 2)), projection(5, 3), g, tight), CapExceeded);
}

TEST_CASE("power norms match the coset formula") {
  const Theta g(ThetaSpec::golden());
  for (auto [n, d] : {std::pair{5L, 3}, {34L, 3}, {89L, 3}, {5L, 4}}) {
    const ProjectionBasis P = projection(n, d);
    std::mt19937_64 rng(32);
    for (int t = 0; t < 3; ++t) {
      const UniTri z = random_unitri(d, 2, rng);
      for (OpKind kind : {OpKind::lambda, OpKind::diagonal, OpKind::twisted}) {
        const TwistedOp T(z, kind);
        const double a = commutator_norm(T, P, g).value;
        CHECK(std::abs(a * a - oracle::coset_formula_sq(T, P, g)) <= 1e-12);
      }
    }
  }
}

TEST_CASE("lambda commutator of a Folner box") {
  // Weights factor over the two coordinates and 1+e12 only shifts x12. The
  // smallest overlap is at the coset whose second support point has count
  // zero: xi_y is a point mass there and its translate overlaps
  // xi_{y+1} by sqrt(2m/(2m+1)), so the norm is 1/sqrt(2m+1).
  const Theta g(ThetaSpec::golden());
  for (auto [n, m] : {std::pair{5L, 1L}, {34L, 2L}}) {
    const ProjectionBasis P = projection(n, 3);
    CHECK(commutator_norm(TwistedOp(e(3, 1, 2), OpKind::lambda), P, g).value ==
          doctest::Approx(1.0 / std::sqrt(2.0 * m + 1)).epsilon(1e-12));
  }
}

TEST_CASE("norms do not depend on the thread count") {
  const Theta g(ThetaSpec::golden());
  const ProjectionBasis P = projection(34, 3);
  const TwistedOp T(e(3, 1, 2));
  setenv("QDCERT_THREADS", "1", 1);
  const double one = commutator_norm(T, P, g).value;
  setenv("QDCERT_THREADS", "3", 1);
  const double three = commutator_norm(T, P, g).value;
  unsetenv("QDCERT_THREADS");
  CHECK(one == three);
}
