#include "qdcert/checks.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

#include "qdcert/errors.hpp"

namespace qdcert {

double gram_deviation(const ProjectionBasis& P) {
  std::unordered_map<QuotientElt, std::vector<std::pair<std::size_t, double>>, QuotientHash> owners;
  for (std::size_t y = 0; y < P.members.size(); ++y)
    for (auto i : P.members[y]) owners[P.points[i]].emplace_back(y, P.weights[i]);
  std::map<std::pair<std::size_t, std::size_t>, double> gram;
  for (const auto& [point, list] : owners)
    for (const auto& [a, wa] : list)
      for (const auto& [b, wb] : list) gram[{a, b}] += wa * wb;
  double worst = 0.0;
  for (std::size_t y = 0; y < P.rank(); ++y)
    if (!gram.contains({y, y})) worst = std::max(worst, 1.0);  // empty vector
  for (const auto& [ab, v] : gram)
    worst = std::max(worst, std::abs(v - (ab.first == ab.second ? 1.0 : 0.0)));
  return worst;
}

namespace {

SparseVec random_window_vector(const ProjectionBasis& P, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, P.support_size() - 1);
  std::normal_distribution<double> gauss;
  SparseVec v;
  const std::size_t terms = std::min<std::size_t>(P.support_size(), 32);
  for (std::size_t t = 0; t < terms; ++t) v.add(P.points[pick(rng)], Complex(gauss(rng), gauss(rng)));
  // one component outside the support
  v.add(QuotientElt(UniTri::elementary(P.d, 1, 2, 4 * P.n + 7)), Complex(gauss(rng), 0.0));
  return v;
}

}  // namespace

double idempotence_defect(const ProjectionBasis& P, std::uint64_t seed, int samples) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const SparseVec v = random_window_vector(P, rng);
    const SparseVec pv = apply_P(P, v);
    worst = std::max(worst, (apply_P(P, pv) - pv).norm() / v.norm());
  }
  return worst;
}

double selfadjoint_defect(const ProjectionBasis& P, std::uint64_t seed, int samples) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const SparseVec v = random_window_vector(P, rng);
    const SparseVec w = random_window_vector(P, rng);
    const Complex lhs = inner(w, apply_P(P, v));  // <Pv, w>
    const Complex rhs = inner(apply_P(P, w), v);  // <v, Pw>
    worst = std::max(worst, std::abs(lhs - rhs) / (v.norm() * w.norm()));
  }
  return worst;
}

UniTri random_unitri(int d, std::int64_t range, std::mt19937_64& rng) {
  std::uniform_int_distribution<long> entry(-range, range);
  UniTri a(d);
  for (auto& v : a.upper()) v = entry(rng);
  return a;
}

double multiplicativity_error(const Theta& theta, int d, int trials, std::uint64_t seed,
                              std::int64_t range) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const UniTri y1 = random_unitri(d, range, rng);
    const UniTri y2 = random_unitri(d, range, rng);
    const QuotientElt x(random_unitri(d, range, rng));
    const SparseVec v = SparseVec::basis(x);
    const SparseVec lhs = apply_twisted(theta, y1, apply_twisted(theta, y2, v));
    const SparseVec rhs = apply_twisted(theta, mul(y1, y2), v);
    const SparseVec diff = lhs - rhs;
    for (const auto& [key, amp] : diff.entries()) worst = std::max(worst, std::abs(amp));
  }
  return worst;
}

namespace {

struct Suite {
  std::vector<CheckResult> results;

  void run(const std::string& name, const std::function<std::string()>& body) {
    CheckResult r{name, false, ""};
    try {
      r.detail = body();
      r.passed = true;
    } catch (const std::exception& e) {
      r.detail = e.what();
    }
    results.push_back(std::move(r));
  }
};

void require(bool ok, const std::string& what) {
  if (!ok) throw InvariantViolation(what);
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

}  // namespace

std::vector<CheckResult> selftest() {
  Suite s;
  const Theta golden(ThetaSpec::golden());

  s.run("group laws (associativity, inverse, coset factorization)", [] {
    std::mt19937_64 rng(11);
    for (int d : {3, 4, 5}) {
      for (int t = 0; t < 200; ++t) {
        const UniTri a = random_unitri(d, 1000, rng), b = random_unitri(d, 1000, rng),
                     c = random_unitri(d, 1000, rng);
        require(mul(mul(a, b), c) == mul(a, mul(b, c)), "associativity");
        require(mul(a, inv(a)).is_identity(), "inverse law");
        auto [q, k] = coset_rep(a);
        require(mul(q.rep(), k.as_unitri(d)) == a, "coset factorization");
      }
    }
    return std::string("d in {3,4,5}, 200 triples each");
  });

  s.run("L_n closure and K_n reduction", [] {
    std::mt19937_64 rng(12);
    for (int d : {3, 4}) {
      for (std::int64_t n : {2, 4, 5, 13}) {
        const Int nn(static_cast<long>(n));
        for (int t = 0; t < 100; ++t) {
          UniTri a = random_unitri(d, 20, rng), b = random_unitri(d, 20, rng);
          for (auto& v : a.upper()) v *= nn;
          for (auto& v : b.upper()) v *= nn;
          require(in_Ln(mul(a, b), nn) && in_Ln(inv(a), nn), "L_n closure");
          const QuotientElt x(random_unitri(d, 1000, rng));
          const QuotientElt y = reduce_to_Kn(x, n);
          require(reduce_to_Kn(y, n) == y, "reduction idempotence");
          require(kn_spec(n, d).contains(y), "reduction lands in K_n");
          require(in_Ln(quotient_mul(quotient_inv(y), x).rep(), nn), "representative soundness");
        }
        require(enumerate_box(kn_spec(n, d)).size() == kn_spec(n, d).count(), "K_n count");
      }
    }
    return std::string("d in {3,4}, n in {2,4,5,13}");
  });

  s.run("Folner sets satisfy containment properties", [] {
    std::ostringstream os;
    for (int d : {3, 4})
      for (std::int64_t n : {2, 4, 5, 13, 81}) {
        const FolnerData fd = build_folner(n, d);
        require(fd.verified && check_folner_inside_kn(fd) && check_inverse_bound(fd),
                "containment and inverse bound for n=" + std::to_string(n));
        os << "d=" << d << ",n=" << n << ":m=" << fd.m << ' ';
      }
    return os.str();
  });

  s.run("Folner ratios decrease with the box radius", [] {
    const QuotientElt x(UniTri::elementary(3, 1, 2));
    double previous = 3.0;
    for (std::int64_t m = 1; m <= 8; ++m) {
      const double r = folner_ratio(enumerate_box(BoxSpec{3, -m, m}), x);
      require(r <= previous, "monotone decay at m=" + std::to_string(m));
      previous = r;
    }
    return std::string("m = 1..8");
  });

  s.run("continued fractions and n selection", [golden] {
    for (const auto& c : convergents(golden, 30))
      require(golden.approximation_below_reciprocal(c.p, c.q), "|q theta - p| < 1/q");
    require(select_n(golden, 1, 10.0, 3).n == 34, "select_n(golden, p=1, eps=10, d=3) = 34");
    const Theta third(ThetaSpec::rational(1, 3));
    require(third.dist_to_Z(3) == 0.0, "dist(3/3, Z) = 0");
    return std::string("30 convergents of (sqrt5-1)/2");
  });

  s.run("GNS operators form a unitary representation", [golden] {
    double worst = 0.0;
    for (int d : {3, 4}) worst = std::max(worst, multiplicativity_error(golden, d, 100, 13));
    require(worst <= 1e-10, "multiplicativity error " + fmt(worst));
    std::mt19937_64 rng(14);
    for (int t = 0; t < 100; ++t) {
      const UniTri y = random_unitri(4, 50, rng);
      const QuotientElt x(random_unitri(4, 50, rng));
      require(std::abs(std::abs(psi(golden, y, x)) - 1.0) <= 1e-14, "unimodular psi");
      const CentralElt k{Int(static_cast<long>(t - 50))};
      const SparseVec v = SparseVec::basis(x, Complex(0.3, -0.4));
      const SparseVec lhs = apply_twisted(golden, k.as_unitri(4), v);
      SparseVec rhs = v;
      rhs.scale(golden.character(k.k));
      require((lhs - rhs).norm() <= 1e-12, "central phase");
    }
    return "max multiplicativity error " + fmt(worst);
  });

  s.run("Orfanos projections are orthogonal projections", [] {
    std::ostringstream os;
    for (int d : {3, 4})
      for (std::int64_t n : {2, 4, 5, 13}) {
        const ProjectionBasis P = build_projection(build_weights(build_folner(n, d)));
        require(P.rank() == kn_spec(n, d).count(), "rank");
        const double g = gram_deviation(P);
        require(g <= 1e-12, "Gram deviation " + fmt(g));
        require(idempotence_defect(P, 15, 8) <= 1e-12, "idempotence");
        require(selfadjoint_defect(P, 16, 8) <= 1e-12, "self-adjointness");
        os << "d=" << d << ",n=" << n << " ";
      }
    return os.str();
  });

  s.run("diagonal commutator estimates", [golden] {
    const std::vector<UniTri> gens{UniTri::elementary(3, 1, 2, 1), UniTri::elementary(3, 1, 2, -1),
                                   UniTri::elementary(3, 2, 3, 1), UniTri::elementary(3, 2, 3, -1)};
    for (std::int64_t n : {5, 13}) {
      const ProjectionBasis P = build_projection(build_weights(build_folner(n, 3)));
      const double delta = max_discrepancy(gens, P, golden).value;
      for (const auto& z : gens) {
        for (std::size_t y = 0; y < P.rank(); ++y)
          require(diagonal_vector_defect(z, P, y, golden) <= delta + 1e-15, "per-vector bound");
        const double dn = commutator_norm(TwistedOp(z, OpKind::diagonal), P, golden).value;
        require(dn <= 2 * delta + 1e-9, "||D_z P - P D_z|| <= 2 Delta_n");
      }
    }
    return std::string("d=3, n in {5,13}");
  });

  s.run("power and dense commutator norms agree", [golden] {
    const ProjectionBasis P = build_projection(build_weights(build_folner(5, 3)));
    double worst = 0.0;
    for (OpKind kind : {OpKind::lambda, OpKind::diagonal, OpKind::twisted}) {
      const TwistedOp T(UniTri::elementary(3, 1, 2), kind);
      NormOptions opt;
      const double pw = commutator_norm(T, P, golden, opt).value;
      opt.method = NormMethod::dense;
      const double de = commutator_norm(T, P, golden, opt).value;
      worst = std::max(worst, std::abs(pw - de));
    }
    require(worst <= 1e-6, "power/dense gap " + fmt(worst));
    return "max gap " + fmt(worst);
  });

  return s.results;
}

}  // namespace qdcert
