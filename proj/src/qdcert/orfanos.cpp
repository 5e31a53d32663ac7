#include "qdcert/orfanos.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <random>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "qdcert/errors.hpp"
#include "qdcert/parallel.hpp"

namespace qdcert {

double OrfanosWeights::weight_at(std::size_t i) const {
  return std::sqrt(static_cast<double>(counts[i]) / static_cast<double>(fn_size));
}

double OrfanosWeights::weight(const QuotientElt& alpha) const {
  auto it = index.find(alpha);
  return it == index.end() ? 0.0 : weight_at(it->second);
}

OrfanosWeights build_weights(const FolnerData& fd, std::uint64_t cap) {
  if (!fd.verified) throw InvariantViolation("Orfanos weights need a verified Folner set");
  OrfanosWeights w;
  w.n = fd.n;
  w.d = fd.d;
  w.kn = fd.kn;
  w.fn_size = fd.size_fn();

  const auto kn_elements = enumerate_box(fd.kn, cap);
  const auto products = static_cast<std::uint64_t>(kn_elements.size()) * fd.size_fn();
  if (products > cap)
    throw CapExceeded("support enumeration F_n^-1 K_n for n = " + std::to_string(fd.n) +
                      " needs " + std::to_string(products) + " products (cap " +
                      std::to_string(cap) + ")");

  // supp(phi_n) = F_n^-1 K_n
  std::vector<QuotientElt> row(kn_elements.size(), QuotientElt(fd.d));
  for (const auto& f : fd.fn_elements) {
    const QuotientElt finv = quotient_inv(f);
    parallel_for(kn_elements.size(), [&](std::size_t i) { row[i] = quotient_mul(finv, kn_elements[i]); });
    for (auto& alpha : row) {
      auto [it, inserted] = w.index.try_emplace(alpha, w.support.size());
      if (inserted) w.support.push_back(alpha);
    }
  }

  w.counts.assign(w.support.size(), 0);
  parallel_for(w.support.size(), [&](std::size_t i) {
    std::uint64_t c = 0;
    for (const auto& f : fd.fn_elements)
      if (fd.kn.contains(quotient_mul(f, w.support[i]))) ++c;
    w.counts[i] = c;
  });
  for (auto c : w.counts)
    if (c == 0) throw InvariantViolation("support point of phi_n with zero count");
  return w;
}

SparseVec ProjectionBasis::vector(std::size_t coset) const {
  SparseVec v;
  for (auto i : members.at(coset)) v.add(points[i], weights[i]);
  return v;
}

double ProjectionBasis::weight(const QuotientElt& x) const {
  auto it = index.find(x);
  return it == index.end() ? 0.0 : weights[it->second];
}

ProjectionBasis build_projection(const OrfanosWeights& w) {
  ProjectionBasis P;
  P.n = w.n;
  P.d = w.d;
  P.kn = w.kn;
  P.reps = enumerate_box(w.kn, std::numeric_limits<std::uint64_t>::max());
  P.points = w.support;
  P.index = w.index;
  P.weights.resize(w.support.size());
  P.owner.resize(w.support.size());
  P.members.assign(P.reps.size(), {});
  parallel_for(w.support.size(), [&](std::size_t i) {
    P.weights[i] = w.weight_at(i);
    P.owner[i] = kn_index(reduce_to_Kn(w.support[i], w.n), w.kn);
  });
  for (std::size_t i = 0; i < P.points.size(); ++i) {
    if (P.owner[i] >= P.reps.size())
      throw InvariantViolation("support point reduces outside K_n");
    P.members[P.owner[i]].push_back(i);
  }
  return P;
}

SparseVec apply_P(const ProjectionBasis& P, const SparseVec& v) {
  std::map<std::uint64_t, Complex> coeffs;
  for (const auto& [key, amp] : v.entries()) {
    auto it = P.index.find(key);
    if (it == P.index.end()) continue;
    coeffs[P.owner[it->second]] += P.weights[it->second] * amp;
  }
  SparseVec out;
  for (const auto& [coset, c] : coeffs)
    for (auto i : P.members[coset]) out.add(P.points[i], c * P.weights[i]);
  return out;
}

double pointwise_defect(const ProjectionBasis& P, const QuotientElt& x) {
  const SparseVec delta = SparseVec::basis(x);
  return (apply_P(P, delta) - delta).norm();
}

double point_discrepancy(const UniTri& z, const ProjectionBasis& P, std::size_t point,
                         const Theta& theta) {
  const QuotientElt& y = P.reps[P.owner[point]];
  return theta.phase_gap(psi_exponent(z, P.points[point]) - psi_exponent(z, y));
}

Discrepancy max_discrepancy(const std::vector<UniTri>& gens, const ProjectionBasis& P,
                            const Theta& theta) {
  std::vector<Discrepancy> per_point(P.points.size());
  parallel_for(P.points.size(), [&](std::size_t i) {
    Discrepancy best{0.0, 0, i};
    for (std::size_t g = 0; g < gens.size(); ++g) {
      const double gap = point_discrepancy(gens[g], P, i, theta);
      if (gap > best.value) best = {gap, g, i};
    }
    per_point[i] = best;
  });
  Discrepancy best;
  for (const auto& d : per_point)
    if (d.value > best.value) best = d;
  return best;
}

Discrepancy max_discrepancy(const std::vector<UniTri>& gens, const FolnerData& fd,
                            const Theta& theta) {
  return max_discrepancy(gens, build_projection(build_weights(fd)), theta);
}

double diagonal_vector_defect(const UniTri& z, const ProjectionBasis& P, std::size_t coset,
                              const Theta& theta) {
  double s = 0.0;
  for (auto i : P.members.at(coset)) {
    const double gap = point_discrepancy(z, P, i, theta);
    s += P.weights[i] * P.weights[i] * gap * gap;
  }
  return std::sqrt(s);
}

const char* to_string(NormMethod method) {
  return method == NormMethod::power ? "power" : "dense";
}

namespace {

struct Arrow {
  std::size_t target;
  Complex phase;
};

// Finite window of l^2(G/Z) on which T P - P T is computed. Indices below
// P.support_size() coincide with the support points of P.
class CommutatorSpace {
 public:
  CommutatorSpace(const TwistedOp& T, const ProjectionBasis& P, const Theta& theta) : P_(P) {
    const std::size_t s = P.support_size();
    std::vector<std::optional<BasisImage>> fwd_img(s), adj_img(s);
    parallel_for(s, [&](std::size_t i) {
      fwd_img[i] = T.on_basis(theta, P.points[i]);
      adj_img[i] = T.adjoint_on_basis(theta, P.points[i]);
    });
    owner_ = P.owner;
    fwd_.resize(s);
    for (std::size_t i = 0; i < s; ++i) {
      const std::size_t j = intern(fwd_img[i]->target);
      fwd_[i] = Arrow{j, fwd_img[i]->phase};
    }
    for (std::size_t i = 0; i < s; ++i) {
      // T* delta_i = mu delta_t  means  T delta_t = conj(mu) delta_i
      const std::size_t t = intern(adj_img[i]->target);
      if (t >= fwd_.size()) fwd_.resize(t + 1);
      if (!fwd_[t]) fwd_[t] = Arrow{i, std::conj(adj_img[i]->phase)};
    }
    fwd_.resize(size());
    for (std::size_t j = s; j < size(); ++j)
      owner_.push_back(kn_index(reduce_to_Kn(extra_points_[j - s], P.n), P.kn));
    for (std::size_t j = 0; j < fwd_.size(); ++j)
      if (fwd_[j]) columns_.push_back(j);
  }

  std::size_t size() const { return P_.support_size() + extra_points_.size(); }
  const std::vector<std::size_t>& columns() const { return columns_; }
  std::uint64_t owner(std::size_t j) const { return owner_[j]; }

  // (TP - PT) delta_j for a column index j, as (row, value) pairs
  std::vector<std::pair<std::size_t, Complex>> column(std::size_t j) const {
    std::vector<std::pair<std::size_t, Complex>> out;
    const std::size_t s = P_.support_size();
    if (j < s) {
      const double wj = P_.weights[j];
      for (auto i : P_.members[P_.owner[j]]) {
        const Arrow& a = *fwd_[i];
        out.emplace_back(a.target, wj * P_.weights[i] * a.phase);
      }
    }
    const Arrow& a = *fwd_[j];
    if (a.target < s) {
      const double wt = P_.weights[a.target];
      for (auto i : P_.members[P_.owner[a.target]])
        out.emplace_back(i, -a.phase * wt * P_.weights[i]);
    }
    return out;
  }

 private:
  std::size_t intern(const QuotientElt& x) {
    if (auto it = P_.index.find(x); it != P_.index.end()) return it->second;
    auto [it, inserted] = extra_index_.try_emplace(x, size());
    if (inserted) extra_points_.push_back(x);
    return it->second;
  }

  const ProjectionBasis& P_;
  std::vector<QuotientElt> extra_points_;
  std::unordered_map<QuotientElt, std::size_t, QuotientHash> extra_index_;
  std::vector<std::optional<Arrow>> fwd_;
  std::vector<std::uint64_t> owner_;
  std::vector<std::size_t> columns_;
};

using LocalMatrix = Eigen::MatrixXcd;

// Gram matrix C_b^* C_b of the commutator restricted to the given columns.
LocalMatrix local_gram(const CommutatorSpace& space, const std::vector<std::size_t>& cols) {
  std::unordered_map<std::size_t, Eigen::Index> rows;
  std::vector<std::vector<std::pair<std::size_t, Complex>>> entries;
  entries.reserve(cols.size());
  for (auto j : cols) {
    entries.push_back(space.column(j));
    for (const auto& [r, v] : entries.back()) rows.try_emplace(r, static_cast<Eigen::Index>(rows.size()));
  }
  LocalMatrix C = LocalMatrix::Zero(static_cast<Eigen::Index>(rows.size()),
                                    static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c)
    for (const auto& [r, v] : entries[c]) C(rows.at(r), static_cast<Eigen::Index>(c)) += v;
  return C.adjoint() * C;
}

struct PowerOutcome {
  double eigenvalue = 0.0;
  bool converged = true;
  int iterations = 0;
};

PowerOutcome power_iterate(const LocalMatrix& M, Eigen::VectorXcd x, const NormOptions& opt) {
  PowerOutcome out;
  x.normalize();
  double previous = -1.0;
  for (int it = 1; it <= opt.max_iterations; ++it) {
    Eigen::VectorXcd y = M * x;
    const double lambda = x.dot(y).real();
    const double ny = y.norm();
    out.iterations = it;
    if (ny < 1e-300) {
      out.eigenvalue = 0.0;
      return out;
    }
    out.eigenvalue = std::max(out.eigenvalue, lambda);
    if (previous >= 0.0 && std::abs(lambda - previous) <= opt.rel_tol * std::abs(lambda)) return out;
    previous = lambda;
    x = y / ny;
  }
  out.converged = false;
  return out;
}

NormResult power_norm(const CommutatorSpace& space, const ProjectionBasis& P, const NormOptions& opt) {
  std::vector<std::vector<std::size_t>> blocks(P.rank());
  for (auto j : space.columns()) blocks[space.owner(j)].push_back(j);

  std::vector<PowerOutcome> per_block(blocks.size());
  parallel_for(blocks.size(), [&](std::size_t b) {
    const auto& cols = blocks[b];
    if (cols.empty()) return;
    const LocalMatrix M = local_gram(space, cols);
    const auto k = static_cast<Eigen::Index>(cols.size());
    PowerOutcome best = power_iterate(M, Eigen::VectorXcd::Ones(k), opt);
    std::mt19937_64 rng(opt.seed ^ (0x9e3779b97f4a7c15ULL * (b + 1)));
    std::normal_distribution<double> gauss;
    for (int r = 0; r < opt.random_restarts; ++r) {
      Eigen::VectorXcd start(k);
      for (Eigen::Index i = 0; i < k; ++i) start[i] = Complex(gauss(rng), gauss(rng));
      const PowerOutcome o = power_iterate(M, start, opt);
      best.converged = best.converged && o.converged;
      best.iterations = std::max(best.iterations, o.iterations);
      best.eigenvalue = std::max(best.eigenvalue, o.eigenvalue);
    }
    per_block[b] = best;
  });

  NormResult result;
  result.method = NormMethod::power;
  result.dimension = space.columns().size();
  double top = 0.0;
  for (const auto& o : per_block) {
    top = std::max(top, o.eigenvalue);
    result.converged = result.converged && o.converged;
    result.iterations = std::max(result.iterations, o.iterations);
  }
  result.value = std::sqrt(std::max(0.0, top));
  return result;
}

NormResult dense_norm(const CommutatorSpace& space, const NormOptions& opt) {
  const auto& cols = space.columns();
  if (cols.size() > opt.dense_cap)
    throw CapExceeded("dense commutator norm needs dimension " + std::to_string(cols.size()) +
                      " > dense cap " + std::to_string(opt.dense_cap));
  std::vector<Eigen::Triplet<Complex>> triplets;
  for (std::size_t c = 0; c < cols.size(); ++c)
    for (const auto& [r, v] : space.column(cols[c]))
      triplets.emplace_back(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c), v);
  Eigen::SparseMatrix<Complex> C(static_cast<Eigen::Index>(space.size()),
                                 static_cast<Eigen::Index>(cols.size()));
  C.setFromTriplets(triplets.begin(), triplets.end());
  NormResult result;
  result.method = NormMethod::dense;
  result.dimension = cols.size();
  if (cols.empty()) return result;
  const Eigen::SparseMatrix<Complex> CtC = C.adjoint() * C;
  const LocalMatrix gram(CtC);
  Eigen::SelfAdjointEigenSolver<LocalMatrix> eig(gram, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw InvariantViolation("dense eigensolver failed");
  result.value = std::sqrt(std::max(0.0, eig.eigenvalues().maxCoeff()));
  return result;
}

}  // namespace

NormResult commutator_norm(const TwistedOp& T, const ProjectionBasis& P, const Theta& theta,
                           const NormOptions& options) {
  if (T.dim() != P.d) throw ConfigError("operator and projection have different dimensions");
  const CommutatorSpace space(T, P, theta);
  return options.method == NormMethod::power ? power_norm(space, P, options)
                                             : dense_norm(space, options);
}

}  // namespace qdcert
