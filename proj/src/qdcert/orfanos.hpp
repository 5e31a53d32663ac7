#pragma once

#include <cstddef>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "qdcert/gns.hpp"
#include "qdcert/quotient.hpp"

namespace qdcert {

/// phi_n(alpha) = sqrt(|K_n cap F_n alpha| / |F_n|) on its support F_n^-1 K_n.
///
/// Counts are kept as exact integers; the square root is taken on demand.
struct OrfanosWeights {
  std::int64_t n = 0;
  int d = 0;
  BoxSpec kn;
  std::size_t fn_size = 0;
  std::vector<QuotientElt> support;
  std::vector<std::uint64_t> counts;
  std::unordered_map<QuotientElt, std::size_t, QuotientHash> index;

  double weight_at(std::size_t i) const;
  // zero off the support
  double weight(const QuotientElt& alpha) const;
};

OrfanosWeights build_weights(const FolnerData& fd, std::uint64_t cap = kDefaultEnumCap);

/// The orthonormal family xi_{yL_n}, y in K_n, spanning the range of P_n.
///
/// Every support point of phi_n belongs to exactly one coset y L_n, so the
/// family is stored as a partition of the support: points[i] carries weight
/// weights[i] and belongs to coset owner[i] (an index into reps).
struct ProjectionBasis {
  std::int64_t n = 0;
  int d = 0;
  BoxSpec kn;
  std::vector<QuotientElt> reps;
  std::vector<QuotientElt> points;
  std::vector<double> weights;
  std::vector<std::uint64_t> owner;
  std::vector<std::vector<std::size_t>> members;
  std::unordered_map<QuotientElt, std::size_t, QuotientHash> index;

  std::size_t rank() const noexcept { return reps.size(); }
  std::size_t support_size() const noexcept { return points.size(); }
  SparseVec vector(std::size_t coset) const;
  double weight(const QuotientElt& x) const;
};

ProjectionBasis build_projection(const OrfanosWeights& w);

// sum_y <v, xi_y> xi_y, touching only cosets that meet supp(v)
SparseVec apply_P(const ProjectionBasis& P, const SparseVec& v);

// ||P delta_x - delta_x||
double pointwise_defect(const ProjectionBasis& P, const QuotientElt& x);

struct Discrepancy {
  double value = 0.0;
  // witness of the maximum; meaningful when value > 0
  std::size_t generator = 0;
  std::size_t point = 0;
};

// max over z in gens, y in K_n, alpha in y L_n cap F_n^-1 K_n of
// |psi_z(alpha) - psi_z(y)|
Discrepancy max_discrepancy(const std::vector<UniTri>& gens, const ProjectionBasis& P,
                            const Theta& theta);
Discrepancy max_discrepancy(const std::vector<UniTri>& gens, const FolnerData& fd,
                            const Theta& theta);

// |psi_z(alpha) - psi_z(owner(alpha))| for one support point
double point_discrepancy(const UniTri& z, const ProjectionBasis& P, std::size_t point,
                         const Theta& theta);

// ||D_z xi_y - psi_z(y) xi_y||
double diagonal_vector_defect(const UniTri& z, const ProjectionBasis& P, std::size_t coset,
                              const Theta& theta);

enum class NormMethod { power, dense };
const char* to_string(NormMethod method);

struct NormOptions {
  NormMethod method = NormMethod::power;
  std::size_t dense_cap = 2000;
  double rel_tol = 1e-12;
  int max_iterations = 10'000;
  int random_restarts = 2;
  std::uint64_t seed = 0;
};

struct NormResult {
  double value = 0.0;
  bool converged = true;
  // dimension of the space the commutator was restricted to
  std::size_t dimension = 0;
  int iterations = 0;
  NormMethod method = NormMethod::power;
};

/// Operator norm of T P - P T.
///
/// T P - P T vanishes on the orthogonal complement of range(P) + T* range(P),
/// and both T and P map each coset subspace l^2(yL_n) into a single coset
/// subspace, so (TP - PT)*(TP - PT) is block diagonal over the cosets. The
/// power method iterates each block independently; the dense method builds
/// the whole restricted matrix and takes its largest singular value.
NormResult commutator_norm(const TwistedOp& T, const ProjectionBasis& P, const Theta& theta,
                           const NormOptions& options = {});

}  // namespace qdcert
