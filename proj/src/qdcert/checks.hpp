#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "qdcert/orfanos.hpp"

namespace qdcert {

// max |<xi_i, xi_j> - delta_ij|. Pairs of vectors without a common support
// point contribute exactly zero, so only overlapping pairs are formed.
double gram_deviation(const ProjectionBasis& P);

// max over seeded random v of ||P(Pv) - Pv|| / ||v||
double idempotence_defect(const ProjectionBasis& P, std::uint64_t seed, int samples);
// max over seeded random v, w of |<Pv, w> - <v, Pw>| / (||v|| ||w||)
double selfadjoint_defect(const ProjectionBasis& P, std::uint64_t seed, int samples);

// max amplitude error of pi(y1) pi(y2) delta_x against pi(y1 y2) delta_x over
// random y1, y2, x with entries in [-range, range]
double multiplicativity_error(const Theta& theta, int d, int trials, std::uint64_t seed,
                              std::int64_t range = 5);

UniTri random_unitri(int d, std::int64_t range, std::mt19937_64& rng);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

// Invariant suite over small instances (d in {3,4}, n in {2,4,5,13}).
std::vector<CheckResult> selftest();

}  // namespace qdcert
