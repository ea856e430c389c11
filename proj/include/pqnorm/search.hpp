#pragma once

// Seeded randomness and shared search settings.

#include "pqnorm/kernels.hpp"
#include "pqnorm/matrix.hpp"

#include <cstdint>
#include <random>

namespace pqnorm {

using Rng = std::mt19937_64;

/// Independent stream `stream` of the generator family selected by `seed`.
Rng make_rng(std::uint64_t seed, std::uint64_t stream);

double uniform(Rng& rng, double lo = 0.0, double hi = 1.0);
int uniform_int(Rng& rng, int lo, int hi);  // inclusive
Complex gaussian_complex(Rng& rng);
CMatrix random_matrix(Rng& rng, int rows, int cols);
CVector random_vector(Rng& rng, int n);
CMatrix random_unitary(Rng& rng, int n);
/// I + spread * G / sqrt(n) with G complex Gaussian; re-drawn until well conditioned.
CMatrix random_near_identity(Rng& rng, int n, double spread);
/// Rank-one orthogonal projections onto the first n standard basis vectors,
/// rotated by a random unitary of size d.
std::vector<CMatrix> random_orthogonal_projections(Rng& rng, int n, int d);

/// Settings shared by all engines. `budget` counts restarts; restart r draws
/// from stream r, so a larger budget only adds restarts.
struct EngineOptions {
  std::uint64_t seed = 0;
  int budget = 4;
  int level_cap = 4;
  int max_length = 0;  // 0: twice the input term count
  int iterations = 120;
  Execution exec = Execution::parallel;
};

/// Options for norm evaluations nested inside another search.
EngineOptions nested_options(const EngineOptions& o, std::uint64_t salt);

}  // namespace pqnorm
