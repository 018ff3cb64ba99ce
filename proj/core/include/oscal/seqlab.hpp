#pragma once

#include <cstddef>
#include <vector>

#include "oscal/rational.hpp"

namespace oscal {

enum class NormKind { Sup, L1, Se };

const char* to_string(NormKind k);

using Vec = std::vector<Rational>;
// Row-major square matrix acting on basis coordinates: c -> M c.
using Matrix = std::vector<Vec>;

struct PolySpace {
  std::size_t dim = 0;
  NormKind norm = NormKind::Sup;
};

constexpr std::size_t kMaxL1Dim = 12;

Rational norm(const PolySpace& space, const Vec& x);

// Ambient dual-ball vertices up to sign: +-e_i, sign vectors, +-partial sums.
std::vector<Vec> dual_vertices(const PolySpace& space);

class PolyBasis {
 public:
  // Throws InputError on wrong lengths or linearly dependent vectors.
  PolyBasis(PolySpace space, std::vector<Vec> vectors);

  const PolySpace& space() const { return space_; }
  std::size_t size() const { return vectors_.size(); }
  const Vec& operator[](std::size_t j) const { return vectors_[j]; }
  const std::vector<Vec>& vectors() const { return vectors_; }

  // sum_j c_j b_j
  Vec combine(const Vec& c) const;
  // Coordinates of x in the basis; throws PreconditionError if x is outside the span.
  Vec coordinates(const Vec& x) const;

 private:
  PolySpace space_;
  std::vector<Vec> vectors_;
};

// Functional on the span, given by its values gamma_j on the basis vectors.
using SpanFunctional = Vec;

// Sup of gamma . c over the span's unit ball {c : ||sum c_j b_j|| <= 1}.
Rational functional_norm(const PolyBasis& basis, const SpanFunctional& gamma);
Rational operator_norm(const PolyBasis& basis, const Matrix& m);

Matrix zero_matrix(std::size_t n);
Matrix projection(std::size_t n, std::size_t k);
// Rank one map x -> phi(x) b_k, in basis coordinates (k zero-based).
Matrix rank_one(const SpanFunctional& phi, std::size_t k);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);

Rational projection_norm(const PolyBasis& basis, std::size_t k);
Rational basis_constant(const PolyBasis& basis);

std::vector<SpanFunctional> biorthogonal(const PolyBasis& basis);
PolyBasis difference_sequence(const PolyBasis& basis);
SpanFunctional summing_functional(const PolyBasis& basis);

// Biorthogonals of the difference sequence, expressed on the original basis.
std::vector<SpanFunctional> difference_biorthogonal(const PolyBasis& basis);
// Basis projections of the difference sequence, in original-basis coordinates.
std::vector<Matrix> difference_projections(const PolyBasis& basis);

struct IdentityReport {
  bool difference_dual = false;          // e_n* = s - sum_{i<n} b_i*
  bool q_split = false;                  // Q_k = P_{k-1} + e_k* (x) b_k
  bool p_recovery = false;               // P_k = Q_{k+1} - e_{k+1}* (x) b_{k+1}
  bool biorthogonal_difference = false;  // b_j* = e_j* - e_{j+1}*, e_{n+1}* = 0
  bool dual_bound = false;               // sup ||e_n*|| <= ||s|| (1 + lambda)
  bool projection_bound = false;         // sup ||Q_k|| <= lambda + (1 + lambda) ||s|| sup ||b_k||
  Rational lambda;
  Rational s_norm;
  Rational max_dual_norm;
  Rational max_q_norm;
  Rational max_b_norm;

  bool all() const {
    return difference_dual && q_split && p_recovery && biorthogonal_difference && dual_bound && projection_bound;
  }
};

IdentityReport check_identities(const PolyBasis& basis);

Rational wuc_norm(const PolySpace& space, const std::vector<Vec>& vectors);
Rational duc_norm(const PolySpace& space, const std::vector<Vec>& vectors);

// (1/lambda*) max|c_i| <= ||sum c_i e_i|| <= K max|c_i| for the difference sequence e.
struct SandwichReport {
  Rational lambda_star;   // max ||e_j*||
  Rational wuc;           // K
  Rational min_norm;      // min ||sum c_i e_i|| over max|c_i| = 1
  Rational max_norm;      // max over cube vertices
  bool lower_holds = false;
  bool upper_holds = false;
};

SandwichReport sandwich_check(const PolyBasis& basis);

struct ConvexBlocks {
  std::vector<Vec> blocks;                 // u_i
  std::vector<std::vector<Rational>> rho;  // rho_j^i for j in block i
  bool representation_exact = false;       // u_i and u_{i+1} - u_i expand as stated on the differences
  Rational duc_blocks;
  Rational duc_original;
  bool duc_decreases() const { return duc_blocks <= duc_original; }
};

// Contiguous blocks of sizes `sizes` starting at the first vector; weights are
// nonnegative and sum to 1 within each block. Throws InputError otherwise.
ConvexBlocks convex_block(const PolySpace& space, const std::vector<Vec>& vectors,
                          const std::vector<std::size_t>& sizes, const std::vector<Vec>& weights);

// max c_{j0} subject to ||sum_{j<=n} c_j e_j|| <= 1 for every n and c_j = 0 on the
// zero positions, e the difference sequence; positions are 1-based.
Rational eps_cc_value(const PolyBasis& basis, const std::vector<std::size_t>& zero_positions, std::size_t j0);

// Canonical models.
PolyBasis unit_basis(NormKind norm, std::size_t dim);
// b_j = u_1 + ... + u_j.
PolyBasis partial_sum_basis(NormKind norm, std::size_t dim);
inline PolyBasis c0_partial_sum_basis(std::size_t dim) { return partial_sum_basis(NormKind::Sup, dim); }
inline PolyBasis se_unit_basis(std::size_t dim) { return unit_basis(NormKind::Se, dim); }
inline PolyBasis se_partial_sum_basis(std::size_t dim) { return partial_sum_basis(NormKind::Se, dim); }

}  // namespace oscal
