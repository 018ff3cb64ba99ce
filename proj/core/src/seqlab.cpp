#include "oscal/seqlab.hpp"

#include <optional>
#include <string>

#include "oscal/error.hpp"
#include "oscal/lp.hpp"

namespace oscal {

const char* to_string(NormKind k) {
  switch (k) {
    case NormKind::Sup: return "sup";
    case NormKind::L1: return "l1";
    case NormKind::Se: return "se";
  }
  return "?";
}

namespace {

Rational dot(const Vec& a, const Vec& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Solves sum_j c_j cols[j] = x exactly; nullopt when x is outside the span.
std::optional<Vec> solve_columns(const std::vector<Vec>& cols, const Vec& x) {
  const std::size_t n = cols.size();
  const std::size_t m = x.size();
  std::vector<Vec> a(m, Vec(n + 1));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i][j] = cols[j][i];
    a[i][n] = x[i];
  }
  std::vector<std::size_t> pivot_col;
  std::size_t r = 0;
  for (std::size_t j = 0; j < n && r < m; ++j) {
    std::size_t p = r;
    while (p < m && a[p][j] == 0) ++p;
    if (p == m) continue;
    std::swap(a[p], a[r]);
    Rational inv = 1 / a[r][j];
    for (std::size_t k = j; k <= n; ++k) a[r][k] *= inv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == r || a[i][j] == 0) continue;
      Rational f = a[i][j];
      for (std::size_t k = j; k <= n; ++k) a[i][k] -= f * a[r][k];
    }
    pivot_col.push_back(j);
    ++r;
  }
  for (std::size_t i = r; i < m; ++i) {
    if (a[i][n] != 0) return std::nullopt;
  }
  Vec c(n);
  for (std::size_t i = 0; i < r; ++i) c[pivot_col[i]] = a[i][n];
  return c;
}

std::size_t rank_of(const std::vector<Vec>& cols, std::size_t m) {
  std::vector<Vec> a(cols);
  std::size_t r = 0;
  for (std::size_t i = 0; i < m && r < a.size(); ++i) {
    std::size_t p = r;
    while (p < a.size() && a[p][i] == 0) ++p;
    if (p == a.size()) continue;
    std::swap(a[p], a[r]);
    for (std::size_t q = r + 1; q < a.size(); ++q) {
      if (a[q][i] == 0) continue;
      Rational f = a[q][i] / a[r][i];
      for (std::size_t k = i; k < m; ++k) a[q][k] -= f * a[r][k];
    }
    ++r;
  }
  return r;
}

using Form = std::vector<lp::Term>;

// Constrains ||x|| <= 1 (or <= tau) where coords[i] is the i-th ambient coordinate of x.
void add_norm_bound(lp::LinearProgram& prog, NormKind norm, const std::vector<Form>& coords,
                    std::optional<std::size_t> tau) {
  auto bounded = [&](Form f) {
    Form neg;
    for (const lp::Term& t : f) neg.push_back({t.var, -t.coef});
    if (tau) {
      f.push_back({*tau, -1});
      neg.push_back({*tau, -1});
      prog.add_constraint(std::move(f), lp::Sense::LessEq, 0);
      prog.add_constraint(std::move(neg), lp::Sense::LessEq, 0);
    } else {
      prog.add_constraint(std::move(f), lp::Sense::LessEq, 1);
      prog.add_constraint(std::move(neg), lp::Sense::LessEq, 1);
    }
  };
  switch (norm) {
    case NormKind::Sup:
      for (const Form& f : coords) bounded(f);
      break;
    case NormKind::Se: {
      Form partial;
      for (const Form& f : coords) {
        partial.insert(partial.end(), f.begin(), f.end());
        bounded(partial);
      }
      break;
    }
    case NormKind::L1: {
      Form total;
      for (const Form& f : coords) {
        std::size_t a = prog.add_variable("a" + std::to_string(total.size()));
        Form pos = f, neg;
        for (const lp::Term& t : f) neg.push_back({t.var, -t.coef});
        pos.push_back({a, -1});
        neg.push_back({a, -1});
        prog.add_constraint(std::move(pos), lp::Sense::LessEq, 0);
        prog.add_constraint(std::move(neg), lp::Sense::LessEq, 0);
        total.push_back({a, 1});
      }
      if (tau) {
        total.push_back({*tau, -1});
        prog.add_constraint(std::move(total), lp::Sense::LessEq, 0);
      } else {
        prog.add_constraint(std::move(total), lp::Sense::LessEq, 1);
      }
      break;
    }
  }
}

// Ambient coordinates of sum_j vars[j] * vectors[j].
std::vector<Form> coordinate_forms(const std::vector<Vec>& vectors, const std::vector<std::size_t>& vars,
                                   std::size_t dim) {
  std::vector<Form> coords(dim);
  for (std::size_t j = 0; j < vectors.size(); ++j) {
    for (std::size_t i = 0; i < dim; ++i) {
      if (vectors[j][i] != 0) coords[i].push_back({vars[j], vectors[j][i]});
    }
  }
  return coords;
}

Rational optimum(const lp::LinearProgram& prog) {
  lp::Result r = lp::solve(prog);
  if (r.status != lp::Status::Optimal) {
    throw InternalError(std::string("basis LP is ") + lp::to_string(r.status));
  }
  return r.objective;
}

void require_l1_dim(const PolySpace& space) {
  if (space.norm == NormKind::L1 && space.dim > kMaxL1Dim) {
    throw PreconditionError("l1 dual vertices are enumerated only up to dimension " + std::to_string(kMaxL1Dim));
  }
}

}  // namespace

Rational norm(const PolySpace& space, const Vec& x) {
  if (x.size() != space.dim) throw InputError("vector length does not match the dimension");
  Rational out = 0;
  Rational partial = 0;
  for (const Rational& v : x) {
    switch (space.norm) {
      case NormKind::Sup: out = max_of(out, abs_value(v)); break;
      case NormKind::L1: out += abs_value(v); break;
      case NormKind::Se:
        partial += v;
        out = max_of(out, abs_value(partial));
        break;
    }
  }
  return out;
}

std::vector<Vec> dual_vertices(const PolySpace& space) {
  require_l1_dim(space);
  const std::size_t m = space.dim;
  std::vector<Vec> out;
  switch (space.norm) {
    case NormKind::Sup:
      for (std::size_t i = 0; i < m; ++i) {
        Vec v(m);
        v[i] = 1;
        out.push_back(std::move(v));
      }
      break;
    case NormKind::Se:
      for (std::size_t n = 1; n <= m; ++n) {
        Vec v(m);
        for (std::size_t i = 0; i < n; ++i) v[i] = 1;
        out.push_back(std::move(v));
      }
      break;
    case NormKind::L1:
      if (m == 0) break;
      // first sign fixed to +; the negatives are the remaining vertices
      for (std::size_t mask = 0; mask < (std::size_t{1} << (m - 1)); ++mask) {
        Vec v(m);
        v[0] = 1;
        for (std::size_t i = 1; i < m; ++i) v[i] = (mask >> (i - 1)) & 1 ? -1 : 1;
        out.push_back(std::move(v));
      }
      break;
  }
  return out;
}

PolyBasis::PolyBasis(PolySpace space, std::vector<Vec> vectors) : space_(space), vectors_(std::move(vectors)) {
  if (space_.dim == 0) throw InputError("basis space has dimension 0");
  if (vectors_.empty()) throw InputError("basis has no vectors");
  if (vectors_.size() > space_.dim) throw InputError("more basis vectors than dimensions");
  for (const Vec& v : vectors_) {
    if (v.size() != space_.dim) throw InputError("basis vector length does not match the dimension");
  }
  if (rank_of(vectors_, space_.dim) != vectors_.size()) throw InputError("basis vectors are linearly dependent");
}

Vec PolyBasis::combine(const Vec& c) const {
  Vec x(space_.dim);
  for (std::size_t j = 0; j < vectors_.size(); ++j) {
    if (c[j] == 0) continue;
    for (std::size_t i = 0; i < space_.dim; ++i) x[i] += c[j] * vectors_[j][i];
  }
  return x;
}

Vec PolyBasis::coordinates(const Vec& x) const {
  auto c = solve_columns(vectors_, x);
  if (!c) throw PreconditionError("vector lies outside the span");
  return *c;
}

Rational functional_norm(const PolyBasis& basis, const SpanFunctional& gamma) {
  if (gamma.size() != basis.size()) throw InputError("functional length does not match the basis");
  bool zero = true;
  for (const Rational& g : gamma) zero = zero && g == 0;
  if (zero) return 0;
  lp::LinearProgram prog;
  std::vector<std::size_t> c(basis.size());
  for (std::size_t j = 0; j < basis.size(); ++j) c[j] = prog.add_variable("c" + std::to_string(j), std::nullopt);
  add_norm_bound(prog, basis.space().norm, coordinate_forms(basis.vectors(), c, basis.space().dim), std::nullopt);
  Form obj;
  for (std::size_t j = 0; j < basis.size(); ++j) {
    if (gamma[j] != 0) obj.push_back({c[j], gamma[j]});
  }
  prog.set_objective(lp::Direction::Maximize, std::move(obj));
  return optimum(prog);
}

Rational operator_norm(const PolyBasis& basis, const Matrix& m) {
  const std::size_t n = basis.size();
  Rational best = 0;
  for (const Vec& phi : dual_vertices(basis.space())) {
    Vec phi_b(n);
    for (std::size_t l = 0; l < n; ++l) phi_b[l] = dot(phi, basis[l]);
    SpanFunctional gamma(n);
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t l = 0; l < n; ++l) gamma[j] += m[l][j] * phi_b[l];
    }
    best = max_of(best, functional_norm(basis, gamma));
  }
  return best;
}

Matrix zero_matrix(std::size_t n) { return Matrix(n, Vec(n)); }

Matrix projection(std::size_t n, std::size_t k) {
  Matrix p = zero_matrix(n);
  for (std::size_t i = 0; i < k && i < n; ++i) p[i][i] = 1;
  return p;
}

Matrix rank_one(const SpanFunctional& phi, std::size_t k) {
  Matrix m = zero_matrix(phi.size());
  m[k] = phi;
  return m;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  Matrix c = a;
  for (std::size_t i = 0; i < c.size(); ++i) {
    for (std::size_t j = 0; j < c[i].size(); ++j) c[i][j] += b[i][j];
  }
  return c;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  Matrix c = a;
  for (std::size_t i = 0; i < c.size(); ++i) {
    for (std::size_t j = 0; j < c[i].size(); ++j) c[i][j] -= b[i][j];
  }
  return c;
}

Rational projection_norm(const PolyBasis& basis, std::size_t k) {
  if (k < 1 || k > basis.size()) throw PreconditionError("projection index out of range");
  return operator_norm(basis, projection(basis.size(), k));
}

Rational basis_constant(const PolyBasis& basis) {
  Rational best = 0;
  for (std::size_t k = 1; k <= basis.size(); ++k) best = max_of(best, projection_norm(basis, k));
  return best;
}

std::vector<SpanFunctional> biorthogonal(const PolyBasis& basis) {
  std::vector<SpanFunctional> out;
  for (std::size_t j = 0; j < basis.size(); ++j) {
    SpanFunctional g(basis.size());
    g[j] = 1;
    out.push_back(std::move(g));
  }
  return out;
}

PolyBasis difference_sequence(const PolyBasis& basis) {
  std::vector<Vec> e;
  for (std::size_t j = 0; j < basis.size(); ++j) {
    Vec v = basis[j];
    if (j > 0) {
      for (std::size_t i = 0; i < v.size(); ++i) v[i] -= basis[j - 1][i];
    }
    e.push_back(std::move(v));
  }
  return PolyBasis(basis.space(), std::move(e));
}

SpanFunctional summing_functional(const PolyBasis& basis) { return SpanFunctional(basis.size(), Rational(1)); }

std::vector<SpanFunctional> difference_biorthogonal(const PolyBasis& basis) {
  PolyBasis e = difference_sequence(basis);
  const std::size_t n = basis.size();
  // e_k*(b_j) is the k-th coordinate of b_j in the difference basis
  std::vector<SpanFunctional> out(n, SpanFunctional(n));
  for (std::size_t j = 0; j < n; ++j) {
    Vec d = e.coordinates(basis[j]);
    for (std::size_t k = 0; k < n; ++k) out[k][j] = d[k];
  }
  return out;
}

std::vector<Matrix> difference_projections(const PolyBasis& basis) {
  PolyBasis e = difference_sequence(basis);
  const std::size_t n = basis.size();
  std::vector<Matrix> out;
  for (std::size_t k = 0; k <= n; ++k) {
    Matrix q = zero_matrix(n);
    for (std::size_t j = 0; j < n; ++j) {
      Vec d = e.coordinates(basis[j]);
      for (std::size_t i = k; i < n; ++i) d[i] = 0;
      Vec c = basis.coordinates(e.combine(d));
      for (std::size_t l = 0; l < n; ++l) q[l][j] = c[l];
    }
    out.push_back(std::move(q));
  }
  return out;
}

IdentityReport check_identities(const PolyBasis& basis) {
  const std::size_t n = basis.size();
  if (n < 2) throw PreconditionError("identity checks need at least two basis vectors");
  IdentityReport rep;
  std::vector<SpanFunctional> bstar = biorthogonal(basis);
  std::vector<SpanFunctional> estar = difference_biorthogonal(basis);
  std::vector<Matrix> q = difference_projections(basis);  // q[k] = Q_k, q[0] = 0
  SpanFunctional s = summing_functional(basis);

  rep.difference_dual = true;
  for (std::size_t k = 0; k < n; ++k) {
    SpanFunctional rhs = s;
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < n; ++j) rhs[j] -= bstar[i][j];
    }
    rep.difference_dual = rep.difference_dual && rhs == estar[k];
  }

  rep.q_split = true;
  for (std::size_t k = 1; k <= n; ++k) {
    rep.q_split = rep.q_split && q[k] == projection(n, k - 1) + rank_one(estar[k - 1], k - 1);
  }
  rep.p_recovery = true;
  for (std::size_t k = 0; k < n; ++k) {
    rep.p_recovery = rep.p_recovery && projection(n, k) == q[k + 1] - rank_one(estar[k], k);
  }

  rep.biorthogonal_difference = true;
  for (std::size_t j = 0; j < n; ++j) {
    SpanFunctional rhs = estar[j];
    if (j + 1 < n) {
      for (std::size_t l = 0; l < n; ++l) rhs[l] -= estar[j + 1][l];
    }
    rep.biorthogonal_difference = rep.biorthogonal_difference && rhs == bstar[j];
  }

  rep.lambda = basis_constant(basis);
  rep.s_norm = functional_norm(basis, s);
  rep.max_dual_norm = 0;
  for (const SpanFunctional& f : estar) rep.max_dual_norm = max_of(rep.max_dual_norm, functional_norm(basis, f));
  rep.max_q_norm = 0;
  for (std::size_t k = 1; k <= n; ++k) rep.max_q_norm = max_of(rep.max_q_norm, operator_norm(basis, q[k]));
  rep.max_b_norm = 0;
  for (const Vec& b : basis.vectors()) rep.max_b_norm = max_of(rep.max_b_norm, norm(basis.space(), b));
  rep.dual_bound = rep.max_dual_norm <= rep.s_norm * (1 + rep.lambda);
  rep.projection_bound = rep.max_q_norm <= rep.lambda + (1 + rep.lambda) * rep.s_norm * rep.max_b_norm;
  return rep;
}

Rational wuc_norm(const PolySpace& space, const std::vector<Vec>& vectors) {
  for (const Vec& v : vectors) {
    if (v.size() != space.dim) throw InputError("vector length does not match the dimension");
  }
  Rational best = 0;
  for (const Vec& phi : dual_vertices(space)) {
    Rational sum = 0;
    for (const Vec& x : vectors) sum += abs_value(dot(phi, x));
    best = max_of(best, sum);
  }
  return best;
}

Rational duc_norm(const PolySpace& space, const std::vector<Vec>& vectors) {
  std::vector<Vec> diffs;
  for (std::size_t j = 0; j < vectors.size(); ++j) {
    Vec d = vectors[j];
    if (j > 0) {
      for (std::size_t i = 0; i < d.size() && i < vectors[j - 1].size(); ++i) d[i] -= vectors[j - 1][i];
    }
    diffs.push_back(std::move(d));
  }
  return wuc_norm(space, diffs);
}

SandwichReport sandwich_check(const PolyBasis& basis) {
  const std::size_t n = basis.size();
  if (n > kMaxL1Dim) throw PreconditionError("cube vertex enumeration is capped at dimension 12");
  PolyBasis e = difference_sequence(basis);
  SandwichReport rep;
  rep.lambda_star = 0;
  for (const SpanFunctional& f : difference_biorthogonal(basis)) {
    rep.lambda_star = max_of(rep.lambda_star, functional_norm(basis, f));
  }
  rep.wuc = wuc_norm(basis.space(), e.vectors());

  rep.max_norm = 0;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    Vec c(n);
    for (std::size_t i = 0; i < n; ++i) c[i] = (mask >> i) & 1 ? -1 : 1;
    rep.max_norm = max_of(rep.max_norm, norm(basis.space(), e.combine(c)));
  }

  std::optional<Rational> min_norm;
  for (std::size_t i = 0; i < n; ++i) {
    lp::LinearProgram prog;
    std::vector<std::size_t> c(n);
    for (std::size_t j = 0; j < n; ++j) {
      Rational lo = j == i ? Rational(1) : Rational(-1);
      c[j] = prog.add_variable("c" + std::to_string(j), lo, Rational(1));
    }
    std::size_t tau = prog.add_variable("tau");
    add_norm_bound(prog, basis.space().norm, coordinate_forms(e.vectors(), c, basis.space().dim), tau);
    prog.set_objective(lp::Direction::Minimize, {{tau, 1}});
    Rational v = optimum(prog);
    if (!min_norm || v < *min_norm) min_norm = v;
  }
  rep.min_norm = *min_norm;
  rep.lower_holds = rep.min_norm * rep.lambda_star >= 1;
  rep.upper_holds = rep.max_norm <= rep.wuc;
  return rep;
}

ConvexBlocks convex_block(const PolySpace& space, const std::vector<Vec>& vectors,
                          const std::vector<std::size_t>& sizes, const std::vector<Vec>& weights) {
  if (sizes.size() != weights.size()) throw InputError("one weight list per block is required");
  std::size_t covered = 0;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] == 0) throw InputError("empty block");
    if (weights[i].size() != sizes[i]) throw InputError("block " + std::to_string(i + 1) + " has the wrong number of weights");
    Rational sum = 0;
    for (const Rational& w : weights[i]) {
      if (w < 0) throw InputError("negative weight in block " + std::to_string(i + 1));
      sum += w;
    }
    if (sum != 1) throw InputError("weights of block " + std::to_string(i + 1) + " do not sum to 1");
    covered += sizes[i];
  }
  if (covered > vectors.size()) throw InputError("blocks run past the last vector");
  for (const Vec& v : vectors) {
    if (v.size() != space.dim) throw InputError("vector length does not match the dimension");
  }
  const std::size_t m = space.dim;

  std::vector<Vec> e(covered, Vec(m));
  for (std::size_t j = 0; j < covered; ++j) {
    for (std::size_t i = 0; i < m; ++i) e[j][i] = vectors[j][i] - (j > 0 ? vectors[j - 1][i] : Rational(0));
  }
  auto axpy = [&](Vec& acc, const Rational& t, const Vec& x) {
    for (std::size_t i = 0; i < m; ++i) acc[i] += t * x[i];
  };

  ConvexBlocks out;
  out.representation_exact = true;
  std::size_t start = 0;
  for (std::size_t b = 0; b < sizes.size(); ++b) {
    Vec u(m);
    std::vector<Rational> rho(sizes[b]);
    for (std::size_t j = 0; j < sizes[b]; ++j) axpy(u, weights[b][j], vectors[start + j]);
    Rational tail = 0;
    for (std::size_t j = sizes[b]; j-- > 0;) {
      tail += weights[b][j];
      rho[j] = tail;
    }
    // u = sum_{j<start} e_j + sum_{j in block} rho_j e_j
    Vec expanded(m);
    for (std::size_t j = 0; j < start; ++j) axpy(expanded, 1, e[j]);
    for (std::size_t j = 0; j < sizes[b]; ++j) axpy(expanded, rho[j], e[start + j]);
    out.representation_exact = out.representation_exact && expanded == u;
    if (b > 0) {
      // u_b - u_{b-1} = sum over the previous block of (1 - rho) e + sum over this block of rho e
      Vec diff(m);
      std::size_t prev_start = start - sizes[b - 1];
      for (std::size_t j = 0; j < sizes[b - 1]; ++j) axpy(diff, 1 - out.rho[b - 1][j], e[prev_start + j]);
      for (std::size_t j = 0; j < sizes[b]; ++j) axpy(diff, rho[j], e[start + j]);
      Vec actual = u;
      axpy(actual, -1, out.blocks[b - 1]);
      out.representation_exact = out.representation_exact && diff == actual;
    }
    out.blocks.push_back(std::move(u));
    out.rho.push_back(std::move(rho));
    start += sizes[b];
  }
  out.duc_blocks = duc_norm(space, out.blocks);
  out.duc_original = duc_norm(space, std::vector<Vec>(vectors.begin(), vectors.begin() + covered));
  return out;
}

Rational eps_cc_value(const PolyBasis& basis, const std::vector<std::size_t>& zero_positions, std::size_t j0) {
  const std::size_t n = basis.size();
  if (j0 < 1 || j0 > n) throw PreconditionError("j0 is outside the basis");
  std::vector<bool> zero(n, false);
  for (std::size_t z : zero_positions) {
    if (z < 1 || z > n) throw PreconditionError("zero position " + std::to_string(z) + " is outside the basis");
    zero[z - 1] = true;
  }
  if (zero[j0 - 1]) throw PreconditionError("j0 is one of the zero positions");
  PolyBasis e = difference_sequence(basis);
  lp::LinearProgram prog;
  std::vector<std::size_t> c(n);
  for (std::size_t j = 0; j < n; ++j) {
    c[j] = zero[j] ? prog.add_variable("c" + std::to_string(j + 1), Rational(0), Rational(0))
                   : prog.add_variable("c" + std::to_string(j + 1), std::nullopt);
  }
  for (std::size_t k = 1; k <= n; ++k) {
    std::vector<Vec> head(e.vectors().begin(), e.vectors().begin() + k);
    std::vector<std::size_t> vars(c.begin(), c.begin() + k);
    add_norm_bound(prog, basis.space().norm, coordinate_forms(head, vars, basis.space().dim), std::nullopt);
  }
  prog.set_objective(lp::Direction::Maximize, {{c[j0 - 1], 1}});
  return optimum(prog);
}

PolyBasis unit_basis(NormKind norm, std::size_t dim) {
  std::vector<Vec> v(dim, Vec(dim));
  for (std::size_t j = 0; j < dim; ++j) v[j][j] = 1;
  return PolyBasis({dim, norm}, std::move(v));
}

PolyBasis partial_sum_basis(NormKind norm, std::size_t dim) {
  std::vector<Vec> v(dim, Vec(dim));
  for (std::size_t j = 0; j < dim; ++j) {
    for (std::size_t i = 0; i <= j; ++i) v[j][i] = 1;
  }
  return PolyBasis({dim, norm}, std::move(v));
}

}  // namespace oscal
