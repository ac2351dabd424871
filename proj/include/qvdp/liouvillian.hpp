// Copyright 2026 The qvdp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/SVD>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "qvdp/core_hilbert.hpp"
#include "qvdp/density_matrix.hpp"
#include "qvdp/observables.hpp"
#include "qvdp/params.hpp"

namespace qvdp {

using SparseMatrix = Eigen::SparseMatrix<Complex>;

// Column stacking throughout: rho(m, n) lives at m + n * dim, so that
// vec(A rho B) = (B^T kron A) vec(rho).
inline int vec_index(int m, int n, int dim) { return m + n * dim; }

inline Vector vectorize(const Matrix& rho) {
  return Eigen::Map<const Vector>(rho.data(), rho.size());
}

inline Matrix unvectorize(const Vector& v, int dim) {
  return Eigen::Map<const Matrix>(v.data(), dim, dim);
}

/// H = delta a^dag a + Omega (a + a^dag) + eta (a^2 + a^dag^2), rotating frame.
inline Operator hamiltonian(const SystemParams& p, FockDim dim) {
  const Operator a = annihilation(dim);
  const Operator ad = a.adjoint();
  const Operator ops[] = {number_operator(dim), a + ad, a * a + ad * ad};
  const Complex scalars[] = {p.detuning, p.drive, p.squeeze};
  return linear_combination(ops, scalars);
}

class Liouvillian {
 public:
  Liouvillian(SystemParams params, FockDim dim, SparseMatrix m)
      : params_(params), dim_(dim), m_(std::move(m)) {
    m_.makeCompressed();
  }

  const SystemParams& params() const { return params_; }
  FockDim dim() const { return dim_; }
  const SparseMatrix& matrix() const { return m_; }
  Matrix dense() const { return Matrix(m_); }

  /// L[x] for an arbitrary (not necessarily Hermitian) operator x.
  Matrix apply(const Matrix& x) const {
    const Vector y = m_ * vectorize(x);
    return unvectorize(y, dim_.value());
  }

  /// Largest entry magnitude, used to scale constraint rows and tolerances.
  double scale() const {
    double s = 0.0;
    for (int k = 0; k < m_.outerSize(); ++k)
      for (SparseMatrix::InnerIterator it(m_, k); it; ++it) s = std::max(s, std::abs(it.value()));
    return s;
  }

 private:
  SystemParams params_;
  FockDim dim_;
  SparseMatrix m_;
};

namespace detail {

enum class Vectorization {
  column_stacking,
  // Mutation hook for tests: jump terms built as (B kron A) instead of (B^T kron A).
  missing_transpose,
};

class SuperoperatorBuilder {
 public:
  explicit SuperoperatorBuilder(int dim) : d_(dim) {}

  // s * vec(A rho)
  void left(const Matrix& a, Complex s) {
    for (const auto& [m, j, v] : nonzeros(a))
      for (int n = 0; n < d_; ++n) add(vec_index(m, n, d_), vec_index(j, n, d_), s * v);
  }

  // s * vec(rho B)
  void right(const Matrix& b, Complex s) {
    for (const auto& [k, n, v] : nonzeros(b))
      for (int m = 0; m < d_; ++m) add(vec_index(m, n, d_), vec_index(m, k, d_), s * v);
  }

  // s * vec(A rho B)
  void sandwich(const Matrix& a, const Matrix& b, Complex s, Vectorization conv) {
    const auto na = nonzeros(a);
    const auto nb = nonzeros(b);
    for (const auto& [m, j, va] : na) {
      for (const auto& [k, n, vb] : nb) {
        if (conv == Vectorization::column_stacking) {
          add(vec_index(m, n, d_), vec_index(j, k, d_), s * va * vb);
        } else {
          add(vec_index(m, k, d_), vec_index(j, n, d_), s * va * vb);
        }
      }
    }
  }

  // rate * (L rho L^dag - 1/2 {L^dag L, rho})
  void dissipator(const Matrix& jump, double rate, Vectorization conv) {
    if (rate == 0.0) return;
    const Matrix jd = jump.adjoint();
    const Matrix jdj = jd * jump;
    sandwich(jump, jd, rate, conv);
    left(jdj, -0.5 * rate);
    right(jdj, -0.5 * rate);
  }

  SparseMatrix finish() {
    const int n = d_ * d_;
    SparseMatrix out(n, n);
    out.setFromTriplets(triplets_.begin(), triplets_.end());
    out.prune(Complex(0.0, 0.0));
    return out;
  }

 private:
  struct Entry {
    int row;
    int col;
    Complex value;
  };

  static std::vector<Entry> nonzeros(const Matrix& a) {
    std::vector<Entry> out;
    for (int c = 0; c < a.cols(); ++c)
      for (int r = 0; r < a.rows(); ++r)
        if (a(r, c) != Complex(0.0, 0.0)) out.push_back({r, c, a(r, c)});
    return out;
  }

  void add(int row, int col, Complex v) { triplets_.emplace_back(row, col, v); }

  int d_;
  std::vector<Eigen::Triplet<Complex>> triplets_;
};

inline Liouvillian build_liouvillian(const SystemParams& p, FockDim dim, Vectorization conv) {
  p.validate();
  const int d = dim.value();
  const Operator a = annihilation(dim);
  const Matrix h = hamiltonian(p, dim).matrix();

  SuperoperatorBuilder b(d);
  b.left(h, -kI);
  b.right(h, kI);
  b.dissipator(a.adjoint().matrix(), p.pump, conv);
  b.dissipator(a.matrix() * a.matrix(), p.two_photon_loss, conv);
  b.dissipator(a.matrix(), p.loss, conv);
  return {p, dim, b.finish()};
}

}  // namespace detail

/// Superoperator of
///   d rho/dt = -i[H, rho] + gamma1 D[a^dag] + gamma2 D[a^2] + kappa D[a],
/// D[L] rho = L rho L^dag - (L^dag L rho + rho L^dag L)/2.
inline Liouvillian build_liouvillian(const SystemParams& p, FockDim dim) {
  return detail::build_liouvillian(p, dim, detail::Vectorization::column_stacking);
}

/// max_k |sum_n L[(n,n), k]|: zero iff the trace functional is a left null vector.
inline double trace_preservation_error(const Liouvillian& l) {
  const int d = l.dim().value();
  Vector colsum = Vector::Zero(d * d);
  for (int k = 0; k < l.matrix().outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(l.matrix(), k); it; ++it) {
      const int row = static_cast<int>(it.row());
      if (row % (d + 1) == 0) colsum(k) += it.value();
    }
  }
  return colsum.cwiseAbs().maxCoeff();
}

/// max |L[X^dag] - L[X]^dag| over the supplied test matrices.
inline double hermiticity_preservation_error(const Liouvillian& l, const std::vector<Matrix>& probes) {
  double worst = 0.0;
  for (const Matrix& x : probes) {
    const Matrix lhs = l.apply(x.adjoint());
    const Matrix rhs = l.apply(x).adjoint();
    worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
  }
  return worst;
}

struct SteadyState {
  DensityMatrix rho;
  double residual = 0.0;              // max |L vec(rho)|
  double hermitian_correction = 0.0;  // max |rho_raw - rho| removed by Hermitizing
  bool svd_fallback = false;
};

struct SteadyStateOptions {
  double residual_tol = 1e-10;
  int refinement_steps = 2;
  // Largest Fock dim for which the dense SVD fallback is attempted.
  int svd_fallback_max_dim = 40;
  // sigma_{n-2} / sigma_max below this counts as a second null direction.
  double degeneracy_tol = 1e-12;
};

namespace detail {

inline void reject_unbounded_gain(const SystemParams& p) {
  if (p.two_photon_loss == 0.0 && p.loss <= p.pump) {
    throw DivergentDynamics("steady_state: net single-photon gain (gamma1=" +
                            std::to_string(p.pump) + " >= kappa=" + std::to_string(p.loss) +
                            ") with gamma2=0 has no normalizable stationary state");
  }
}

inline Vector svd_null_vector(const Liouvillian& l, double degeneracy_tol) {
  Eigen::BDCSVD<Matrix> svd(l.dense(), Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const Eigen::Index n = sv.size();
  if (sv(n - 2) <= degeneracy_tol * sv(0)) {
    throw DegenerateSteadyState("steady_state: null space dimension > 1 (sigma_{n-2}=" +
                                std::to_string(sv(n - 2)) + ")");
  }
  return svd.matrixV().col(n - 1);
}

inline Vector constrained_solve(const Liouvillian& l, int refinement_steps, bool& ok) {
  const int d = l.dim().value();
  const int n = d * d;
  const double s = l.scale();
  std::vector<Eigen::Triplet<Complex>> trip;
  trip.reserve(l.matrix().nonZeros() + d);
  for (int k = 0; k < l.matrix().outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(l.matrix(), k); it; ++it)
      if (it.row() != 0) trip.emplace_back(static_cast<int>(it.row()), k, it.value());
  for (int j = 0; j < d; ++j) trip.emplace_back(0, vec_index(j, j, d), s);
  SparseMatrix a(n, n);
  a.setFromTriplets(trip.begin(), trip.end());
  a.makeCompressed();

  Vector rhs = Vector::Zero(n);
  rhs(0) = s;

  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
  lu.analyzePattern(a);
  lu.factorize(a);
  if (lu.info() != Eigen::Success) {
    ok = false;
    return {};
  }
  Vector x = lu.solve(rhs);
  for (int i = 0; i < refinement_steps && x.allFinite(); ++i) x += lu.solve(rhs - a * x);
  ok = x.allFinite();
  return x;
}

}  // namespace detail

/// Unique unit-trace null vector of the Liouvillian.
///
/// One row of L is replaced by the trace constraint and the square system is
/// solved directly (sparse LU with iterative refinement). If the factorization
/// fails or the residual misses the tolerance, a dense SVD null-space solve is
/// tried for small dims. The result is Hermitized and renormalized.
inline SteadyState steady_state(const Liouvillian& l, const SteadyStateOptions& opts = {}) {
  detail::reject_unbounded_gain(l.params());
  const int d = l.dim().value();

  auto finish = [&](const Vector& x, bool fallback) {
    Matrix raw = unvectorize(x, d);
    raw /= raw.trace();
    Matrix herm = 0.5 * (raw + raw.adjoint());
    const double corr = (raw - herm).cwiseAbs().maxCoeff();
    herm /= herm.trace().real();
    const double res = (l.matrix() * vectorize(herm)).cwiseAbs().maxCoeff();
    return SteadyState{DensityMatrix::validated(std::move(herm)), res, corr, fallback};
  };

  bool ok = false;
  Vector x = detail::constrained_solve(l, opts.refinement_steps, ok);
  if (ok) {
    SteadyState s = finish(x, false);
    if (s.residual <= opts.residual_tol || d > opts.svd_fallback_max_dim) return s;
  }
  if (d > opts.svd_fallback_max_dim) {
    throw DegenerateSteadyState("steady_state: constrained solve is singular at dim " +
                                std::to_string(d) + " (null space dimension != 1?)");
  }
  return finish(detail::svd_null_vector(l, opts.degeneracy_tol), true);
}

/// Second-smallest singular value of L, i.e. how far the steady state is from
/// being degenerate. Dense SVD, so restricted to small dims.
inline double spectral_gap(const Liouvillian& l, int max_dim = 40) {
  if (l.dim().value() > max_dim) {
    throw ConfigError("spectral_gap: dim " + std::to_string(l.dim().value()) +
                      " too large for a dense SVD");
  }
  Eigen::BDCSVD<Matrix> svd(l.dense());
  const auto& sv = svd.singularValues();
  return sv(sv.size() - 2);
}

struct DimPolicy {
  int start = 5;
  int step = 4;
  int cap = 400;
  double tol = 1e-8;
  SteadyStateOptions solver{};
};

struct DimChoice {
  FockDim dim{FockDim::kMin};
  double top_population = 0.0;  // rho[d-1,d-1] + rho[d-2,d-2]
  double amplitude_change = 0.0;
  double sync_change = 0.0;
  int solves = 0;
};

/// Smallest Fock cutoff at which the steady state has converged: top two
/// levels hold < tol population and going to dim+4 changes N and S by < tol.
inline DimChoice choose_dim(const SystemParams& p, const DimPolicy& policy = {}) {
  p.validate();
  detail::reject_unbounded_gain(p);
  if (policy.cap < FockDim::kMin + policy.step) throw ConfigError("choose_dim: cap too small");

  struct Eval {
    double N, S, top;
  };
  std::map<int, Eval> cache;
  int solves = 0;
  auto eval = [&](int d) -> const Eval& {
    if (auto it = cache.find(d); it != cache.end()) return it->second;
    const FockDim fd(d);
    const SteadyState ss = steady_state(build_liouvillian(p, fd), policy.solver);
    ++solves;
    const double top = ss.rho.population(d - 1) + ss.rho.population(d - 2);
    return cache.emplace(d, Eval{amplitude(ss.rho), sync_measure(ss.rho).S, top}).first->second;
  };
  auto check = [&](int d, DimChoice& out) {
    if (d + policy.step > policy.cap) {
      throw DimCapExceeded("choose_dim: no converged cutoff below cap " +
                           std::to_string(policy.cap) + " for " + p.describe() +
                           " (last tried dim " + std::to_string(d) + ")");
    }
    const Eval& lo = eval(d);
    const Eval& hi = eval(d + policy.step);
    out = DimChoice{FockDim(d), lo.top, std::abs(hi.N - lo.N), std::abs(hi.S - lo.S), solves};
    return lo.top < policy.tol && out.amplitude_change < policy.tol &&
           out.sync_change < policy.tol;
  };

  DimChoice best;
  int failed = std::max(policy.start, FockDim::kMin) - 1;
  int d = failed + 1;
  while (!check(d, best)) {
    failed = d;
    d = std::max(d + policy.step, static_cast<int>(std::ceil(1.25 * d)));
  }
  int lo = failed + 1;
  int hi = d;
  DimChoice hi_choice = best;
  while (lo < hi) {
    const int mid = lo + (hi - lo) / 2;
    DimChoice c;
    if (check(mid, c)) {
      hi = mid;
      hi_choice = c;
    } else {
      lo = mid + 1;
    }
  }
  hi_choice.solves = solves;
  return hi_choice;
}

enum class EvolveMethod { automatic, matrix_exponential, adaptive };

struct EvolveOptions {
  EvolveMethod method = EvolveMethod::automatic;
  // automatic uses the dense exponential up to this Fock dim
  int dense_max_dim = 32;
  double rtol = 1e-10;
  double atol = 1e-13;
  double min_step = 1e-14;
  long max_steps = 20'000'000;
};

/// exp(L dt) as a dense matrix on Liouville space; reused for equally spaced
/// propagation.
class Propagator {
 public:
  Propagator(const Liouvillian& l, double dt) : dt_(dt), p_((l.dense() * dt).exp()) {}
  double dt() const { return dt_; }
  Vector step(const Vector& x) const { return p_ * x; }
  const Matrix& matrix() const { return p_; }

 private:
  double dt_;
  Matrix p_;
};

namespace detail {

// Dormand-Prince 5(4) with standard PI-free step control.
inline Vector integrate_adaptive(const SparseMatrix& l, Vector y, double t_end,
                                 const EvolveOptions& o) {
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  double t = 0.0;
  double norm_l = 0.0;
  for (int k = 0; k < l.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(l, k); it; ++it) norm_l = std::max(norm_l, std::abs(it.value()));
  double h = std::min(t_end, 0.1 / std::max(norm_l, 1e-300));
  Vector k1 = l * y;
  long steps = 0;
  while (t < t_end) {
    if (++steps > o.max_steps) {
      throw StiffnessError("evolve: exceeded " + std::to_string(o.max_steps) +
                           " adaptive steps; use the matrix-exponential method or a smaller dim");
    }
    h = std::min(h, t_end - t);
    if (h < o.min_step * std::max(1.0, t_end)) {
      throw StiffnessError("evolve: step size underflow at t=" + std::to_string(t) +
                           "; use the matrix-exponential method or a smaller dim");
    }
    const Vector k2 = l * (y + h * a21 * k1);
    const Vector k3 = l * (y + h * (a31 * k1 + a32 * k2));
    const Vector k4 = l * (y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const Vector k5 = l * (y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const Vector k6 = l * (y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const Vector y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const Vector k7 = l * y5;
    const Vector err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    double en = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      const double sc = o.atol + o.rtol * std::max(std::abs(y(i)), std::abs(y5(i)));
      en = std::max(en, std::abs(err(i)) / sc);
    }
    if (en <= 1.0) {
      t += h;
      y = y5;
      k1 = k7;
    }
    const double fac = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
    h *= fac;
  }
  return y;
}

}  // namespace detail

/// exp(L t)[x] for an arbitrary operator x (quantum-regression use included).
inline Matrix propagate(const Liouvillian& l, const Matrix& x0, double t, const EvolveOptions& o = {}) {
  if (!(t >= 0.0)) throw ConfigError("evolve: time must be >= 0");
  if (t == 0.0) return x0;
  const int d = l.dim().value();
  const bool dense = o.method == EvolveMethod::matrix_exponential ||
                     (o.method == EvolveMethod::automatic && d <= o.dense_max_dim);
  if (dense) return unvectorize(Propagator(l, t).step(vectorize(x0)), d);
  return unvectorize(detail::integrate_adaptive(l.matrix(), vectorize(x0), t, o), d);
}

inline DensityMatrix evolve(const Liouvillian& l, const DensityMatrix& rho0, double t,
                            const EvolveOptions& o = {}) {
  if (rho0.dim() != l.dim()) throw DimensionMismatch("evolve: state and Liouvillian dims differ");
  if (t == 0.0) return rho0;
  return DensityMatrix::validated(propagate(l, rho0.matrix(), t, o), {1e-9, 1e-9, 1e-8});
}

}  // namespace qvdp
