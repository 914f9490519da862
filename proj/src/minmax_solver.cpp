#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "swapcast/forecaster.hpp"

// Per-round minmax solve. For fixed expert weights q, with
//   s_i(y_hat) = sum_E (q(E,i,+) - q(E,i,-)) E(y_hat)
// the objective of playing p against the worst box outcome is
//   f(p) = sum p(y_hat) A(y_hat) + sum_i max(0, -sum p(y_hat) s_i(y_hat)),
//   A(y_hat) = sum_i s_i(y_hat) y_hat_i,
// where i ranges over free coordinates only (a pinned lift coordinate
// contributes y_hat_i - y_i = 0 identically). Minimizing f over the simplex
// is the LP
//   min p.A + sum u_i   s.t.  sum p = 1,  u_i + p.s_i >= 0,  p, u >= 0,
// which has just free_dims+1 rows, so a dense revised simplex solves it
// exactly in a handful of pivots. Dual feasibility hands back the box
// player's lambda in [0,1]^F, giving the reported duality gap
//   f(p) - h(lambda),  h(lambda) = min_yhat A(y_hat) - sum_i lambda_i s_i.
// Weak duality makes the gap a certificate no matter which route produced
// the pair. The no-regret dynamics below solve the same saddle point at a
// O(1/sqrt(k)) rate and serve as fallback and cross-check.

namespace swapcast::forecast {

namespace {

struct RoundLp {
  std::size_t n = 0;                   // grid points
  int F = 0;                           // free coordinates
  std::vector<double> A;               // [n]
  std::vector<std::vector<double>> s;  // [F][n]

  double objective(const std::vector<double>& p_dense) const {
    double f = 0;
    for (std::size_t j = 0; j < n; ++j) f += p_dense[j] * A[j];
    for (int i = 0; i < F; ++i) {
      double margin = 0;
      for (std::size_t j = 0; j < n; ++j) margin -= p_dense[j] * s[i][j];
      f += std::max(0.0, margin);
    }
    return f;
  }

  double dual_value(const std::vector<double>& lambda) const {
    double h = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
      double v = A[j];
      for (int i = 0; i < F; ++i) v -= lambda[i] * s[i][j];
      h = std::min(h, v);
    }
    return h;
  }
};

RoundLp build_round_lp(const ExpertWeights& q, const PredictionGrid& grid,
                       const events::EventFamily& family) {
  RoundLp lp;
  lp.n = grid.size();
  lp.F = grid.free_dims();
  lp.A.assign(lp.n, 0.0);
  lp.s.assign(lp.F, std::vector<double>(lp.n, 0.0));
  for (std::size_t e = 0; e < family.size(); ++e) {
    const auto& members = family.event(e).members;
    for (int i = 0; i < lp.F; ++i) {
      const double w = q.net(e, i);
      if (w == 0.0) continue;
      auto& row = lp.s[i];
      for (const std::uint32_t idx : members) row[idx] += w;
    }
  }
  for (std::size_t j = 0; j < lp.n; ++j) {
    const auto pt = grid.point(j);
    double a = 0;
    for (int i = 0; i < lp.F; ++i) a += lp.s[i][j] * pt[i];
    lp.A[j] = a;
  }
  return lp;
}

MinmaxSolution package(const RoundLp& lp, const std::vector<double>& p_dense,
                       const std::vector<double>& lambda, double gap_tol,
                       int iterations) {
  MinmaxSolution sol;
  sol.value = lp.objective(p_dense);
  sol.gap = std::max(0.0, sol.value - lp.dual_value(lambda));
  sol.iterations = iterations;
  sol.certified = sol.gap <= gap_tol;
  for (std::size_t j = 0; j < lp.n; ++j) {
    if (p_dense[j] > 0.0) {
      sol.p.support.push_back(static_cast<std::uint32_t>(j));
      sol.p.weights.push_back(p_dense[j]);
    }
  }
  return sol;
}

// Dense revised simplex with Bland's rule. Columns: [0,n) grid points,
// [n,n+F) hinge variables u_i, [n+F,n+2F) slacks. Row 0 is sum p = 1.
class SimplexSolver {
 public:
  explicit SimplexSolver(const RoundLp& lp) : lp_(lp), m_(lp.F + 1) {}

  // Returns false on pivot-cap or numerical trouble.
  bool solve(std::vector<double>& p_out, std::vector<double>& lambda_out,
             int& pivots_out) {
    const std::size_t n = lp_.n;
    const int F = lp_.F;
    basis_.clear();
    basis_.push_back(0);  // p for grid point 0
    for (int i = 0; i < F; ++i)
      basis_.push_back(lp_.s[i][0] >= 0.0 ? n + F + i : n + i);

    std::vector<double> xb(m_), duals(m_);
    int pivots = 0;
    const int cap = 64 * (m_ + 2) + 256;
    while (true) {
      if (!refactorize()) return false;
      solve_basic(xb);
      compute_duals(duals);

      // Bland: smallest-index column with negative reduced cost.
      std::ptrdiff_t enter = -1;
      for (std::size_t j = 0; j < n + 2 * static_cast<std::size_t>(F); ++j) {
        if (is_basic(j)) continue;
        if (reduced_cost(j, duals) < -1e-10) {
          enter = static_cast<std::ptrdiff_t>(j);
          break;
        }
      }
      if (enter < 0) break;  // optimal

      std::vector<double> col(m_), d(m_);
      column(static_cast<std::size_t>(enter), col);
      apply_inverse(col, d);
      int leave = -1;
      double best_ratio = 0;
      for (int r = 0; r < m_; ++r) {
        if (d[r] <= 1e-12) continue;
        const double ratio = xb[r] / d[r];
        if (leave < 0 || ratio < best_ratio - 1e-15 ||
            (std::abs(ratio - best_ratio) <= 1e-15 &&
             basis_[r] < basis_[leave])) {
          leave = r;
          best_ratio = ratio;
        }
      }
      if (leave < 0) return false;  // unbounded: numerical trouble
      basis_[leave] = static_cast<std::size_t>(enter);
      if (++pivots > cap) return false;
    }

    p_out.assign(n, 0.0);
    double total = 0;
    for (int r = 0; r < m_; ++r) {
      if (basis_[r] < n && xb[r] > 0) {
        p_out[basis_[r]] = xb[r];
        total += xb[r];
      }
    }
    if (!(total > 0.5)) return false;
    for (auto& x : p_out) x /= total;

    lambda_out.assign(F, 0.0);
    for (int i = 0; i < F; ++i)
      lambda_out[i] = std::clamp(duals[1 + i], 0.0, 1.0);
    pivots_out = pivots;
    return true;
  }

 private:
  bool is_basic(std::size_t j) const {
    for (auto b : basis_)
      if (b == j) return true;
    return false;
  }

  double cost(std::size_t j) const {
    if (j < lp_.n) return lp_.A[j];
    if (j < lp_.n + static_cast<std::size_t>(lp_.F)) return 1.0;  // u_i
    return 0.0;                                                   // slack
  }

  void column(std::size_t j, std::vector<double>& col) const {
    std::fill(col.begin(), col.end(), 0.0);
    if (j < lp_.n) {
      col[0] = 1.0;
      for (int i = 0; i < lp_.F; ++i) col[1 + i] = lp_.s[i][j];
    } else if (j < lp_.n + static_cast<std::size_t>(lp_.F)) {
      col[1 + (j - lp_.n)] = 1.0;
    } else {
      col[1 + (j - lp_.n - lp_.F)] = -1.0;
    }
  }

  // Rebuilds inv_ = B^{-1} by Gauss-Jordan; m_ <= 4 keeps this cheap.
  bool refactorize() {
    std::vector<double> B(m_ * m_), col(m_);
    for (int c = 0; c < m_; ++c) {
      column(basis_[c], col);
      for (int r = 0; r < m_; ++r) B[r * m_ + c] = col[r];
    }
    inv_.assign(m_ * m_, 0.0);
    for (int r = 0; r < m_; ++r) inv_[r * m_ + r] = 1.0;
    for (int c = 0; c < m_; ++c) {
      int piv = -1;
      double best = 1e-11;
      for (int r = c; r < m_; ++r) {
        if (std::abs(B[r * m_ + c]) > best) {
          best = std::abs(B[r * m_ + c]);
          piv = r;
        }
      }
      if (piv < 0) return false;
      for (int k = 0; k < m_; ++k) {
        std::swap(B[c * m_ + k], B[piv * m_ + k]);
        std::swap(inv_[c * m_ + k], inv_[piv * m_ + k]);
      }
      const double scale = 1.0 / B[c * m_ + c];
      for (int k = 0; k < m_; ++k) {
        B[c * m_ + k] *= scale;
        inv_[c * m_ + k] *= scale;
      }
      for (int r = 0; r < m_; ++r) {
        if (r == c) continue;
        const double f = B[r * m_ + c];
        if (f == 0.0) continue;
        for (int k = 0; k < m_; ++k) {
          B[r * m_ + k] -= f * B[c * m_ + k];
          inv_[r * m_ + k] -= f * inv_[c * m_ + k];
        }
      }
    }
    return true;
  }

  void solve_basic(std::vector<double>& xb) const {
    // x_B = B^{-1} b with b = e_0; clamp tiny negatives from roundoff.
    for (int r = 0; r < m_; ++r) xb[r] = std::max(0.0, inv_[r * m_]);
  }

  void compute_duals(std::vector<double>& y) const {
    for (int c = 0; c < m_; ++c) {
      double v = 0;
      for (int r = 0; r < m_; ++r) v += cost(basis_[r]) * inv_[r * m_ + c];
      y[c] = v;
    }
  }

  double reduced_cost(std::size_t j, const std::vector<double>& y) const {
    double rc = cost(j);
    if (j < lp_.n) {
      rc -= y[0];
      for (int i = 0; i < lp_.F; ++i) rc -= y[1 + i] * lp_.s[i][j];
    } else if (j < lp_.n + static_cast<std::size_t>(lp_.F)) {
      rc -= y[1 + (j - lp_.n)];
    } else {
      rc += y[1 + (j - lp_.n - lp_.F)];
    }
    return rc;
  }

  void apply_inverse(const std::vector<double>& v,
                     std::vector<double>& out) const {
    for (int r = 0; r < m_; ++r) {
      double acc = 0;
      for (int c = 0; c < m_; ++c) acc += inv_[r * m_ + c] * v[c];
      out[r] = acc;
    }
  }

  const RoundLp& lp_;
  int m_;
  std::vector<std::size_t> basis_;
  std::vector<double> inv_;
};

MinmaxSolution run_dynamics(const RoundLp& lp, double gap_tol) {
  const std::size_t n = lp.n;
  const int F = lp.F;
  const auto max_iters = static_cast<std::int64_t>(
      10.0 * std::ceil(1.0 / (gap_tol * gap_tol)));
  const double logn = std::log(static_cast<double>(std::max<std::size_t>(n, 2)));

  std::vector<double> cumloss(n, 0.0), p(n), psum(n, 0.0), loss(n);
  std::vector<double> margin_sum(F, 0.0), lambda_sum(F, 0.0);
  double a_sum = 0;

  std::vector<double> best_p(n, 1.0 / static_cast<double>(n));
  std::vector<double> best_lambda(F, 0.0);
  double best_gap = std::numeric_limits<double>::infinity();
  std::int64_t k = 0;

  auto check_average = [&]() {
    std::vector<double> pbar(n), lbar(F);
    for (std::size_t j = 0; j < n; ++j)
      pbar[j] = psum[j] / static_cast<double>(k);
    double f = a_sum / static_cast<double>(k);
    for (int i = 0; i < F; ++i) {
      f += std::max(0.0, margin_sum[i] / static_cast<double>(k));
      lbar[i] = lambda_sum[i] / static_cast<double>(k);
    }
    const double gap = f - lp.dual_value(lbar);
    if (gap < best_gap) {
      best_gap = gap;
      best_p = pbar;
      best_lambda = lbar;
    }
    return best_gap <= gap_tol;
  };

  while (k < max_iters) {
    ++k;
    // exponential weights over cumulative losses; loss range is <= 4
    const double eta =
        std::sqrt(8.0 * logn / static_cast<double>(k)) / 4.0;
    double cmin = cumloss[0];
    for (double c : cumloss) cmin = std::min(cmin, c);
    double z = 0;
    for (std::size_t j = 0; j < n; ++j) {
      p[j] = std::exp(-eta * (cumloss[j] - cmin));
      z += p[j];
    }
    for (std::size_t j = 0; j < n; ++j) p[j] /= z;

    double a_k = 0;
    for (std::size_t j = 0; j < n; ++j) {
      a_k += p[j] * lp.A[j];
      loss[j] = lp.A[j];
    }
    for (int i = 0; i < F; ++i) {
      double margin = 0;
      for (std::size_t j = 0; j < n; ++j) margin -= p[j] * lp.s[i][j];
      margin_sum[i] += margin;
      if (margin > 0) {  // box player's best response
        lambda_sum[i] += 1.0;
        for (std::size_t j = 0; j < n; ++j) loss[j] -= lp.s[i][j];
      }
    }
    a_sum += a_k;
    for (std::size_t j = 0; j < n; ++j) {
      psum[j] += p[j];
      cumloss[j] += loss[j];
    }
    if ((k & 15) == 0 || k == max_iters) {
      if (check_average()) break;
    }
  }
  if (k > 0 && best_gap > gap_tol) check_average();

  MinmaxSolution sol = package(lp, best_p, best_lambda, gap_tol,
                               static_cast<int>(std::min<std::int64_t>(
                                   k, std::numeric_limits<int>::max())));
  return sol;
}

}  // namespace

MinmaxSolution solve_round_minmax(const ExpertWeights& q,
                                  const PredictionGrid& grid,
                                  const events::EventFamily& family,
                                  double gap_tol) {
  if (!(gap_tol > 0)) throw std::invalid_argument("gap_tol must be positive");
  const RoundLp lp = build_round_lp(q, grid, family);
  SimplexSolver simplex(lp);
  std::vector<double> p_dense, lambda;
  int pivots = 0;
  if (simplex.solve(p_dense, lambda, pivots)) {
    MinmaxSolution sol = package(lp, p_dense, lambda, gap_tol, pivots);
    if (sol.certified) return sol;
    // An uncertified exact solve means roundoff; dynamics may still help.
    MinmaxSolution dyn = run_dynamics(lp, gap_tol);
    return dyn.gap < sol.gap ? dyn : sol;
  }
  return run_dynamics(lp, gap_tol);
}

MinmaxSolution solve_round_minmax_dynamics(const ExpertWeights& q,
                                           const PredictionGrid& grid,
                                           const events::EventFamily& family,
                                           double gap_tol) {
  if (!(gap_tol > 0)) throw std::invalid_argument("gap_tol must be positive");
  return run_dynamics(build_round_lp(q, grid, family), gap_tol);
}

}  // namespace swapcast::forecast
