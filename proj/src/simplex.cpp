#include "lns/simplex.hpp"

#include <algorithm>
#include <cmath>

namespace lns {

namespace {
constexpr double kDualTol = 1e-9;   // reduced cost threshold
constexpr double kPivotTol = 1e-9;  // smallest usable pivot element
constexpr double kRatioTieTol = 1e-9;
constexpr long kRefactorInterval = 100;
}  // namespace

BoundedSimplex::BoundedSimplex(const MipModel& model, double lp_tol) : lp_tol_(lp_tol) {
  n_ = model.num_vars();
  m_ = static_cast<int>(model.constraints.size());
  n_tot_ = n_ + m_;  // artificials appended by solve()

  cols_.assign(n_tot_, std::vector<double>(m_, 0.0));
  cost_.assign(n_tot_, 0.0);
  lower_.assign(n_tot_, 0.0);
  upper_.assign(n_tot_, 0.0);
  rhs_.assign(m_, 0.0);

  for (int j = 0; j < n_; ++j) {
    cost_[j] = model.variables[j].obj_coeff;
    lower_[j] = model.variables[j].lower;
    upper_[j] = model.variables[j].upper;
  }
  for (int r = 0; r < m_; ++r) {
    const LinearConstraint& c = model.constraints[r];
    for (const auto& [idx, coeff] : c.terms) cols_[idx][r] = coeff;
    rhs_[r] = c.rhs;
    // slack turns the row into an equality: a.x + s = b
    const int s = n_ + r;
    cols_[s][r] = 1.0;
    switch (c.sense) {
      case RowSense::LessEqual:
        lower_[s] = 0.0;
        upper_[s] = kInfinity;
        break;
      case RowSense::GreaterEqual:
        lower_[s] = -kInfinity;
        upper_[s] = 0.0;
        break;
      case RowSense::Equal:
        lower_[s] = 0.0;
        upper_[s] = 0.0;
        break;
    }
  }
}

void BoundedSimplex::compute_basic_values() {
  // x_B = Binv (b - sum_{nonbasic j} A_j x_j)
  std::vector<double> adj = rhs_;
  for (int j = 0; j < n_tot_; ++j) {
    if (state_[j] == VarState::Basic) continue;
    const double xj = value_[j];
    if (xj == 0.0) continue;
    const std::vector<double>& col = cols_[j];
    for (int r = 0; r < m_; ++r)
      if (col[r] != 0.0) adj[r] -= col[r] * xj;
  }
  for (int k = 0; k < m_; ++k) {
    double v = 0.0;
    const double* row = binv_.data() + static_cast<size_t>(k) * m_;
    for (int r = 0; r < m_; ++r) v += row[r] * adj[r];
    value_[basis_[k]] = v;
  }
}

std::vector<double> BoundedSimplex::dual_values(const std::vector<double>& cost) const {
  std::vector<double> y(m_, 0.0);
  for (int k = 0; k < m_; ++k) {
    const double cb = cost[basis_[k]];
    if (cb == 0.0) continue;
    const double* row = binv_.data() + static_cast<size_t>(k) * m_;
    for (int r = 0; r < m_; ++r) y[r] += cb * row[r];
  }
  return y;
}

double BoundedSimplex::reduced_cost(int j, const std::vector<double>& y,
                                    const std::vector<double>& cost) const {
  double d = cost[j];
  const std::vector<double>& col = cols_[j];
  for (int r = 0; r < m_; ++r)
    if (col[r] != 0.0) d -= y[r] * col[r];
  return d;
}

std::vector<double> BoundedSimplex::ftran(const std::vector<double>& col) const {
  std::vector<double> w(m_, 0.0);
  for (int k = 0; k < m_; ++k) {
    double v = 0.0;
    const double* row = binv_.data() + static_cast<size_t>(k) * m_;
    for (int r = 0; r < m_; ++r)
      if (col[r] != 0.0) v += row[r] * col[r];
    w[k] = v;
  }
  return w;
}

bool BoundedSimplex::refactorize() {
  // Gauss-Jordan inversion of the basis matrix with partial pivoting
  const int m = m_;
  std::vector<double> a(static_cast<size_t>(m) * m, 0.0);
  std::vector<double> inv(static_cast<size_t>(m) * m, 0.0);
  for (int k = 0; k < m; ++k) {
    const std::vector<double>& col = cols_[basis_[k]];
    for (int r = 0; r < m; ++r) a[static_cast<size_t>(r) * m + k] = col[r];
    inv[static_cast<size_t>(k) * m + k] = 1.0;
  }
  for (int c = 0; c < m; ++c) {
    int piv = -1;
    double best = kPivotTol;
    for (int r = c; r < m; ++r) {
      const double v = std::abs(a[static_cast<size_t>(r) * m + c]);
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (piv < 0) return false;
    if (piv != c) {
      for (int j = 0; j < m; ++j) {
        std::swap(a[static_cast<size_t>(piv) * m + j], a[static_cast<size_t>(c) * m + j]);
        std::swap(inv[static_cast<size_t>(piv) * m + j], inv[static_cast<size_t>(c) * m + j]);
      }
    }
    const double d = a[static_cast<size_t>(c) * m + c];
    for (int j = 0; j < m; ++j) {
      a[static_cast<size_t>(c) * m + j] /= d;
      inv[static_cast<size_t>(c) * m + j] /= d;
    }
    for (int r = 0; r < m; ++r) {
      if (r == c) continue;
      const double f = a[static_cast<size_t>(r) * m + c];
      if (f == 0.0) continue;
      for (int j = 0; j < m; ++j) {
        a[static_cast<size_t>(r) * m + j] -= f * a[static_cast<size_t>(c) * m + j];
        inv[static_cast<size_t>(r) * m + j] -= f * inv[static_cast<size_t>(c) * m + j];
      }
    }
  }
  // re-permute: inv currently maps to the column order of the elimination;
  // Gauss-Jordan with row swaps already yields B^{-1} in place
  binv_ = std::move(inv);
  pivots_since_refactor_ = 0;
  return true;
}

void BoundedSimplex::pivot(int leave_row, int entering, const std::vector<double>& w,
                           bool leave_to_upper) {
  const int leaving = basis_[leave_row];
  state_[leaving] = leave_to_upper ? VarState::AtUpper : VarState::AtLower;
  value_[leaving] = leave_to_upper ? upper_[leaving] : lower_[leaving];
  state_[entering] = VarState::Basic;
  basis_[leave_row] = entering;

  const double piv = w[leave_row];
  double* prow = binv_.data() + static_cast<size_t>(leave_row) * m_;
  for (int j = 0; j < m_; ++j) prow[j] /= piv;
  for (int i = 0; i < m_; ++i) {
    if (i == leave_row) continue;
    const double f = w[i];
    if (f == 0.0) continue;
    double* row = binv_.data() + static_cast<size_t>(i) * m_;
    for (int j = 0; j < m_; ++j) row[j] -= f * prow[j];
  }
  if (++pivots_since_refactor_ >= kRefactorInterval) refactorize();
}

SolveStatus BoundedSimplex::run_phase(const std::vector<double>& cost, bool phase_one,
                                      std::chrono::steady_clock::time_point deadline,
                                      long max_iters, long& iterations) {
  while (true) {
    if (std::chrono::steady_clock::now() >= deadline || iterations >= max_iters)
      return phase_one ? SolveStatus::NoSolutionLimit : SolveStatus::FeasibleLimit;
    ++iterations;

    compute_basic_values();
    const std::vector<double> y = dual_values(cost);

    // Bland: smallest index with a favorable reduced cost
    int entering = -1;
    int dir = 0;
    for (int j = 0; j < n_tot_; ++j) {
      if (state_[j] == VarState::Basic) continue;
      if (lower_[j] == upper_[j]) continue;  // fixed
      const double d = reduced_cost(j, y, cost);
      if (state_[j] == VarState::AtLower && d < -kDualTol) {
        entering = j;
        dir = 1;
      } else if (state_[j] == VarState::AtUpper && d > kDualTol) {
        entering = j;
        dir = -1;
      } else if (state_[j] == VarState::FreeNonbasic && std::abs(d) > kDualTol) {
        entering = j;
        dir = d < 0.0 ? 1 : -1;
      }
      if (entering >= 0) break;
    }
    if (entering < 0) return SolveStatus::Optimal;

    const std::vector<double> w = ftran(cols_[entering]);

    // ratio test over the basics, Bland tie-break on the variable index
    double t_basic = kInfinity;
    int leave_row = -1;
    bool leave_to_upper = false;
    for (int k = 0; k < m_; ++k) {
      const double g = dir * w[k];
      const int bk = basis_[k];
      double t;
      bool to_upper;
      if (g > kPivotTol) {  // basic decreases toward its lower bound
        if (lower_[bk] == -kInfinity) continue;
        t = (value_[bk] - lower_[bk]) / g;
        to_upper = false;
      } else if (g < -kPivotTol) {  // basic increases toward its upper bound
        if (upper_[bk] == kInfinity) continue;
        t = (upper_[bk] - value_[bk]) / (-g);
        to_upper = true;
      } else {
        continue;
      }
      if (t < 0.0) t = 0.0;
      if (t < t_basic - kRatioTieTol ||
          (leave_row >= 0 && t <= t_basic + kRatioTieTol && bk < basis_[leave_row])) {
        t_basic = t;
        leave_row = k;
        leave_to_upper = to_upper;
      }
    }

    const double span = upper_[entering] - lower_[entering];  // inf for free/one-sided
    if (leave_row < 0 && span == kInfinity) {
      // nothing blocks: phase I objective is bounded below by zero, so this
      // can only happen in phase II
      return SolveStatus::Unbounded;
    }
    if (span < t_basic) {
      // bound flip, basis unchanged
      state_[entering] = dir > 0 ? VarState::AtUpper : VarState::AtLower;
      value_[entering] = dir > 0 ? upper_[entering] : lower_[entering];
      continue;
    }
    pivot(leave_row, entering, w, leave_to_upper);
  }
}

SimplexResult BoundedSimplex::solve(std::chrono::steady_clock::time_point deadline) {
  SimplexResult res;

  // start with every structural/slack nonbasic on a finite bound
  state_.assign(n_tot_ + m_, VarState::AtLower);
  value_.assign(n_tot_ + m_, 0.0);
  for (int j = 0; j < n_tot_; ++j) {
    if (lower_[j] != -kInfinity) {
      state_[j] = VarState::AtLower;
      value_[j] = lower_[j];
    } else if (upper_[j] != kInfinity) {
      state_[j] = VarState::AtUpper;
      value_[j] = upper_[j];
    } else {
      state_[j] = VarState::FreeNonbasic;
      value_[j] = 0.0;
    }
  }

  // one artificial per row carries the residual of the initial point
  std::vector<double> residual = rhs_;
  for (int j = 0; j < n_tot_; ++j) {
    if (value_[j] == 0.0) continue;
    for (int r = 0; r < m_; ++r)
      if (cols_[j][r] != 0.0) residual[r] -= cols_[j][r] * value_[j];
  }
  const int art_start = n_tot_;
  cols_.resize(art_start + m_, std::vector<double>(m_, 0.0));
  cost_.resize(art_start + m_, 0.0);
  lower_.resize(art_start + m_, 0.0);
  upper_.resize(art_start + m_, kInfinity);
  std::vector<double> phase1_cost(art_start + m_, 0.0);
  basis_.assign(m_, 0);
  binv_.assign(static_cast<size_t>(m_) * m_, 0.0);
  for (int r = 0; r < m_; ++r) {
    const double sgn = residual[r] >= 0.0 ? 1.0 : -1.0;
    const int a = art_start + r;
    cols_[a][r] = sgn;
    phase1_cost[a] = 1.0;
    basis_[r] = a;
    state_[a] = VarState::Basic;
    value_[a] = std::abs(residual[r]);
    binv_[static_cast<size_t>(r) * m_ + r] = sgn;  // diag(sgn) inverts itself
  }
  n_tot_ = art_start + m_;

  const long max_iters = 20000 + 500L * n_tot_;
  res.iterations = 0;

  SolveStatus s = run_phase(phase1_cost, /*phase_one=*/true, deadline, max_iters, res.iterations);
  if (s != SolveStatus::Optimal) {
    res.status = s == SolveStatus::Unbounded ? SolveStatus::Error : s;
    return res;
  }
  compute_basic_values();
  double infeas = 0.0;
  double bnorm = 0.0;
  for (int r = 0; r < m_; ++r) {
    infeas += std::abs(value_[art_start + r]);
    bnorm += std::abs(rhs_[r]);
  }
  if (infeas > lp_tol_ * (1.0 + bnorm) * 10.0) {
    res.status = SolveStatus::Infeasible;
    return res;
  }

  // drive leftover artificials out of the basis where possible, then pin
  // every artificial at zero for phase II
  for (int k = 0; k < m_; ++k) {
    if (basis_[k] < art_start) continue;
    int repl = -1;
    std::vector<double> w;
    for (int j = 0; j < art_start; ++j) {
      if (state_[j] == VarState::Basic) continue;
      w = ftran(cols_[j]);
      if (std::abs(w[k]) > kPivotTol) {
        repl = j;
        break;
      }
    }
    if (repl >= 0) {
      // degenerate pivot: the artificial sits at zero
      pivot(k, repl, w, /*leave_to_upper=*/false);
      compute_basic_values();
    }
  }
  for (int a = art_start; a < n_tot_; ++a) {
    lower_[a] = 0.0;
    upper_[a] = 0.0;
    if (state_[a] != VarState::Basic) {
      state_[a] = VarState::AtLower;
      value_[a] = 0.0;
    }
  }

  s = run_phase(cost_, /*phase_one=*/false, deadline, max_iters, res.iterations);
  compute_basic_values();

  // snap basic values that drifted marginally outside their bounds
  for (int j = 0; j < art_start; ++j) {
    if (value_[j] < lower_[j] && value_[j] > lower_[j] - lp_tol_ * 10.0) value_[j] = lower_[j];
    if (value_[j] > upper_[j] && value_[j] < upper_[j] + lp_tol_ * 10.0) value_[j] = upper_[j];
  }

  res.x.assign(value_.begin(), value_.begin() + n_);
  res.objective = 0.0;
  for (int j = 0; j < n_; ++j) res.objective += cost_[j] * res.x[j];
  res.status = s;
  return res;
}

}  // namespace lns
