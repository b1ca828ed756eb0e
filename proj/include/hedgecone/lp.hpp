#pragma once

#include <optional>
#include <vector>

#include "hedgecone/rational.hpp"

namespace hedgecone {

// normal·x >= offset (or == offset when used as an equality)
struct Halfspace {
  Vec normal;
  Rat offset;
};

enum class LpStatus { optimal, infeasible, unbounded };
enum class Sense { minimize, maximize };

struct LinearProgram {
  std::size_t num_vars = 0;
  Vec objective;
  Sense sense = Sense::minimize;
  std::vector<Halfspace> inequalities;
  std::vector<Halfspace> equalities;
  std::vector<bool> nonnegative;  // empty: all variables free

  explicit LinearProgram(std::size_t n = 0) : num_vars(n), objective(zeros(n)) {}

  void add_ge(Vec a, Rat b) { inequalities.push_back({std::move(a), std::move(b)}); }
  void add_le(const Vec& a, const Rat& b) { inequalities.push_back({-a, -b}); }
  void add_eq(Vec a, Rat b) { equalities.push_back({std::move(a), std::move(b)}); }
  void set_nonnegative(std::size_t i) {
    if (nonnegative.empty()) nonnegative.assign(num_vars, false);
    nonnegative.at(i) = true;
  }
};

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  Rat optimum;
  Vec witness;
  bool optimal() const { return status == LpStatus::optimal; }
};

namespace detail {

// Dense two-phase tableau simplex, Bland's rule throughout.
class Tableau {
 public:
  Tableau(std::vector<std::vector<Rat>> rows, Vec rhs, std::size_t num_cols)
      : m_(rows.size()), n_(num_cols), a_(std::move(rows)), rhs_(std::move(rhs)) {}

  // Returns false when the phase 1 optimum is positive.
  bool phase_one(std::size_t num_structural) {
    // columns [0, num_structural) are real, then one artificial per row
    std::size_t total = num_structural + m_;
    for (std::size_t i = 0; i < m_; ++i) {
      a_[i].resize(total);
      a_[i][num_structural + i] = 1;
    }
    n_ = total;
    basis_.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) basis_[i] = num_structural + i;
    cost_.assign(n_, Rat(0));
    obj_ = 0;
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < num_structural; ++j)
        if (sgn(a_[i][j]) != 0) cost_[j] -= a_[i][j];
      obj_ -= rhs_[i];
    }
    allowed_ = n_;
    run();
    if (sgn(obj_) != 0) return false;
    // drive artificials out of the basis, dropping redundant rows
    for (std::size_t i = 0; i < m_;) {
      if (basis_[i] < num_structural) {
        ++i;
        continue;
      }
      std::size_t col = n_;
      for (std::size_t j = 0; j < num_structural; ++j)
        if (sgn(a_[i][j]) != 0) {
          col = j;
          break;
        }
      if (col == n_) {
        a_.erase(a_.begin() + static_cast<std::ptrdiff_t>(i));
        rhs_.erase(rhs_.begin() + static_cast<std::ptrdiff_t>(i));
        basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(i));
        --m_;
        continue;
      }
      pivot(i, col);
      ++i;
    }
    for (auto& row : a_) row.resize(num_structural);
    n_ = num_structural;
    allowed_ = n_;
    return true;
  }

  // Returns false when unbounded.
  bool phase_two(const Vec& c) {
    cost_ = c;
    obj_ = 0;
    for (std::size_t i = 0; i < m_; ++i) {
      const Rat& cb = c[basis_[i]];
      if (sgn(cb) == 0) continue;
      for (std::size_t j = 0; j < n_; ++j)
        if (sgn(a_[i][j]) != 0) cost_[j] -= cb * a_[i][j];
      obj_ -= cb * rhs_[i];
    }
    return run();
  }

  Rat objective_value() const { return -obj_; }

  Vec solution() const {
    Vec x = zeros(n_);
    for (std::size_t i = 0; i < m_; ++i) x[basis_[i]] = rhs_[i];
    return x;
  }

 private:
  bool run() {
    for (;;) {
      std::size_t enter = allowed_;
      for (std::size_t j = 0; j < allowed_; ++j)
        if (sgn(cost_[j]) < 0) {
          enter = j;
          break;
        }
      if (enter == allowed_) return true;
      std::size_t leave = m_;
      Rat best;
      for (std::size_t i = 0; i < m_; ++i) {
        if (sgn(a_[i][enter]) <= 0) continue;
        Rat ratio = rhs_[i] / a_[i][enter];
        if (leave == m_ || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == m_) return false;
      pivot(leave, enter);
    }
  }

  void pivot(std::size_t r, std::size_t c) {
    std::vector<Rat>& pr = a_[r];
    Rat inv = 1 / pr[c];
    std::vector<std::size_t> nz;
    for (std::size_t j = 0; j < n_; ++j)
      if (sgn(pr[j]) != 0) {
        if (j != c) pr[j] *= inv;
        nz.push_back(j);
      }
    pr[c] = 1;
    rhs_[r] *= inv;
    auto eliminate = [&](std::vector<Rat>& row, Rat& rhs) {
      if (sgn(row[c]) == 0) return;
      Rat f = row[c];
      for (std::size_t j : nz) row[j] -= f * pr[j];
      if (sgn(rhs_[r]) != 0) rhs -= f * rhs_[r];
    };
    for (std::size_t i = 0; i < m_; ++i)
      if (i != r) eliminate(a_[i], rhs_[i]);
    eliminate(cost_, obj_);
    basis_[r] = c;
  }

  std::size_t m_, n_;
  std::size_t allowed_ = 0;
  std::vector<std::vector<Rat>> a_;
  Vec rhs_;
  Vec cost_;
  Rat obj_;
  std::vector<std::size_t> basis_;
};

}  // namespace detail

inline LpResult solve_lp(const LinearProgram& lp) {
  const std::size_t n = lp.num_vars;
  if (lp.objective.size() != n) throw std::invalid_argument("objective dimension mismatch");
  for (const auto& h : lp.inequalities)
    if (h.normal.size() != n) throw std::invalid_argument("constraint dimension mismatch");
  for (const auto& h : lp.equalities)
    if (h.normal.size() != n) throw std::invalid_argument("constraint dimension mismatch");
  auto nonneg = [&](std::size_t i) { return !lp.nonnegative.empty() && lp.nonnegative[i]; };

  // column layout: per variable x+ (and x- when free), then one surplus per inequality
  std::vector<std::size_t> plus(n), minus(n, SIZE_MAX);
  std::size_t cols = 0;
  for (std::size_t i = 0; i < n; ++i) {
    plus[i] = cols++;
    if (!nonneg(i)) minus[i] = cols++;
  }
  const std::size_t first_surplus = cols;
  cols += lp.inequalities.size();

  const std::size_t m = lp.inequalities.size() + lp.equalities.size();
  std::vector<std::vector<Rat>> rows(m, std::vector<Rat>(cols));
  Vec rhs(m);
  std::size_t r = 0;
  auto fill = [&](const Halfspace& h) {
    for (std::size_t i = 0; i < n; ++i) {
      if (sgn(h.normal[i]) == 0) continue;
      rows[r][plus[i]] = h.normal[i];
      if (minus[i] != SIZE_MAX) rows[r][minus[i]] = -h.normal[i];
    }
    rhs[r] = h.offset;
  };
  for (std::size_t k = 0; k < lp.inequalities.size(); ++k, ++r) {
    fill(lp.inequalities[k]);
    rows[r][first_surplus + k] = -1;
  }
  for (const auto& h : lp.equalities) {
    fill(h);
    ++r;
  }
  for (std::size_t i = 0; i < m; ++i)
    if (sgn(rhs[i]) < 0) {
      for (auto& v : rows[i]) v = -v;
      rhs[i] = -rhs[i];
    }

  detail::Tableau tab(std::move(rows), std::move(rhs), cols);
  LpResult result;
  if (!tab.phase_one(cols)) {
    result.status = LpStatus::infeasible;
    return result;
  }
  Vec c = zeros(cols);
  const bool maximize = lp.sense == Sense::maximize;
  for (std::size_t i = 0; i < n; ++i) {
    Rat ci = maximize ? Rat(-lp.objective[i]) : lp.objective[i];
    c[plus[i]] = ci;
    if (minus[i] != SIZE_MAX) c[minus[i]] = -ci;
  }
  if (!tab.phase_two(c)) {
    result.status = LpStatus::unbounded;
    return result;
  }
  Vec sol = tab.solution();
  result.status = LpStatus::optimal;
  result.witness = zeros(n);
  for (std::size_t i = 0; i < n; ++i) {
    result.witness[i] = sol[plus[i]];
    if (minus[i] != SIZE_MAX) result.witness[i] -= sol[minus[i]];
  }
  result.optimum = dot(lp.objective, result.witness);
  return result;
}

}  // namespace hedgecone
