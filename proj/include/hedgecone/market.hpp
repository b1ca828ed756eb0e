#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hedgecone/european.hpp"

namespace hedgecone {

// Node weights q (Q of the node's event) and prices S, per scenario-tree node.
struct PricingPair {
  std::vector<Rat> q;
  std::vector<Vec> S;
};

// Zero endowment strategy plus the non-negative terminal portfolio it dominates at each leaf.
struct ArbitrageStrategy {
  Strategy y;
  std::vector<Vec> terminal;
};

class ArbitrageDetected : public std::runtime_error {
 public:
  ArbitrageDetected(const std::string& what, std::optional<ArbitrageStrategy> w)
      : std::runtime_error(what), witness(std::move(w)) {}
  std::optional<ArbitrageStrategy> witness;
};

// max Σ x over zero-endowment strategies y with y_t − y_{t+1} ∈ K_t and y_T − x ∈ K_T, x ≥ 0, Σ x ≤ 1.
inline std::optional<ArbitrageStrategy> find_arbitrage(const ScenarioTree& tree, const Cones& c) {
  const std::size_t d = tree.model().dim();
  const std::size_t n = tree.size();
  // columns: hold per non-leaf node, then x per leaf
  std::vector<std::size_t> col(n, 0);
  std::size_t total = 0;
  for (std::size_t v = 0; v < n; ++v) {
    col[v] = total;
    total += d;
  }
  LinearProgram lp(total);
  lp.objective = zeros(total);
  Vec mass = zeros(total);
  for (std::size_t v = 0; v < n; ++v) {
    const HRep& h = c.K[tree.model_node(v)].hrep();
    auto p = tree.parent(v);
    // incoming − out ∈ K, where out is hold (non-leaf) or x (leaf)
    auto emit = [&](const Halfspace& s, bool eq) {
      Vec row = zeros(total);
      for (std::size_t i = 0; i < d; ++i) {
        if (p) row[col[*p] + i] += s.normal[i];
        row[col[v] + i] -= s.normal[i];
      }
      eq ? lp.add_eq(row, s.offset) : lp.add_ge(row, s.offset);
    };
    for (const auto& s : h.inequalities) emit(s, false);
    for (const auto& s : h.equalities) emit(s, true);
    if (tree.is_leaf(v))
      for (std::size_t i = 0; i < d; ++i) {
        lp.set_nonnegative(col[v] + i);
        lp.objective[col[v] + i] = -1;
        mass[col[v] + i] = 1;
      }
  }
  lp.add_le(mass, 1);
  LpResult r = solve_lp(lp);
  if (!r.optimal() || sgn(r.optimum) == 0) return std::nullopt;
  ArbitrageStrategy a;
  a.y.y0 = zeros(d);
  a.y.hold.assign(n, zeros(d));
  a.terminal.assign(n, zeros(d));
  for (std::size_t v = 0; v < n; ++v) {
    Vec val(r.witness.begin() + static_cast<long>(col[v]), r.witness.begin() + static_cast<long>(col[v] + d));
    (tree.is_leaf(v) ? a.terminal[v] : a.y.hold[v]) = std::move(val);
  }
  return a;
}

// True iff y is self-financing from y_0 = 0 and at some leaf dominates a non-zero x ≥ 0.
inline bool arbitrage_opportunity_definition_check(const ScenarioTree& tree, const Cones& c, const Strategy& y) {
  const std::size_t d = tree.model().dim();
  if (!is_zero(y.y0)) return false;
  for (std::size_t v = 0; v < tree.size(); ++v) {
    if (tree.is_leaf(v)) continue;
    if (!member(c.K[tree.model_node(v)], incoming(tree, y, v) - y.hold[v])) return false;
  }
  for (std::size_t leaf : tree.leaves()) {
    // max Σ x with x ≥ 0, y_T − x ∈ K_T, Σ x ≤ 1
    LinearProgram lp(d);
    lp.objective = Vec(d, Rat(-1));
    for (std::size_t i = 0; i < d; ++i) lp.set_nonnegative(i);
    detail::add_cone_constraints(lp, c.K[tree.model_node(leaf)], 0, -incoming(tree, y, leaf), -1);
    lp.add_le(Vec(d, Rat(1)), 1);
    LpResult r = solve_lp(lp);
    if (r.optimal() && sgn(r.optimum) < 0) return true;
  }
  return false;
}

// Equivalent martingale pair maximizing the smallest node weight; throws ArbitrageDetected otherwise.
inline PricingPair check_no_arbitrage(const ScenarioTree& tree, const Cones& c, std::size_t j = 0) {
  check_currency(tree.model(), j);
  detail::RhoLayout L = detail::rho_layout(tree, c);
  const std::size_t m = L.total;
  LinearProgram lp(m + 1);
  lp.objective = zeros(m + 1);
  lp.objective[m] = -1;
  detail::add_martingale_constraints(lp, tree, L, j);
  for (std::size_t v = 0; v < tree.size(); ++v) {
    Vec row = zeros(m + 1);
    detail::add_rho(row, L, v, j, 1);
    row[m] = -1;
    lp.add_ge(row, 0);
  }
  LpResult r = solve_lp(lp);
  if (!r.optimal() || sgn(r.optimum) >= 0) {
    auto w = find_arbitrage(tree, c);
    throw ArbitrageDetected("arbitrage detected: no equivalent martingale pair exists", std::move(w));
  }
  std::vector<Vec> rho = detail::rho_values(tree, L, r.witness);
  PricingPair p;
  for (const Vec& x : rho) {
    p.q.push_back(x[j]);
    p.S.push_back(Rat(1 / x[j]) * x);
  }
  return p;
}

enum class DualAgainst { K, Q };

// Martingale identities q(μ)S(μ) = Σ q(ν)S(ν), q_root = 1, q ≥ 0 and S ∈ K* (or Q*) \ {0} at every node.
inline bool verify_pair(const ScenarioTree& tree, const Cones& c, const PricingPair& p, DualAgainst against) {
  const std::size_t n = tree.size();
  const std::size_t d = tree.model().dim();
  if (p.q.size() != n || p.S.size() != n) return false;
  if (p.q[0] != 1) return false;
  for (std::size_t v = 0; v < n; ++v) {
    if (sgn(p.q[v]) < 0 || p.S[v].size() != d || is_zero(p.S[v])) return false;
    const auto& cones = against == DualAgainst::K ? c.K_dual : c.Q_dual;
    if (!member(cones[tree.model_node(v)], p.S[v])) return false;
    if (tree.is_leaf(v)) continue;
    Rat qs = 0;
    Vec ss = zeros(d);
    for (std::size_t k : tree.children(v)) {
      qs += p.q[k];
      ss += p.q[k] * p.S[k];
    }
    if (qs != p.q[v] || ss != p.q[v] * p.S[v]) return false;
  }
  return true;
}

}  // namespace hedgecone
