#pragma once

#include <map>
#include <vector>

#include "hedgecone/model.hpp"
#include "hedgecone/parallel.hpp"
#include "hedgecone/polyhedron.hpp"

namespace hedgecone {

// Per model node: solvency cone K, its dual K*, deferred solvency cone Q and its dual Q*.
struct Cones {
  std::vector<Polyhedron> K, K_dual, Q, Q_dual;
};

inline std::vector<Polyhedron> solvency_cones(const Model& m) {
  return backward_induction<Polyhedron>(m, [&](std::size_t i, const auto&) { return solvency_cone(m.node(i).pi); });
}

// Q_T = K_T, Q_t = (∩_ν Q_{t+1}^ν) + K_t
inline std::vector<Polyhedron> deferred_cones(const Model& m, const std::vector<Polyhedron>& K) {
  return backward_induction<Polyhedron>(m, [&](std::size_t i, const std::vector<Polyhedron>& Q) {
    if (m.is_leaf(i)) return K[i];
    std::vector<Polyhedron> next;
    for (std::size_t s : m.successors(i)) next.push_back(Q[s]);
    return minkowski_sum(intersect_all(next), K[i]);
  });
}

// Q*_t = conv{Q*_{t+1}^ν} ∩ K*_t
inline std::vector<Polyhedron> deferred_duals(const Model& m, const std::vector<Polyhedron>& K_dual) {
  return backward_induction<Polyhedron>(m, [&](std::size_t i, const std::vector<Polyhedron>& D) {
    if (m.is_leaf(i)) return K_dual[i];
    Polyhedron hull = D[m.successors(i).front()];
    for (std::size_t s : m.successors(i)) hull = convex_hull_closed(hull, D[s]);
    return intersect(hull, K_dual[i]);
  });
}

inline Cones compute_cones(const Model& m, bool cross_check = false) {
  Cones c;
  c.K = solvency_cones(m);
  c.K_dual = backward_induction<Polyhedron>(m, [&](std::size_t i, const auto&) { return polar(c.K[i]); });
  c.Q = deferred_cones(m, c.K);
  c.Q_dual = deferred_duals(m, c.K_dual);
  if (cross_check) {
    for (std::size_t i = 0; i < m.size(); ++i)
      if (!(polar(c.Q[i]) == c.Q_dual[i]))
        throw GeometryError("internal: dual recursion disagrees with the polar of Q at node '" + m.node(i).id + "'");
  }
  return c;
}

class NotSolvent : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// hold[ν] is the portfolio carried out of tree node ν (y_{s+1} at time s); leaves hold 0.
struct LiquidationStrategy {
  std::size_t start = 0;
  Vec z;
  std::map<std::size_t, Vec> hold;
};

namespace detail {

inline void add_cone_constraints(LinearProgram& lp, const Polyhedron& cone, std::size_t offset, const Vec& shift,
                                 Rat sign = 1) {
  // sign * x[offset..offset+d) - shift must lie in the set
  const HRep& h = cone.hrep();
  const std::size_t d = cone.dim();
  auto row = [&](const Vec& a) {
    Vec r = zeros(lp.num_vars);
    for (std::size_t i = 0; i < d; ++i) r[offset + i] = sign * a[i];
    return r;
  };
  for (const auto& s : h.inequalities) lp.add_ge(row(s.normal), s.offset + dot(s.normal, shift));
  for (const auto& s : h.equalities) lp.add_eq(row(s.normal), s.offset + dot(s.normal, shift));
}

// Solve, retrying with a zero objective when the objective is unbounded over the feasible set.
inline LpResult solve_with_fallback(LinearProgram lp) {
  LpResult r = solve_lp(lp);
  if (r.status == LpStatus::unbounded) {
    lp.objective = zeros(lp.num_vars);
    r = solve_lp(lp);
  }
  return r;
}

}  // namespace detail

inline LiquidationStrategy liquidation_strategy(const ScenarioTree& tree, const Cones& cones, std::size_t start, const Vec& z) {
  const Model& m = tree.model();
  const std::size_t d = m.dim();
  if (!member(cones.Q[tree.model_node(start)], z))
    throw NotSolvent("portfolio " + to_string(z) + " is not deferred-solvent at node '" + tree.id(start) + "'");
  LiquidationStrategy out;
  out.start = start;
  out.z = z;
  std::vector<std::pair<std::size_t, Vec>> stack{{start, z}};
  while (!stack.empty()) {
    auto [v, zv] = std::move(stack.back());
    stack.pop_back();
    const std::size_t mv = tree.model_node(v);
    Vec w = zeros(d);
    if (!tree.is_leaf(v) && !member(cones.K[mv], zv)) {
      // w ∈ ∩ Q_children, zv − w ∈ K, minimize Σ(zv − w)
      LinearProgram lp(d);
      lp.objective = Vec(d, Rat(-1));
      for (std::size_t c : tree.children(v)) detail::add_cone_constraints(lp, cones.Q[tree.model_node(c)], 0, zeros(d));
      detail::add_cone_constraints(lp, cones.K[mv], 0, -zv, -1);
      LpResult r = detail::solve_with_fallback(std::move(lp));
      if (!r.optimal()) throw GeometryError("internal: liquidation split infeasible at node '" + tree.id(v) + "'");
      w = r.witness;
    }
    out.hold[v] = w;
    for (std::size_t c : tree.children(v)) stack.push_back({c, w});
  }
  return out;
}

// Rebalancing checks of a liquidation strategy; empty string when valid.
inline std::string check_liquidation(const ScenarioTree& tree, const Cones& cones, const LiquidationStrategy& s) {
  std::vector<std::size_t> todo{s.start};
  while (!todo.empty()) {
    std::size_t v = todo.back();
    todo.pop_back();
    auto it = s.hold.find(v);
    if (it == s.hold.end()) return "missing portfolio at node '" + tree.id(v) + "'";
    const Vec& in = v == s.start ? s.z : s.hold.at(*tree.parent(v));
    if (!member(cones.K[tree.model_node(v)], in - it->second)) return "rebalancing outside the solvency cone at node '" + tree.id(v) + "'";
    if (tree.is_leaf(v) && !is_zero(it->second)) return "non-zero terminal portfolio at node '" + tree.id(v) + "'";
    for (std::size_t c : tree.children(v)) todo.push_back(c);
  }
  return {};
}

}  // namespace hedgecone
