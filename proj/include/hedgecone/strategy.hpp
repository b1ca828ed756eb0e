#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hedgecone/deferred.hpp"
#include "hedgecone/model.hpp"
#include "hedgecone/polyhedron.hpp"

namespace hedgecone {

// Predictable portfolio process on a scenario tree: y0 is the initial endowment and hold[μ]
// the portfolio y_{t+1} set up at node μ (time t) and carried to its successors.
struct Strategy {
  Vec y0;
  std::vector<Vec> hold;
};

inline const Vec& incoming(const ScenarioTree& tree, const Strategy& s, std::size_t node) {
  auto p = tree.parent(node);
  return p ? s.hold.at(*p) : s.y0;
}

class NotHedging : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PricingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// min{x : x e^j ∈ P}; nullopt when unbounded below or infeasible.
inline std::optional<Rat> axis_minimum(const Polyhedron& p, std::size_t j) {
  if (p.is_empty()) return std::nullopt;
  LinearProgram lp(1);
  lp.objective = {Rat(1)};
  for (const auto& s : p.hrep().inequalities) lp.add_ge({s.normal.at(j)}, s.offset);
  for (const auto& s : p.hrep().equalities) lp.add_eq({s.normal.at(j)}, s.offset);
  LpResult r = solve_lp(lp);
  if (!r.optimal()) return std::nullopt;
  return r.optimum;
}

inline void check_currency(const Model& m, std::size_t j) {
  if (j >= m.dim()) throw std::invalid_argument("currency index " + std::to_string(j + 1) + " outside 1.." + std::to_string(m.dim()));
}

// Vertices of σ_j of a dual cone, used as deterministic fallback price vectors.
inline Vec slice_point(const Polyhedron& dual_cone, std::size_t j) {
  Polyhedron s = sigma_slice(dual_cone, j);
  if (s.is_empty()) throw PricingError("empty price slice; the model admits arbitrage");
  return s.vrep().points.front();
}

}  // namespace hedgecone
