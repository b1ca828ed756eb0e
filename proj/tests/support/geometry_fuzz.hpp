#pragma once

#include <random>
#include <string>
#include <vector>

#include "hedgecone.hpp"

namespace hedgecone::testing {

inline Vec random_vec(std::mt19937_64& rng, std::size_t d, int lo = -4, int hi = 4) {
  std::uniform_int_distribution<int> c(lo, hi);
  Vec x(d);
  for (auto& e : x) e = make_rat(c(rng), std::uniform_int_distribution<int>(1, 3)(rng));
  return x;
}

inline Vec random_nonzero(std::mt19937_64& rng, std::size_t d) {
  for (;;) {
    Vec x = random_vec(rng, d);
    if (!is_zero(x)) return x;
  }
}

// Cone (even cases) or general polyhedron with up to 8 generators, d <= 4.
inline Polyhedron random_polyhedron(std::mt19937_64& rng, std::size_t k, bool force_cone = false) {
  const std::size_t d = 1 + k % 4;
  std::uniform_int_distribution<int> count(1, 8);
  VRep v;
  if (force_cone || k % 2 == 0) {
    v.points.push_back(zeros(d));
    int n = count(rng);
    for (int i = 0; i < n; ++i) v.rays.push_back(random_nonzero(rng, d));
    if (std::uniform_int_distribution<int>(0, 5)(rng) == 0) v.lines.push_back(random_nonzero(rng, d));
  } else {
    int n = count(rng);
    for (int i = 0; i < n; ++i) v.points.push_back(random_vec(rng, d));
    int r = std::uniform_int_distribution<int>(0, 2)(rng);
    for (int i = 0; i < r; ++i) v.rays.push_back(random_nonzero(rng, d));
  }
  return Polyhedron::canonical_from_vrep(d, std::move(v));
}

inline LinearProgram random_lp(std::mt19937_64& rng, std::size_t k) {
  const std::size_t n = 1 + k % 4;
  LinearProgram lp(n);
  lp.objective = random_vec(rng, n);
  lp.sense = k % 3 == 0 ? Sense::maximize : Sense::minimize;
  int rows = std::uniform_int_distribution<int>(1, 6)(rng);
  for (int i = 0; i < rows; ++i) lp.add_ge(random_vec(rng, n), Rat(std::uniform_int_distribution<int>(-5, 2)(rng)));
  if (k % 5 == 0) lp.add_eq(random_vec(rng, n), Rat(std::uniform_int_distribution<int>(-2, 2)(rng)));
  for (std::size_t i = 0; i < n; ++i)
    if (std::uniform_int_distribution<int>(0, 1)(rng)) lp.set_nonnegative(i);
  return lp;
}

inline bool same_result(const LpResult& a, const LpResult& b) {
  return a.status == b.status && (!a.optimal() || (a.optimum == b.optimum && a.witness == b.witness));
}

// One fuzz case: round trip, bipolarity (cones), membership against the LP route, LP determinism.
inline std::vector<std::string> geometry_case_violations(std::mt19937_64& rng, std::size_t k) {
  std::vector<std::string> bad;
  const std::string tag = " [case " + std::to_string(k) + "]";
  Polyhedron P = random_polyhedron(rng, k);
  const std::size_t d = P.dim();
  Polyhedron back = Polyhedron::canonical_from_hrep(d, P.hrep());
  if (!(back == P)) bad.push_back("round trip changed canonical form" + tag);
  for (const Vec& x : P.vrep().points)
    if (!member(back, x)) bad.push_back("round trip lost a point" + tag);
  for (const Vec& r : P.vrep().rays)
    if (!member_direction(back, r)) bad.push_back("round trip lost a ray" + tag);
  Polyhedron again = Polyhedron::canonical_from_vrep(d, back.vrep());
  if (!(again == P)) bad.push_back("generator round trip changed canonical form" + tag);

  Polyhedron C = random_polyhedron(rng, k, true);
  const Polyhedron Cs = polar(C);
  if (!(polar(Cs) == C)) bad.push_back("bipolarity fails" + tag);
  for (const Vec& y : Cs.vrep().rays)
    for (const Vec& x : C.vrep().rays)
      if (sgn(dot(x, y)) < 0) bad.push_back("polar generator has negative pairing" + tag);

  for (int i = 0; i < 4; ++i) {
    Vec x = random_vec(rng, d);
    if (member(P, x) != member_by_lp(P, x)) bad.push_back("member disagrees with LP feasibility at " + to_string(x) + tag);
  }

  LinearProgram lp = random_lp(rng, k);
  LpResult r1 = solve_lp(lp), r2 = solve_lp(lp);
  if (!same_result(r1, r2)) bad.push_back("LP not deterministic" + tag);
  if (r1.optimal()) {
    for (const auto& h : lp.inequalities)
      if (dot(h.normal, r1.witness) < h.offset) bad.push_back("LP witness infeasible" + tag);
    for (const auto& h : lp.equalities)
      if (dot(h.normal, r1.witness) != h.offset) bad.push_back("LP witness violates equality" + tag);
    if (dot(lp.objective, r1.witness) != r1.optimum) bad.push_back("LP optimum differs from witness value" + tag);
  }
  return bad;
}

}  // namespace hedgecone::testing
