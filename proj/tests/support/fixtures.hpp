#pragma once

#include <initializer_list>
#include <string>
#include <vector>

#include "hedgecone.hpp"

namespace hedgecone::testing {

inline std::string data_path(const std::string& name) { return std::string(HEDGECONE_DATA_DIR) + "/" + name; }

inline Model toy_model() { return load_model(data_path("toy.json")); }

inline Vec v(std::initializer_list<Rat> xs) { return Vec(xs); }
inline Vec vs(std::initializer_list<const char*> xs) {
  Vec out;
  for (const char* x : xs) out.push_back(parse_rat(x));
  return out;
}

// Rows {a_1, ..., a_d, b} meaning a·x >= b.
inline Polyhedron hpoly(std::size_t d, std::initializer_list<std::initializer_list<Rat>> rows) {
  HRep h;
  for (const auto& r : rows) {
    std::vector<Rat> all(r);
    h.inequalities.push_back({Vec(all.begin(), all.begin() + static_cast<long>(d)), all[d]});
  }
  return Polyhedron::canonical_from_hrep(d, std::move(h));
}

inline Polyhedron cone_of(std::size_t d, std::vector<Vec> rays) {
  return Polyhedron::canonical_from_vrep(d, VRep{{zeros(d)}, std::move(rays), {}});
}

inline Polyhedron polytope_of(std::size_t d, std::vector<Vec> points) {
  return Polyhedron::canonical_from_vrep(d, VRep{std::move(points), {}, {}});
}

// Small hand-built one-step model: root with two leaves, all matrices equal to pi.
inline Model one_step(const Matrix& pi0, const Matrix& pi_up, const Matrix& pi_down, const Vec& xi0, const Vec& xi_up, const Vec& xi_down) {
  std::vector<ModelNode> n(3);
  n[0].id = "0";
  n[0].succ = {"u", "d"};
  n[0].pi = pi0;
  n[0].xi = xi0;
  n[1].id = "u";
  n[1].t = 1;
  n[1].parent = "0";
  n[1].pi = pi_up;
  n[1].xi = xi_up;
  n[2].id = "d";
  n[2].t = 1;
  n[2].parent = "0";
  n[2].pi = pi_down;
  n[2].xi = xi_down;
  return Model::build(pi0.size(), 1, std::move(n));
}

// Two-asset matrix from bid/ask of asset 1 in units of asset 2.
inline Matrix bid_ask(const Rat& bid, const Rat& ask) { return Matrix{{Rat(1), Rat(1 / bid)}, {ask, Rat(1)}}; }

// Copy of the model with every payoff set to zero.
inline Model without_payoff(const Model& m) {
  std::vector<ModelNode> nodes = m.nodes();
  for (auto& n : nodes) n.xi = zeros(m.dim());
  return Model::build(m.dim(), m.horizon(), std::move(nodes));
}

}  // namespace hedgecone::testing
