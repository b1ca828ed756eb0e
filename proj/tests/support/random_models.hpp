#pragma once

#include <random>
#include <string>
#include <vector>

#include "hedgecone.hpp"

namespace hedgecone::testing {

// Binary tree with a built-in martingale: random branching probabilities, leaf prices in 1..5,
// interior prices as conditional expectations, and π^{jk} = (S^k/S^j)(1 + c) with c ≥ 0.
struct RandomModel {
  Model model;
  std::vector<Rat> prob;  // conditional probability of each node given its parent
  std::vector<Vec> S;
};

inline Rat pick_cost(std::mt19937_64& rng) {
  static const Rat costs[] = {Rat(0), Rat(1, 20), Rat(1, 10), Rat(1, 5), Rat(1, 2)};
  return costs[std::uniform_int_distribution<int>(0, 4)(rng)];
}

inline RandomModel random_model(std::mt19937_64& rng, std::size_t d, int T, int payoff_range = 3) {
  std::uniform_int_distribution<int> price(1, 5), split(1, 4), payoff(-payoff_range, payoff_range);
  struct Raw {
    std::string id;
    int t;
    std::optional<std::size_t> parent;
    std::vector<std::size_t> kids;
  };
  std::vector<Raw> raw{{"r", 0, std::nullopt, {}}};
  for (std::size_t k = 0; k < raw.size(); ++k) {
    if (raw[k].t == T) continue;
    for (const char* tag : {"u", "d"}) {
      raw[k].kids.push_back(raw.size());
      raw.push_back({raw[k].id + tag, raw[k].t + 1, k, {}});
    }
  }
  const std::size_t n = raw.size();
  RandomModel out;
  out.prob.assign(n, Rat(1));
  out.S.assign(n, zeros(d));
  for (std::size_t k = 0; k < n; ++k) {
    if (raw[k].kids.empty()) continue;
    Rat a = split(rng), b = split(rng);
    out.prob[raw[k].kids[0]] = a / (a + b);
    out.prob[raw[k].kids[1]] = b / (a + b);
  }
  for (std::size_t k = n; k-- > 0;) {
    if (raw[k].kids.empty()) {
      for (std::size_t i = 0; i < d; ++i) out.S[k][i] = price(rng);
      continue;
    }
    for (std::size_t c : raw[k].kids) out.S[k] += out.prob[c] * out.S[c];
  }
  std::vector<ModelNode> nodes;
  for (std::size_t k = 0; k < n; ++k) {
    ModelNode m;
    m.id = raw[k].id;
    m.t = raw[k].t;
    if (raw[k].parent) m.parent = raw[*raw[k].parent].id;
    for (std::size_t c : raw[k].kids) m.succ.push_back(raw[c].id);
    m.pi.assign(d, Vec(d, Rat(1)));
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t i = 0; i < d; ++i)
        if (i != j) m.pi[j][i] = out.S[k][i] / out.S[k][j] * (1 + pick_cost(rng));
    m.xi = zeros(d);
    for (std::size_t i = 0; i < d; ++i) m.xi[i] = payoff(rng);
    nodes.push_back(std::move(m));
  }
  out.model = Model::build(d, T, std::move(nodes));
  return out;
}

// Martingale pair from the model's own probabilities and fresh random leaf prices (not necessarily in K*).
inline PricingPair random_martingale_pair(std::mt19937_64& rng, const ScenarioTree& tree, const std::vector<Rat>& prob, int lo = 1,
                                          int hi = 5) {
  const std::size_t d = tree.model().dim();
  std::uniform_int_distribution<int> price(lo, hi);
  PricingPair p;
  p.q.assign(tree.size(), Rat(1));
  p.S.assign(tree.size(), zeros(d));
  for (std::size_t v = 1; v < tree.size(); ++v) p.q[v] = p.q[*tree.parent(v)] * prob[v];
  for (std::size_t v = tree.size(); v-- > 0;) {
    if (tree.is_leaf(v)) {
      for (std::size_t i = 0; i < d; ++i) p.S[v][i] = price(rng);
      continue;
    }
    for (std::size_t c : tree.children(v)) p.S[v] += prob[c] * p.S[c];
  }
  return p;
}

// Martingale pair whose leaf prices are random points of K*_T (weights on the σ_1 slice vertices);
// interior prices are conditional expectations and may or may not stay inside K*_t.
inline PricingPair random_consistent_pair(std::mt19937_64& rng, const ScenarioTree& tree, const Cones& c, const std::vector<Rat>& prob) {
  const std::size_t d = tree.model().dim();
  PricingPair p;
  p.q.assign(tree.size(), Rat(1));
  p.S.assign(tree.size(), zeros(d));
  for (std::size_t v = 1; v < tree.size(); ++v) p.q[v] = p.q[*tree.parent(v)] * prob[v];
  std::uniform_int_distribution<int> weight(0, 4);
  for (std::size_t v = tree.size(); v-- > 0;) {
    if (!tree.is_leaf(v)) {
      for (std::size_t k : tree.children(v)) p.S[v] += prob[k] * p.S[k];
      continue;
    }
    const Polyhedron slice = sigma_slice(c.K_dual[tree.model_node(v)], 0);
    const auto& corners = slice.vrep().points;
    Rat total = 0;
    for (const Vec& x : corners) {
      Rat w = weight(rng);
      p.S[v] += w * x;
      total += w;
    }
    p.S[v] = sgn(total) > 0 ? Rat(1 / total) * p.S[v] : corners.front();
  }
  return p;
}

// Random mixed stopping time with masses in multiples of 1/4.
inline MixedStoppingTime random_stopping_time(std::mt19937_64& rng, const ScenarioTree& tree) {
  MixedStoppingTime x;
  x.chi.assign(tree.size(), Rat(0));
  std::vector<Rat> left(tree.size(), Rat(1));
  for (std::size_t v = 0; v < tree.size(); ++v) {
    if (auto p = tree.parent(v)) left[v] = left[*p] - x.chi[*p];
    if (tree.is_leaf(v)) {
      x.chi[v] = left[v];
      continue;
    }
    x.chi[v] = left[v] * make_rat(std::uniform_int_distribution<int>(0, 4)(rng), 4);
  }
  return x;
}

}  // namespace hedgecone::testing
