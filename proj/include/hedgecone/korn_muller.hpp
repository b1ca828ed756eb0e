#pragma once

#include <boost/multiprecision/cpp_dec_float.hpp>

#include <cmath>
#include <map>
#include <string>

#include "hedgecone/model.hpp"

namespace hedgecone {

// Two-currency recombinant lattice with Cholesky correlation, asset 3 domestic.
struct KornMullerParams {
  std::string E0_1 = "40", E0_2 = "50";
  std::string sigma_1 = "0.15", sigma_2 = "0.10";
  std::string rho = "0.5";
  std::string tau = "1";
  int T = 10;
  std::string k_default = "0.005";
  std::map<int, std::string> k_at{{1, "0.1"}};
  Vec payoff{Rat(-1), Rat(-1), Rat(90)};
  bool never_exercise_step = true;
  int significant_digits = 12;
};

namespace detail {

using Dec = boost::multiprecision::cpp_dec_float_50;

inline std::string round_significant(const Dec& x, int digits) {
  return x.str(digits, std::ios_base::scientific);
}

inline Dec dec(const std::string& s, const char* what) {
  try {
    return Dec(s);
  } catch (const std::exception&) {
    throw ModelError(std::string("invalid ") + what + " '" + s + "'");
  }
}

}  // namespace detail

inline Model korn_muller_generate(const KornMullerParams& p) {
  using detail::Dec;
  const Dec E01 = detail::dec(p.E0_1, "E0"), E02 = detail::dec(p.E0_2, "E0");
  const Dec s1 = detail::dec(p.sigma_1, "volatility"), s2 = detail::dec(p.sigma_2, "volatility");
  const Dec rho = detail::dec(p.rho, "correlation"), tau = detail::dec(p.tau, "horizon");
  if (p.T < 1) throw ModelError("Korn-Mueller lattice needs T >= 1");
  if (E01 <= 0 || E02 <= 0) throw ModelError("initial exchange rates must be positive");
  if (s1 <= 0 || s2 <= 0) throw ModelError("volatilities must be positive");
  if (tau <= 0) throw ModelError("time horizon must be positive");
  if (abs(rho) >= 1) throw ModelError("correlation must satisfy |rho| < 1");
  if (p.significant_digits < 2 || p.significant_digits > 40) throw ModelError("significant digits must be in 2..40");
  if (p.payoff.size() != 3) throw ModelError("payoff must have 3 entries");
  auto cost = [&](int t) {
    auto it = p.k_at.find(t);
    Dec k = detail::dec(it == p.k_at.end() ? p.k_default : it->second, "transaction cost");
    if (k < 0) throw ModelError("transaction costs must be non-negative");
    return k;
  };
  const Dec delta = tau / p.T;
  const Dec sq = sqrt(delta);
  const Dec rho_c = sqrt(Dec(1) - rho * rho);
  const int digits = p.significant_digits;
  auto rat = [&](const Dec& x) { return parse_rat(detail::round_significant(x, digits)); };
  auto id = [](int t, int j1, int j2) { return std::to_string(t) + ":" + std::to_string(j1) + ":" + std::to_string(j2); };

  std::vector<ModelNode> nodes;
  std::map<std::string, Matrix> matrix_of;
  for (int t = 0; t <= p.T; ++t) {
    const Dec k = cost(t);
    for (int j1 = 1; j1 <= t + 1; ++j1) {
      for (int j2 = 1; j2 <= t + 1; ++j2) {
        const Dec a = Dec(2 * j1 - t - 2), b = Dec(2 * j2 - t - 2);
        const Dec e1 = E01 * exp(-s1 * s1 * t * delta / 2 + a * s1 * sq);
        const Dec e2 = E02 * exp(-s2 * s2 * t * delta / 2 + (a * rho + b * rho_c) * s2 * sq);
        const Dec m = 1 + k;
        ModelNode n;
        n.id = id(t, j1, j2);
        n.t = t;
        n.pi = {{Rat(1), rat(e2 / e1 * m), rat(m / e1)},
                {rat(e1 / e2 * m), Rat(1), rat(m / e2)},
                {rat(e1 * m), rat(e2 * m), Rat(1)}};
        n.xi = p.payoff;
        if (t > 0) n.parent = id(t - 1, std::min(j1, t), std::min(j2, t));
        if (t < p.T) {
          n.succ = {id(t + 1, j1, j2), id(t + 1, j1 + 1, j2), id(t + 1, j1, j2 + 1), id(t + 1, j1 + 1, j2 + 1)};
        } else if (p.never_exercise_step) {
          n.succ = {id(t + 1, j1, j2)};
        }
        matrix_of[n.id] = n.pi;
        nodes.push_back(std::move(n));
      }
    }
  }
  int T = p.T;
  if (p.never_exercise_step) {
    T = p.T + 1;
    for (int j1 = 1; j1 <= p.T + 1; ++j1)
      for (int j2 = 1; j2 <= p.T + 1; ++j2) {
        ModelNode n;
        n.id = id(T, j1, j2);
        n.t = T;
        n.parent = id(p.T, j1, j2);
        n.pi = matrix_of.at(*n.parent);
        n.xi = zeros(3);
        nodes.push_back(std::move(n));
      }
  }
  Model m = Model::build(3, T, std::move(nodes));
  m.metadata["generator"] = "korn-muller";
  m.metadata["significant_digits"] = std::to_string(digits);
  if (p.never_exercise_step) {
    m.metadata["never_exercise_step"] = std::to_string(T);
    m.metadata["never_exercise_step_rates"] = "copied from step " + std::to_string(p.T);
  }
  return m;
}

}  // namespace hedgecone
