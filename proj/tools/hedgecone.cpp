#include <CLI11.hpp>

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "hedgecone.hpp"

namespace fs = std::filesystem;
using namespace hedgecone;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_validation = 2;
constexpr int exit_verification = 3;
constexpr int exit_resource = 4;

class VerificationFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string model_hash(const Model& m) {
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << fnv1a(model_to_json(m).dump());
  return "fnv1a64:" + os.str();
}

// Deterministic report on stdout; wall-clock timing goes to stderr.
class Report {
 public:
  explicit Report(std::string command) : start_(std::chrono::steady_clock::now()) { line("command", command); }
  ~Report() {
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start_).count();
    std::cerr << "time: " << ms << " ms\n";
  }
  void line(const std::string& key, const std::string& value) { std::cout << key << ": " << value << "\n"; }
  void price(const std::string& key, const Rat& v, int places) { line(key, to_string(v) + " (" + to_decimal(v, places) + ")"); }

 private:
  std::chrono::steady_clock::time_point start_;
};

struct Loaded {
  Model model;
  std::unique_ptr<ScenarioTree> tree;
  Cones cones;
};

Loaded load(const std::string& path, std::size_t max_nodes, bool need_tree, Report& r) {
  Loaded l{load_model(path), nullptr, {}};
  r.line("model", path);
  r.line("model hash", model_hash(l.model));
  l.cones = compute_cones(l.model);
  if (need_tree) l.tree = std::make_unique<ScenarioTree>(l.model, max_nodes);
  return l;
}

std::size_t currency_index(const Model& m, int j) {
  if (j < 1 || static_cast<std::size_t>(j) > m.dim())
    throw UsageError("--currency must be in 1.." + std::to_string(m.dim()));
  return static_cast<std::size_t>(j - 1);
}

Vec parse_vector(const std::string& text, std::size_t d) {
  Vec v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) v.push_back(parse_rat(item));
  if (v.size() != d) throw UsageError("endowment needs " + std::to_string(d) + " comma-separated entries");
  return v;
}

void write_artifact(const std::string& dir, const std::string& name, const Json& j, Report& r) {
  fs::create_directories(dir);
  fs::path p = fs::path(dir) / name;
  write_json_file(p.string(), j);
  r.line("wrote", p.string());
}

struct Options {
  std::string model;
  std::string side = "both";
  int currency = 1;
  bool instant = false;
  int places = 3;
  std::string out = ".";
  std::string endowment;
  std::size_t max_nodes = 200'000;
  std::size_t max_stopping_times = 200'000;
  std::vector<std::string> artifacts;
  std::string which;
  std::string generate_out;
  KornMullerParams km;
  std::vector<std::string> km_costs;
  bool km_no_padding = false;
};

int cmd_validate(const Options& o) {
  Report r("validate");
  Loaded l = load(o.model, o.max_nodes, false, r);
  r.line("assets", std::to_string(l.model.dim()));
  r.line("horizon", std::to_string(l.model.horizon()));
  r.line("nodes", std::to_string(l.model.size()));
  r.line("shape", l.model.is_tree() ? "tree" : "recombinant");
  for (const auto& [k, v] : l.model.metadata) r.line("metadata " + k, v);
  ScenarioTree tree(l.model, o.max_nodes);
  try {
    PricingPair p = check_no_arbitrage(tree, l.cones);
    Rat lo = p.q[0];
    for (const Rat& q : p.q) lo = std::min(lo, q);
    r.line("no-arbitrage", "ok (smallest node weight " + to_string(lo) + ")");
  } catch (const ArbitrageDetected& e) {
    r.line("no-arbitrage", "failed");
    if (e.witness) {
      r.line("arbitrage endowment", to_string(e.witness->y.y0));
      for (std::size_t leaf : tree.leaves())
        if (!is_zero(e.witness->terminal[leaf])) r.line("arbitrage gain at " + tree.id(leaf), to_string(e.witness->terminal[leaf]));
    }
    throw ModelError(e.what());
  }
  return exit_ok;
}

int cmd_price(const Options& o) {
  Report r("price");
  Loaded l = load(o.model, o.max_nodes, o.instant, r);
  const std::size_t j = currency_index(l.model, o.currency);
  r.line("currency", std::to_string(o.currency));
  r.line("exercise", o.instant ? "instant" : "gradual");
  const bool buyer = o.side == "buyer" || o.side == "both";
  const bool seller = o.side == "seller" || o.side == "both";
  if (o.instant) {
    if (buyer) r.price("bid", instant_bid_oracle(*l.tree, l.cones, j, OracleOptions{o.max_stopping_times}), o.places);
    if (seller) r.price("ask", instant_ask_oracle(*l.tree, l.cones, j), o.places);
    return exit_ok;
  }
  if (buyer) r.price("bid", bid_price(l.model, buyer_sets(l.model, l.cones), j), o.places);
  if (seller) r.price("ask", ask_price(l.model, seller_sets(l.model, l.cones), j), o.places);
  return exit_ok;
}

int cmd_hedge(const Options& o) {
  if (o.side == "both") throw UsageError("hedge needs --side seller or --side buyer");
  Report r("hedge");
  Loaded l = load(o.model, o.max_nodes, true, r);
  const std::size_t j = currency_index(l.model, o.currency);
  const std::size_t d = l.model.dim();
  r.line("side", o.side);
  if (o.side == "seller") {
    SellerSets s = seller_sets(l.model, l.cones);
    Vec x0 = o.endowment.empty() ? ask_price(l.model, s, j) * unit(d, j) : parse_vector(o.endowment, d);
    SellerHedge h = extract_hedge(*l.tree, l.cones, s, x0);
    if (auto e = check_hedge(*l.tree, l.cones, h); !e.empty()) throw VerificationFailed(e);
    r.line("endowment", to_string(x0));
    write_artifact(o.out, "seller_hedge.json", hedge_to_json(*l.tree, h), r);
  } else {
    BuyerSets s = buyer_sets(l.model, l.cones);
    Vec x0 = o.endowment.empty() ? Vec(-bid_price(l.model, s, j) * unit(d, j)) : parse_vector(o.endowment, d);
    BuyerStrategy b = extract_strategy(*l.tree, l.cones, s, x0);
    if (auto e = check_buyer_strategy(*l.tree, l.cones, b.y, b.chi); !e.empty()) throw VerificationFailed(e);
    r.line("endowment", to_string(x0));
    write_artifact(o.out, "buyer_strategy.json", buyer_strategy_to_json(*l.tree, b), r);
  }
  return exit_ok;
}

int cmd_dual(const Options& o) {
  Report r("dual");
  Loaded l = load(o.model, o.max_nodes, true, r);
  const std::size_t j = currency_index(l.model, o.currency);
  r.line("currency", std::to_string(o.currency));
  if (o.side == "seller" || o.side == "both") {
    DualCertificate c = seller_dual_certificate(*l.tree, l.cones, seller_sets(l.model, l.cones), j);
    r.price("seller certificate value", c.value, o.places);
    write_artifact(o.out, "seller_certificate.json", certificate_to_json(*l.tree, c), r);
  }
  if (o.side == "buyer" || o.side == "both") {
    DualCertificate c = buyer_dual_certificate(*l.tree, l.cones, buyer_sets(l.model, l.cones), j);
    r.price("buyer certificate value", c.value, o.places);
    write_artifact(o.out, "buyer_certificate.json", certificate_to_json(*l.tree, c), r);
  }
  return exit_ok;
}

// Detects the artifact kind from its fields and re-checks it from scratch.
std::string verify_one(const Loaded& l, const Json& j) {
  const ScenarioTree& tree = *l.tree;
  if (j.is_object() && j.contains("q")) {
    DualCertificate c = certificate_from_json(tree, j);
    Verdict v = c.side == "seller" ? verify_seller_certificate(tree, l.cones, seller_sets(l.model, l.cones), c)
                                   : verify_buyer_certificate(tree, l.cones, buyer_sets(l.model, l.cones), c);
    return v.ok ? std::string() : v.violation;
  }
  if (j.is_object() && j.contains("side") && j.at("side") == "seller") {
    SellerHedge h = hedge_from_json(tree, j);
    if (auto e = check_hedge(tree, l.cones, h); !e.empty()) return e;
    if (!member(seller_sets(l.model, l.cones).Z[0], h.y.y0)) return "endowment outside Z^ad_0";
    return {};
  }
  if (j.is_object() && j.contains("side") && j.at("side") == "buyer") {
    BuyerStrategy b = buyer_strategy_from_json(tree, j);
    return check_buyer_strategy(tree, l.cones, b.y, b.chi);
  }
  if (j.is_object() && j.contains("chi")) return check_stopping_time(tree, stopping_time_from_json(tree, j));
  throw ArtifactError("unrecognised artifact");
}

int cmd_verify(const Options& o) {
  Report r("verify");
  Loaded l = load(o.model, o.max_nodes, true, r);
  bool all = true;
  for (const std::string& path : o.artifacts) {
    std::string e = verify_one(l, read_json_file(path));
    r.line(path, e.empty() ? "pass" : "FAIL: " + e);
    all = all && e.empty();
  }
  if (!all) throw VerificationFailed("verification failed");
  return exit_ok;
}

int cmd_export(const Options& o) {
  Report r("export-sets");
  Loaded l = load(o.model, o.max_nodes, false, r);
  r.line("which", o.which);
  Json j;
  if (o.which == "K") j = cone_process_to_json(l.model, l.cones.K);
  else if (o.which == "Q") j = cone_process_to_json(l.model, l.cones.Q);
  else if (o.which == "ad") j = cone_process_to_json(l.model, seller_sets(l.model, l.cones).Z);
  else if (o.which == "bd") j = cone_process_to_json(l.model, buyer_sets(l.model, l.cones).Z);
  else throw UsageError("--which must be ad, bd, Q or K");
  write_artifact(o.out, "sets_" + o.which + ".json", j, r);
  return exit_ok;
}

int cmd_generate(Options o) {
  Report r("generate");
  for (const std::string& entry : o.km_costs) {
    auto eq = entry.find('=');
    if (eq == std::string::npos) throw UsageError("--cost-at expects t=rate");
    o.km.k_at[std::stoi(entry.substr(0, eq))] = entry.substr(eq + 1);
  }
  o.km.never_exercise_step = !o.km_no_padding;
  Model m = korn_muller_generate(o.km);
  r.line("model hash", model_hash(m));
  r.line("nodes", std::to_string(m.size()));
  write_json_file(o.generate_out, model_to_json(m));
  r.line("wrote", o.generate_out);
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bid/ask prices, superhedging strategies and dual certificates for American options with gradual exercise"};
  app.require_subcommand(1);
  Options o;
  auto add_model = [&](CLI::App* c) { c->add_option("model", o.model, "model JSON file")->required()->check(CLI::ExistingFile); };
  auto add_common = [&](CLI::App* c) {
    c->add_option("--currency,-j", o.currency, "numeraire currency (1-based)");
    c->add_option("--places", o.places, "decimal places in reports")->check(CLI::Range(0, 30));
    c->add_option("--max-tree-nodes", o.max_nodes, "refuse to unfold trees larger than this");
  };
  auto side = [&](CLI::App* c) { c->add_option("--side", o.side, "seller, buyer or both")->check(CLI::IsMember({"seller", "buyer", "both"})); };

  auto* validate = app.add_subcommand("validate", "load a model and check it for arbitrage");
  add_model(validate);
  validate->add_option("--max-tree-nodes", o.max_nodes, "refuse to unfold trees larger than this");

  auto* price = app.add_subcommand("price", "bid and ask prices");
  add_model(price);
  add_common(price);
  side(price);
  price->add_flag("--instant", o.instant, "instant exercise (brute-force oracles)");
  price->add_option("--max-stopping-times", o.max_stopping_times, "enumeration bound for the instant bid");

  auto* hedge = app.add_subcommand("hedge", "superhedging strategy for one side");
  add_model(hedge);
  add_common(hedge);
  side(hedge);
  hedge->add_option("--endowment", o.endowment, "initial portfolio, comma separated (default: price times e^j)");
  hedge->add_option("--out", o.out, "output directory");

  auto* dual = app.add_subcommand("dual", "dual certificates (stopping time and pricing pair)");
  add_model(dual);
  add_common(dual);
  side(dual);
  dual->add_option("--out", o.out, "output directory");

  auto* verify = app.add_subcommand("verify", "re-check emitted certificates, hedges, strategies or stopping times");
  add_model(verify);
  verify->add_option("artifacts", o.artifacts, "artifact JSON files")->required()->check(CLI::ExistingFile);
  verify->add_option("--max-tree-nodes", o.max_nodes, "refuse to unfold trees larger than this");

  auto* exp = app.add_subcommand("export-sets", "per-node polyhedra for plotting");
  add_model(exp);
  exp->add_option("--which", o.which, "ad, bd, Q or K")->required();
  exp->add_option("--out", o.out, "output directory");

  auto* gen = app.add_subcommand("generate", "write a generated model");
  gen->add_flag("--korn-muller", "three-currency recombinant lattice (the only generator)")->required();
  gen->add_option("--out", o.generate_out, "output model file")->required();
  gen->add_option("--e0-1", o.km.E0_1);
  gen->add_option("--e0-2", o.km.E0_2);
  gen->add_option("--sigma-1", o.km.sigma_1);
  gen->add_option("--sigma-2", o.km.sigma_2);
  gen->add_option("--rho", o.km.rho);
  gen->add_option("--tau", o.km.tau);
  gen->add_option("--steps", o.km.T, "number of lattice steps T");
  gen->add_option("--cost", o.km.k_default, "default proportional cost");
  gen->add_option("--cost-at", o.km_costs, "t=rate overrides (default 1=0.1)");
  gen->add_option("--digits", o.km.significant_digits, "significant digits kept when rationalizing rates");
  gen->add_flag("--no-padding", o.km_no_padding, "omit the zero-payoff step T+1");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? exit_ok : exit_validation;
  }

  try {
    if (*validate) return cmd_validate(o);
    if (*price) return cmd_price(o);
    if (*hedge) return cmd_hedge(o);
    if (*dual) return cmd_dual(o);
    if (*verify) return cmd_verify(o);
    if (*exp) return cmd_export(o);
    if (*gen) return cmd_generate(o);
  } catch (const VerificationFailed& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_verification;
  } catch (const ResourceLimit& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return exit_resource;
  } catch (const ModelError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_validation;
  } catch (const ArtifactError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_validation;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_validation;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_validation;
  } catch (const ArbitrageDetected& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_validation;
  } catch (const PricingError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_validation;
  } catch (const NotHedging& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_validation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return exit_ok;
}
