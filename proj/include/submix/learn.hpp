#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "submix/features.hpp"
#include "submix/maximize.hpp"
#include "submix/shells.hpp"

namespace submix {

// One training example compiled for learning: the model's shells and the
// loss instantiated on the instance's ground set.
struct TrainInstance {
  std::string id;
  GroundSet ground;
  BudgetConstraint constraint;
  Subset target;
  bool target_feasible = true;  // gold may exceed the budget; evaluation
                                // needs no feasibility, but the trace flags it
  std::vector<SetFunctionPtr> shells;
  SetFunctionPtr loss;
};

enum class LaiSolver { GreedyKnapsack, BruteForce };

inline const char* solver_name(LaiSolver s) {
  return s == LaiSolver::GreedyKnapsack ? "greedy" : "brute";
}
inline LaiSolver solver_from_name(const std::string& s) {
  if (s == "greedy" || s == "greedy_knapsack") return LaiSolver::GreedyKnapsack;
  if (s == "brute" || s == "brute_force") return LaiSolver::BruteForce;
  throw ConfigError("unknown LAI solver '" + s + "'");
}

struct TrainConfig {
  double lambda = 0.0;      // > 0 when explicit
  bool auto_lambda = true;  // measure G with w = 0, then set the Theorem rate
  int passes = 1;
  std::uint64_t seed = 0;
  LaiSolver lai_solver = LaiSolver::GreedyKnapsack;
  bool shuffle = true;
  double loss_weight = 1.0;  // scale of the loss inside LAI
  double delta = 0.05;       // risk bound confidence
};

struct Model {
  std::vector<ShellSpec> shells;
  std::vector<double> weights;  // >= 0 elementwise, always

  std::size_t size() const { return shells.size(); }
};

struct RiskBoundReport {
  int components = 0;        // M
  double max_grad_norm = 0;  // G, max observed ||g_t||
  double max_hinge = 0;      // B, max observed hinge surrogate
  double rho = 1.0;          // approximation factor of the LAI solver
  double delta = 0.05;
  long long steps = 0;  // T
  double term_gradient = 0;  // (MG/rho) sqrt(2(1+log T)/T)
  double term_confidence = 0;  // B sqrt((2/T) log(1/delta))
  double term_approximation = 0;  // ((1-rho)/rho) M
  double bound = 0;          // S(T), the sum of the three
  double lambda_auto = 0;    // (G/M) sqrt(2(1+log T)/T)
};

struct TraceRecord {
  long long t = 0;
  std::string instance_id;
  double hinge_surrogate = 0;
  double grad_norm = 0;
  std::vector<double> weights_after;
  double max_weight = 0;  // Theorem assumes w_i <= 1; recorded, not enforced
  bool guaranteed = true;
  bool target_feasible = true;
};

struct LaiResult {
  Subset y;
  double objective = 0;
  bool guaranteed = true;  // solver carries an approximation factor here
  long long evaluations = 0;
};

// ---------------------------------------------------------------------------
// Loss augmented inference: approximately maximize w'f_t(y) + loss_weight *
// l_t(y) over feasible y. The greedy path inherits the knapsack guarantee
// when the objective is monotone submodular; otherwise the result is tagged
// guarantee-free.
// ---------------------------------------------------------------------------

namespace detail {

inline LinearCombination lai_objective(const std::vector<double>& w,
                                       const TrainInstance& inst,
                                       double loss_weight) {
  if (w.size() != inst.shells.size())
    throw ConfigError("weight vector has " + std::to_string(w.size()) +
                      " entries for " + std::to_string(inst.shells.size()) +
                      " shells");
  std::vector<SetFunctionPtr> comps = inst.shells;
  std::vector<double> ws = w;
  if (inst.loss) {
    comps.push_back(inst.loss);
    ws.push_back(loss_weight);
  }
  return LinearCombination(std::move(comps), std::move(ws));
}

}  // namespace detail

inline LaiResult lai(const std::vector<double>& w, const TrainInstance& inst,
                     LaiSolver solver, double loss_weight = 1.0) {
  const LinearCombination objective =
      detail::lai_objective(w, inst, loss_weight);
  LaiResult res;
  if (solver == LaiSolver::BruteForce) {
    auto m = brute_force(objective, inst.constraint);
    res.y = std::move(m.selected);
    res.objective = m.value;
    res.guaranteed = true;  // exact
    res.evaluations = m.evaluations;
  } else {
    auto m = greedy_knapsack(objective, inst.constraint);
    res.y = std::move(m.selected);
    res.objective = m.value;
    res.guaranteed = objective.declared_submodular() &&
                     objective.declared_monotone();
    res.evaluations = m.evaluations;
  }
  return res;
}

// Shell value vector f_t(y).
inline std::vector<double> shell_values(const TrainInstance& inst,
                                        const Subset& y) {
  std::vector<double> f(inst.shells.size());
  for (std::size_t i = 0; i < inst.shells.size(); ++i)
    f[i] = inst.shells[i]->value_canonical(y);
  return f;
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

inline double norm2(const std::vector<double>& a) {
  return std::sqrt(dot(a, a));
}

// Generalized hinge: max_y [w'f_t(y) + l_t(y)] - w'f_t(y_gold). Exact with
// the brute-force solver; the greedy surrogate may undershoot.
inline double hinge_loss(const std::vector<double>& w, const TrainInstance& inst,
                         LaiSolver solver, double loss_weight = 1.0) {
  const LaiResult r = lai(w, inst, solver, loss_weight);
  return r.objective - dot(w, shell_values(inst, inst.target));
}

// g = lambda*w + f_t(y_hat) - f_t(y_gold).
inline std::vector<double> subgradient(const std::vector<double>& w,
                                       const TrainInstance& inst,
                                       const Subset& y_hat, double lambda) {
  std::vector<double> g = shell_values(inst, y_hat);
  const std::vector<double> f_gold = shell_values(inst, inst.target);
  for (std::size_t i = 0; i < g.size(); ++i)
    g[i] += lambda * w[i] - f_gold[i];
  return g;
}

// Elementwise max(0, .): projection onto the nonnegative orthant, which is
// what preserves submodularity of the learned mixture.
inline std::vector<double> project_nonneg(std::vector<double> w) {
  for (double& x : w)
    if (x < 0.0) x = 0.0;
  return w;
}

// ---------------------------------------------------------------------------
// Theorem-style risk bound arithmetic.
// ---------------------------------------------------------------------------

inline RiskBoundReport risk_bound(int components, double max_grad_norm,
                                  double max_hinge, double rho, double delta,
                                  long long steps) {
  if (!(rho > 0.0 && rho <= 1.0))
    throw std::invalid_argument("rho must be in (0,1]");
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("delta must be in (0,1)");
  if (steps < 1) throw std::invalid_argument("step count must be >= 1");
  if (components < 1) throw std::invalid_argument("component count must be >= 1");
  if (!(max_grad_norm >= 0.0) || !(max_hinge >= 0.0))
    throw std::invalid_argument("G and B must be nonnegative");

  RiskBoundReport r;
  r.components = components;
  r.max_grad_norm = max_grad_norm;
  r.max_hinge = max_hinge;
  r.rho = rho;
  r.delta = delta;
  r.steps = steps;
  const double t = static_cast<double>(steps);
  const double decay = std::sqrt(2.0 * (1.0 + std::log(t)) / t);
  r.term_gradient = components * max_grad_norm / rho * decay;
  r.term_confidence = max_hinge * std::sqrt(2.0 / t * std::log(1.0 / delta));
  r.term_approximation = (1.0 - rho) / rho * components;
  r.bound = r.term_gradient + r.term_confidence + r.term_approximation;
  r.lambda_auto = max_grad_norm / components * decay;
  return r;
}

// rho of the solver actually used: exact inference adds no residual risk;
// the budgeted greedy carries 1 - 1/sqrt(e).
inline double solver_rho(LaiSolver s) {
  return s == LaiSolver::BruteForce ? 1.0 : 1.0 - 1.0 / std::sqrt(std::exp(1.0));
}

// ---------------------------------------------------------------------------
// Algorithm-1 training: projected subgradient descent over passes with a
// globally decaying rate eta_t = 2/(lambda t); returns the averaged weights.
// ---------------------------------------------------------------------------

struct TrainOutput {
  Model model;
  RiskBoundReport report;
  std::vector<TraceRecord> trace;
  double lambda = 0.0;
  bool lambda_was_auto = false;
};

inline TrainOutput train(const std::vector<ShellSpec>& shells,
                         const std::vector<TrainInstance>& corpus,
                         const TrainConfig& cfg) {
  if (corpus.empty()) throw ConfigError("no training instances");
  if (!cfg.auto_lambda && !(cfg.lambda > 0.0))
    throw ConfigError("lambda must be > 0");
  if (cfg.passes < 1) throw ConfigError("pass count must be >= 1");
  if (shells.empty()) throw ConfigError("model needs at least one shell");
  const std::size_t m = shells.size();
  for (const auto& inst : corpus)
    if (inst.shells.size() != m)
      throw ConfigError("instance '" + inst.id + "' compiled with " +
                        std::to_string(inst.shells.size()) + " shells, model has " +
                        std::to_string(m));

  const long long total_steps =
      static_cast<long long>(cfg.passes) * static_cast<long long>(corpus.size());

  // Auto lambda: one measurement pass with w = 0 and no updates estimates G
  // (and B) before training, since the Theorem rate needs G up front.
  double lambda = cfg.lambda;
  if (cfg.auto_lambda) {
    const std::vector<double> zero(m, 0.0);
    double g_max = 0.0;
    for (const auto& inst : corpus) {
      const LaiResult r = lai(zero, inst, cfg.lai_solver, cfg.loss_weight);
      g_max = std::max(g_max, norm2(subgradient(zero, inst, r.y, 0.0)));
    }
    const double t = static_cast<double>(total_steps);
    lambda = g_max / static_cast<double>(m) *
             std::sqrt(2.0 * (1.0 + std::log(t)) / t);
    if (!(lambda > 0.0)) lambda = 1.0;  // degenerate corpus: G = 0
  }

  std::vector<double> w(m, 0.0);
  std::vector<double> w_sum(m, 0.0);
  TrainOutput out;
  out.lambda = lambda;
  out.lambda_was_auto = cfg.auto_lambda;
  out.trace.reserve(static_cast<std::size_t>(total_steps));

  double g_obs = 0.0, b_obs = 0.0;
  long long t = 0;
  RngStream shuffle_rng(cfg.seed, "train/shuffle");
  for (int pass = 0; pass < cfg.passes; ++pass) {
    std::vector<int> order(corpus.size());
    for (std::size_t i = 0; i < corpus.size(); ++i) order[i] = static_cast<int>(i);
    if (cfg.shuffle) shuffle_rng.shuffle(order);

    for (int idx : order) {
      const TrainInstance& inst = corpus[static_cast<std::size_t>(idx)];
      ++t;
      const LaiResult r = lai(w, inst, cfg.lai_solver, cfg.loss_weight);
      const double hinge = r.objective - dot(w, shell_values(inst, inst.target));
      const std::vector<double> g = subgradient(w, inst, r.y, lambda);
      const double eta = 2.0 / (lambda * static_cast<double>(t));
      for (std::size_t i = 0; i < m; ++i) w[i] -= eta * g[i];
      w = project_nonneg(std::move(w));
      for (std::size_t i = 0; i < m; ++i) {
        if (!(w[i] >= 0.0))
          throw std::logic_error("weight went negative after projection");
        w_sum[i] += w[i];
      }

      TraceRecord rec;
      rec.t = t;
      rec.instance_id = inst.id;
      rec.hinge_surrogate = hinge;
      rec.grad_norm = norm2(g);
      rec.weights_after = w;
      rec.max_weight = *std::max_element(w.begin(), w.end());
      rec.guaranteed = r.guaranteed;
      rec.target_feasible = inst.target_feasible;
      out.trace.push_back(std::move(rec));

      g_obs = std::max(g_obs, norm2(g));
      b_obs = std::max(b_obs, hinge);
    }
  }

  out.model.shells = shells;
  out.model.weights.resize(m);
  for (std::size_t i = 0; i < m; ++i)
    out.model.weights[i] = w_sum[i] / static_cast<double>(total_steps);

  out.report = risk_bound(static_cast<int>(m), g_obs, std::max(b_obs, 0.0),
                          solver_rho(cfg.lai_solver), cfg.delta, total_steps);
  return out;
}

// ---------------------------------------------------------------------------
// Compiling corpus instances against a model's shells.
// ---------------------------------------------------------------------------

enum class LossKind { EllRouge, OneMinusRouge, None };

inline LossKind loss_from_name(const std::string& s) {
  if (s == "ell-rouge" || s == "ell_rouge") return LossKind::EllRouge;
  if (s == "one-minus-rouge" || s == "one_minus_rouge")
    return LossKind::OneMinusRouge;
  if (s == "none") return LossKind::None;
  throw ConfigError("unknown loss '" + s + "'");
}
inline const char* loss_name(LossKind k) {
  switch (k) {
    case LossKind::EllRouge: return "ell-rouge";
    case LossKind::OneMinusRouge: return "one-minus-rouge";
    case LossKind::None: return "none";
  }
  return "?";
}

inline SetFunctionPtr make_loss(LossKind kind,
                                std::shared_ptr<const NGramTable> table) {
  switch (kind) {
    case LossKind::EllRouge: return std::make_shared<EllRouge>(std::move(table));
    case LossKind::OneMinusRouge:
      return std::make_shared<OneMinusRouge>(std::move(table));
    case LossKind::None: return nullptr;
  }
  return nullptr;
}

// Instantiates every shell (and the loss) of a model on a built instance.
inline TrainInstance compile_instance(const BuiltInstance& built,
                                      const std::vector<ShellSpec>& shells,
                                      LossKind loss_kind) {
  TrainInstance ti;
  ti.id = built.id;
  ti.ground = built.ground;
  ti.constraint.budget = built.budget;
  ti.constraint.costs = built.ground.costs;
  ti.constraint.scale_exponent = 1.0;
  ti.target = built.target.value_or(Subset{});
  ti.target_feasible = ti.ground.cost(ti.target) <= built.budget;
  ti.shells.reserve(shells.size());
  for (const auto& spec : shells)
    ti.shells.push_back(instantiate(spec, built.features, built.ground));
  if (loss_kind != LossKind::None) {
    if (!built.table)
      throw DataError("instance '" + built.id +
                      "' has no references; cannot build the loss");
    ti.loss = make_loss(loss_kind, built.table);
  }
  return ti;
}

}  // namespace submix
