#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "treelab/estimator.hpp"
#include "treelab/io.hpp"
#include "treelab/learners.hpp"
#include "treelab/local.hpp"
#include "treelab/oracle.hpp"
#include "treelab/params.hpp"
#include "treelab/targets.hpp"

using namespace treelab;

namespace {

struct Globals {
  bool theory = false;
  bool machine = false;
  std::size_t s = 16;
  double epsilon = 0.1;
  double delta = 0.1;
  double eta = 0.25;
};

struct Common {
  std::size_t t = 16;
  std::size_t b = 64;
  std::string impurity = "gini";
  std::uint64_t seed = 0;
};

std::string number(double v, bool machine) {
  std::ostringstream out;
  if (machine) {
    out << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  } else {
    out << std::fixed << std::setprecision(6) << v;
  }
  return out.str();
}

std::string count(double v) {
  if (v == std::floor(v)) return std::to_string(static_cast<long long>(v));
  return number(v, true);
}

void add_common(CLI::App* cmd, Common& c, bool with_b = true) {
  cmd->add_option("--t", c.t, "Size parameter t")->check(CLI::PositiveNumber);
  if (with_b) cmd->add_option("--b", c.b, "Minibatch size b")->check(CLI::PositiveNumber);
  cmd->add_option("--impurity", c.impurity, "gini | entropy | kearns-mansour")
      ->check(CLI::IsMember({"gini", "entropy", "kearns-mansour"}));
  cmd->add_option("--seed", c.seed, "Master seed of the randomness tape");
}

void print_theory(const Globals& g, std::size_t t, std::size_t d, const ImpurityFunction& impurity) {
  if (!g.theory) return;
  TheoryParams p;
  p.s = g.s;
  p.t = t;
  p.d = d;
  p.epsilon = g.epsilon;
  p.delta = g.delta;
  p.eta = g.eta;
  const RecommendedParams r = recommended_params(p, impurity);
  std::cout << "theory: D=" << r.max_depth << " b_min=" << r.min_batch
            << " Delta=" << number(r.gain_accuracy, g.machine) << " m=" << r.strand_samples
            << " b=" << r.minibatch << " n=" << r.dataset_size << " b_local=" << r.local_batch << '\n';
}

std::size_t worker_count() {
  const char* env = std::getenv("TREE_LAB_THREADS");
  if (!env || !*env) return 0;
  try {
    return static_cast<std::size_t>(std::stoul(env));
  } catch (const std::exception&) {
    throw std::invalid_argument("TREE_LAB_THREADS must be a non-negative integer");
  }
}

// Runs job(i) for i in [0, count); results are written by index so the
// outcome does not depend on scheduling.
template <typename Job>
void parallel_for(std::size_t count, Job job) {
  const std::size_t workers = std::min(worker_count(), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex failure_lock;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          job(i);
        } catch (...) {
          std::lock_guard lock(failure_lock);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

LabelOracle target_oracle(const UnlabeledDataset& data, const TargetFunction& f) {
  return LabelOracle([&data, f](std::size_t idx) {
    if (idx >= data.size()) throw std::out_of_range("label index out of range");
    return f(data.point(idx));
  });
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

// Loads `key = value` lines and turns the keys the chosen subcommand knows
// into `--key value` arguments placed before the user's own flags, so flags
// given on the command line win.
std::vector<std::string> apply_config(CLI::App& app, std::vector<std::string> args) {
  auto it = std::find(args.begin(), args.end(), "--config");
  if (it == args.end()) return args;
  if (it + 1 == args.end()) throw CLI::ArgumentMismatch("--config needs a file");
  const std::string path = *(it + 1);
  args.erase(it, it + 2);

  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path);
  CLI::App* sub = nullptr;
  std::size_t sub_pos = 0;
  for (std::size_t k = 0; k < args.size(); ++k) {
    if ((sub = app.get_subcommand_no_throw(args[k])) != nullptr) {
      sub_pos = k;
      break;
    }
  }
  std::vector<std::string> injected;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      if (a == std::string::npos) return std::string();
      return s.substr(a, s.find_last_not_of(" \t\r") - a + 1);
    };
    if (trim(line).empty()) continue;
    if (eq == std::string::npos) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": expected `key = value`");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const std::string flag = "--" + key;
    const CLI::App* owner = nullptr;
    if (sub && sub->get_option_no_throw(flag)) {
      owner = sub;
    } else if (app.get_option_no_throw(flag)) {
      owner = &app;
    }
    if (!owner) throw std::runtime_error(path + ":" + std::to_string(line_no) + ": unknown key '" + key + "'");
    const CLI::Option* opt = owner->get_option(flag);
    if (opt->get_type_size() == 0) {
      if (value == "true" || value == "1") injected.push_back(flag);
    } else {
      injected.push_back(flag);
      injected.push_back(value);
    }
  }
  const std::size_t at = sub ? sub_pos + 1 : 0;
  args.insert(args.begin() + static_cast<std::ptrdiff_t>(at), injected.begin(), injected.end());
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minibatch top-down decision tree learning, local learning and learnability estimation"};
  app.require_subcommand(1);
  app.fallthrough();
  // Config values are injected ahead of the user's flags; the last one wins.
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  Globals g;
  app.add_flag("--theory", g.theory, "Print the recommended theory parameters");
  app.add_flag("--machine", g.machine, "Full-precision numeric output");
  app.add_option("--s", g.s, "Comparison size s for --theory")->check(CLI::Range(2ul, 1ul << 40));
  app.add_option("--epsilon", g.epsilon, "Accuracy epsilon for --theory");
  app.add_option("--delta", g.delta, "Failure probability delta for --theory");
  app.add_option("--eta", g.eta, "Size slack eta for --theory");
  app.add_option("--config", "File of `key = value` defaults");

  // gen-data
  auto* gen = app.add_subcommand("gen-data", "Sample a labeled dataset from a target");
  std::string gen_target, gen_out;
  std::size_t gen_d = 0, gen_n = 0;
  std::uint64_t gen_seed = 0;
  bool gen_unlabeled = false;
  gen->add_option("--target", gen_target, "Target spec")->required();
  gen->add_option("--d", gen_d, "Dimension")->required()->check(CLI::Range(1, 64));
  gen->add_option("--n", gen_n, "Number of points")->required();
  gen->add_option("--seed", gen_seed, "Master seed");
  gen->add_option("--out", gen_out, "Output file (stdout if omitted)");
  gen->add_flag("--unlabeled", gen_unlabeled, "Omit labels");

  // train
  auto* train = app.add_subcommand("train", "Train a tree on a labeled dataset");
  Common tc;
  std::string algo = "minibatch", data_path, out_tree, out_trace;
  add_common(train, tc);
  train->add_option("--algo", algo, "full | minibatch | size-estimate")
      ->check(CLI::IsMember({"full", "minibatch", "size-estimate"}));
  train->add_option("--data", data_path, "Labeled dataset file")->required();
  train->add_option("--out-tree", out_tree, "Tree output file (stdout if omitted)");
  train->add_option("--out-trace", out_trace, "Trace output file");

  // local-predict
  auto* local = app.add_subcommand("local-predict", "Predict T(x) while labeling few training points");
  Common lc;
  std::string local_data, local_target, local_x;
  bool report_queries = false;
  add_common(local, lc);
  local->add_option("--unlabeled", local_data, "Unlabeled dataset file")->required();
  local->add_option("--target", local_target, "Target spec answering label queries")->required();
  local->add_option("--x", local_x, "Query point, e.g. +-+- or 1,-1,1,-1")->required();
  local->add_flag("--report-queries", report_queries, "Print the label count");

  // estimate
  auto* est = app.add_subcommand("estimate", "Estimate the test error of the would-be tree");
  Common ec;
  std::string est_data, est_target, est_test, budget_path;
  add_common(est, ec);
  est->add_option("--unlabeled", est_data, "Unlabeled dataset file")->required();
  est->add_option("--target", est_target, "Target spec answering label queries")->required();
  est->add_option("--test", est_test, "Labeled test set file")->required();
  est->add_option("--budget-report", budget_path, "Write a label budget report here");

  // size-estimate
  auto* size = app.add_subcommand("size-estimate", "Estimate a tree's size from random strands");
  std::string size_tree;
  std::size_t size_m = 0;
  double size_accuracy = 2.0;
  std::uint64_t size_seed = 0;
  size->add_option("--tree", size_tree, "Tree file")->required();
  size->add_option("--m", size_m, "Number of strand points (default: from --accuracy and --delta)");
  size->add_option("--accuracy", size_accuracy, "Target accuracy when m is derived")->check(CLI::PositiveNumber);
  size->add_option("--seed", size_seed, "Master seed");

  // verify
  auto* verify = app.add_subcommand("verify", "Run brute-force checks");
  std::string v_target, v_tree, v_trace;
  std::size_t v_d = 0, v_trials = 100;
  std::uint64_t v_seed = 0;
  verify->add_option("--target", v_target, "Target spec");
  verify->add_option("--d", v_d, "Dimension of the target")->check(CLI::Range(1, 24));
  verify->add_option("--tree", v_tree, "Tree file to check against the target");
  verify->add_option("--trace", v_trace, "Trace file to check for shallow splits");
  verify->add_option("--trials", v_trials, "Random telescoping triples");
  verify->add_option("--seed", v_seed, "Master seed");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Tabulate estimator output while varying one parameter");
  Common sc;
  std::string vary, values_text, sweep_target;
  std::size_t sweep_d = 0, sweep_n = 4096, sweep_seeds = 20, sweep_test = 200;
  add_common(sweep, sc);
  sweep->add_option("--vary", vary, "b | t | n")->required()->check(CLI::IsMember({"b", "t", "n"}));
  sweep->add_option("--values", values_text, "Comma-separated values")->required();
  sweep->add_option("--target", sweep_target, "Target spec")->required();
  sweep->add_option("--d", sweep_d, "Dimension")->required()->check(CLI::Range(1, 64));
  sweep->add_option("--n", sweep_n, "Training set size");
  sweep->add_option("--seeds", sweep_seeds, "Seeds per value (seed, seed+1, ...)")->check(CLI::PositiveNumber);
  sweep->add_option("--test-size", sweep_test, "Uniform test points per run")->check(CLI::PositiveNumber);

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args = apply_config(app, std::move(args));
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (*gen) {
      const TargetFunction f = TargetFunction::parse(gen_target, gen_d);
      const LabeledDataset data = sample_dataset(f, gen_n, gen_d, RandomnessTape(gen_seed));
      std::ostringstream text;
      if (gen_unlabeled) {
        write_dataset(text, data.unlabeled());
      } else {
        write_dataset(text, data);
      }
      if (gen_out.empty()) {
        std::cout << text.str();
      } else {
        write_text(gen_out, text.str());
      }
      return 0;
    }

    if (*train) {
      const LabeledDataset data = load_labeled_dataset(data_path);
      const ImpurityFunction impurity = impurity_by_name(tc.impurity);
      print_theory(g, tc.t, data.dimension(), impurity);
      const RandomnessTape tape(tc.seed);
      GrowthResult r = algo == "full"        ? top_down_full(tc.t, data, impurity)
                       : algo == "minibatch" ? minibatch_top_down(tc.t, tc.b, data, impurity, tape)
                                             : top_down_size_estimate(tc.t, tc.b, data, impurity, tape);
      if (out_tree.empty()) {
        std::cout << format_tree(r.tree) << '\n';
      } else {
        save_tree(out_tree, r.tree);
      }
      if (!out_trace.empty()) {
        std::ostringstream trace;
        r.trace.write(trace, g.machine);
        write_text(out_trace, trace.str());
      }
      std::cerr << "size=" << r.tree.size() << " depth=" << r.tree.shape().max_depth()
                << " splits=" << r.trace.size();
      if (algo == "size-estimate") std::cerr << " e=" << number(r.size_estimate, g.machine);
      std::cerr << '\n';
      return 0;
    }

    if (*local) {
      const UnlabeledDataset data = load_unlabeled_dataset(local_data);
      const TargetFunction f = TargetFunction::parse(local_target, data.dimension());
      const Point x = Point::parse(local_x);
      if (x.dimension() != data.dimension()) throw std::invalid_argument("--x has the wrong dimension");
      const ImpurityFunction impurity = impurity_by_name(lc.impurity);
      print_theory(g, lc.t, data.dimension(), impurity);
      LabelOracle oracle = target_oracle(data, f);
      LocalLearner learner(lc.t, lc.b, data, oracle, impurity, RandomnessTape(lc.seed));
      const LocalPrediction p = learner.predict(x);
      std::cout << "label=" << static_cast<int>(p.label) << " leaf=" << p.leaf.encode()
                << " e=" << number(p.size_estimate, g.machine);
      if (report_queries) {
        std::cout << " unique_labels=" << oracle.query_count() << " batches=" << oracle.batches_drawn()
                  << " bound=" << local_label_bound(lc.t, lc.b);
      }
      std::cout << '\n';
      return 0;
    }

    if (*est) {
      const UnlabeledDataset data = load_unlabeled_dataset(est_data);
      const TestSet test = load_labeled_dataset(est_test);
      const TargetFunction f = TargetFunction::parse(est_target, data.dimension());
      const ImpurityFunction impurity = impurity_by_name(ec.impurity);
      print_theory(g, ec.t, data.dimension(), impurity);
      LabelOracle oracle = target_oracle(data, f);
      const EstimateResult r =
          estimate_learnability(ec.t, ec.b, data, oracle, test, impurity, RandomnessTape(ec.seed));
      std::cout << "error=" << number(r.error, g.machine) << " unique_labels=" << r.unique_labels
                << " batches=" << r.batches << " t_prime=" << r.t_prime << " test_size=" << r.test_size << '\n';
      if (!budget_path.empty()) {
        const BudgetReport report = query_budget_report(oracle, ec.t, ec.b, test.size());
        std::ostringstream text;
        text << "unique_labels " << report.unique_labels << "\nbatches " << report.batches << "\nbound "
             << *report.bound << "\nwithin_bound " << (report.within_bound() ? "yes" : "no") << '\n';
        for (const auto& [phase, count] : report.labels_by_phase) text << "labels." << phase << ' ' << count << '\n';
        for (const auto& [phase, count] : report.batches_by_phase) {
          text << "batches." << phase << ' ' << count << '\n';
        }
        write_text(budget_path, text.str());
      }
      return 0;
    }

    if (*size) {
      const DecisionTree tree = load_tree(size_tree);
      std::size_t m = size_m;
      if (m == 0) m = size_estimator_samples(tree.shape().max_depth(), size_accuracy, g.delta);
      auto stream = RandomnessTape(size_seed).stream(tape_domain::kStrands);
      std::vector<Point> strands;
      strands.reserve(m);
      for (std::size_t k = 0; k < m; ++k) strands.push_back(stream.point(tree.dimension()));
      std::cout << "e=" << number(estimate_size(tree.shape(), strands), g.machine) << " size=" << tree.size()
                << " m=" << m << '\n';
      return 0;
    }

    if (*verify) {
      bool ok = true;
      auto report = [&](const std::string& name, bool pass, const std::string& detail = "") {
        std::cout << name << ": " << (pass ? "ok" : "FAILED") << (detail.empty() ? "" : " (" + detail + ")") << '\n';
        ok = ok && pass;
      };
      std::optional<TargetFunction> f;
      if (!v_target.empty()) {
        if (v_d == 0) throw std::invalid_argument("--target needs --d");
        f = TargetFunction::parse(v_target, v_d);
        report("monotone", true, is_monotone(*f) ? "yes" : "no");
      }
      if (!v_tree.empty()) {
        const DecisionTree tree = load_tree(v_tree, f ? std::optional<std::size_t>(f->dimension()) : std::nullopt);
        bool agree = true;
        if (tree.dimension() <= kMaxExhaustiveDimension) {
          for (std::uint64_t m = 0; m < (std::uint64_t{1} << tree.dimension()); ++m) {
            const Point x(tree.dimension(), m);
            agree = agree && tree.evaluate(x) == oracle::scan_evaluate(tree, x);
          }
          report("second evaluator", agree);
          report("size expectation", oracle::exact_size_sum(tree.shape()) == tree.size() << tree.dimension(),
                 "E[2^depth] = " + number(oracle::exact_size_expectation(tree.shape()), g.machine));
        }
        if (f) report("exact error", true, number(exact_error(*f, tree), g.machine));
      }
      if (!v_trace.empty()) {
        std::ifstream in(v_trace);
        if (!in) throw std::runtime_error("cannot open " + v_trace);
        const RunTrace trace = RunTrace::read(in);
        report("shallow splits", oracle::check_shallow_splits(trace), std::to_string(trace.size()) + " splits");
      }
      std::size_t passed = 0;
      auto stream = RandomnessTape(v_seed).stream("verify");
      const std::size_t d = f ? std::min<std::size_t>(f->dimension(), 12) : 8;
      const auto impurities = builtin_impurities();
      for (std::size_t k = 0; k < v_trials; ++k) {
        const TargetFunction target =
            f && f->dimension() <= 12 ? *f : TargetFunction::tree(random_tree(d, 5, 0.7, stream));
        const PartialTree shape = random_tree(d, std::min<std::size_t>(d - 1, 4), 0.6, stream).shape();
        const auto leaves = shape.leaves();
        const NodeId leaf = leaves[stream.uniform_below(leaves.size())];
        std::size_t coord = 0;
        do {
          coord = stream.uniform_below(d);
        } while (shape.node(leaf).path.uses(coord));
        passed += oracle::check_telescoping(impurities[k % 3], target, shape, leaf, coord);
      }
      report("telescoping", passed == v_trials, std::to_string(passed) + "/" + std::to_string(v_trials));
      return ok ? 0 : 1;
    }

    if (*sweep) {
      std::vector<std::size_t> values;
      std::stringstream list(values_text);
      for (std::string item; std::getline(list, item, ',');) {
        std::size_t used = 0;
        const unsigned long v = std::stoul(item, &used);
        if (used != item.size() || v == 0) throw std::invalid_argument("bad --values entry '" + item + "'");
        values.push_back(v);
      }
      const TargetFunction f = TargetFunction::parse(sweep_target, sweep_d);
      const ImpurityFunction impurity = impurity_by_name(sc.impurity);
      print_theory(g, sc.t, sweep_d, impurity);
      std::cout << "parameter\terror\tunique_labels\tt_prime\n";
      for (std::size_t value : values) {
        const std::size_t t = vary == "t" ? value : sc.t;
        const std::size_t b = vary == "b" ? value : sc.b;
        const std::size_t n = vary == "n" ? value : sweep_n;
        std::vector<EstimateResult> runs(sweep_seeds);
        parallel_for(sweep_seeds, [&](std::size_t k) {
          const RandomnessTape tape(sc.seed + k);
          const UnlabeledDataset data = sample_dataset(f, n, sweep_d, tape).unlabeled();
          const TestSet test = sample_dataset(f, sweep_test, sweep_d, tape, "test");
          LabelOracle oracle = target_oracle(data, f);
          runs[k] = estimate_learnability(t, b, data, oracle, test, impurity, tape);
        });
        auto median = [&](auto field) {
          std::vector<double> v;
          for (const auto& r : runs) v.push_back(static_cast<double>(field(r)));
          std::sort(v.begin(), v.end());
          const std::size_t h = v.size() / 2;
          return v.size() % 2 ? v[h] : (v[h - 1] + v[h]) / 2.0;
        };
        std::cout << value << '\t' << number(median([](const auto& r) { return r.error; }), g.machine) << '\t'
                  << count(median([](const auto& r) { return r.unique_labels; })) << '\t'
                  << count(median([](const auto& r) { return r.t_prime; })) << '\n';
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
