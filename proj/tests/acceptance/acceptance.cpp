// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "treelab/estimator.hpp"
#include "treelab/impurity.hpp"
#include "treelab/io.hpp"
#include "treelab/learners.hpp"
#include "treelab/local.hpp"
#include "treelab/oracle.hpp"
#include "treelab/params.hpp"
#include "treelab/targets.hpp"

using namespace treelab;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct BudgetLog {
  std::size_t local_calls = 0;
  std::size_t local_violations = 0;
  std::size_t local_worst = 0;
  std::size_t local_bound = 0;
  std::size_t estimator_calls = 0;
  std::size_t estimator_violations = 0;
  std::size_t estimator_worst = 0;
  std::size_t estimator_bound = 0;
};

BudgetLog budgets;

std::string fmt(const char* format, auto... args) {
  char buffer[512];
  std::snprintf(buffer, sizeof buffer, format, args...);
  return buffer;
}

LabeledDataset truth_table(const TargetFunction& f) {
  const std::size_t d = f.dimension();
  LabeledDataset data(d);
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << d); ++m) data.add(Point(d, m), f(Point(d, m)));
  return data;
}

LabelOracle oracle_for(const LabeledDataset& data) {
  return LabelOracle(std::vector<Label>(data.labels().begin(), data.labels().end()));
}

Outcome reduction_equivalence() {
  std::size_t identical = 0, total = 0;
  for (std::uint64_t target = 0; target < 5; ++target) {
    auto stream = RandomnessTape(1000 + target).stream("target");
    const TargetFunction f = TargetFunction::tree(random_tree(8, 5, 0.7, stream));
    const LabeledDataset data = truth_table(f);
    const std::string full = format_tree(top_down_full(16, data, gini()).tree);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      ++total;
      identical += format_tree(minibatch_top_down(16, 256, data, gini(), RandomnessTape(seed)).tree) == full;
    }
  }
  return {identical == total, fmt("%zu/%zu identical trees", identical, total)};
}

Outcome local_global_equivalence() {
  const std::size_t d = 12, t = 32, b = 64;
  const TargetFunction f = TargetFunction::parse("dnf:1|2&3|4&5&6", d);
  std::size_t agree = 0, total = 0;
  budgets.local_bound = local_label_bound(t, b);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const RandomnessTape tape(seed);
    const LabeledDataset data = sample_dataset(f, 8192, d, tape);
    const UnlabeledDataset unlabeled = data.unlabeled();
    const DecisionTree global = top_down_size_estimate(t, b, data, gini(), tape).tree;
    auto queries = tape.stream("queries");
    for (int k = 0; k < 200; ++k) {
      const Point x = queries.point(d);
      LabelOracle oracle = oracle_for(data);
      const Label local = local_learner(t, b, unlabeled, oracle, x, gini(), tape);
      ++total;
      agree += local == global.evaluate(x);
      ++budgets.local_calls;
      budgets.local_worst = std::max(budgets.local_worst, oracle.query_count());
      budgets.local_violations += oracle.query_count() > budgets.local_bound;
    }
  }
  return {agree == total, fmt("%zu/%zu label agreements", agree, total)};
}

Outcome estimator_exactness() {
  const std::size_t d = 12, t = 32, b = 64;
  std::size_t exact = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const RandomnessTape tape(seed);
    auto gen = tape.stream("target");
    const TargetFunction f = TargetFunction::tree(random_monotone_tree(d, 8, gen));
    const LabeledDataset data = sample_dataset(f, 8192, d, tape);
    const DecisionTree global = top_down_size_estimate(t, b, data, gini(), tape).tree;

    // Skewed product marginal; labels from a different function, with noise.
    auto test_stream = tape.stream("test");
    std::vector<double> bias(d);
    for (double& p : bias) p = 0.1 + 0.8 * test_stream.uniform01();
    const TargetFunction other = TargetFunction::parity(d, {0, 5, 9});
    TestSet test(d);
    for (int k = 0; k < 200; ++k) {
      const Point x = k % 2 ? test_stream.biased_point(bias) : test_stream.point(d);
      Label y = k % 3 == 0 ? other(x) : f(x);
      if (test_stream.uniform_below(10) == 0) y = static_cast<Label>(1 - y);
      test.add(x, y);
    }
    std::size_t mistakes = 0;
    for (std::size_t k = 0; k < test.size(); ++k) mistakes += global.evaluate(test.point(k)) != test.label(k);
    const double expected = static_cast<double>(mistakes) / static_cast<double>(test.size());

    LabelOracle oracle = oracle_for(data);
    const EstimateResult r = estimate_learnability(t, b, data.unlabeled(), oracle, test, gini(), tape);
    exact += r.error == expected;

    ++budgets.estimator_calls;
    budgets.estimator_bound = estimator_label_bound(t, b, test.size());
    budgets.estimator_worst = std::max(budgets.estimator_worst, r.unique_labels);
    budgets.estimator_violations += r.unique_labels > budgets.estimator_bound;
  }
  return {exact == 20, fmt("%zu/20 seeds exact", exact)};
}

Outcome size_estimator() {
  std::size_t exact = 0;
  auto stream = RandomnessTape(4).stream("trees");
  for (int k = 0; k < 200; ++k) {
    const std::size_t d = 4 + stream.uniform_below(9);  // 4..12
    const PartialTree shape = random_tree(d, d, 0.65, stream).shape();
    exact += oracle::exact_size_sum(shape) == shape.size() * (std::uint64_t{1} << d);
  }

  const double accuracy = 2.0, delta = 0.1;
  const std::size_t depth = 8;
  const std::size_t m = size_estimator_samples(depth, accuracy, delta);
  std::size_t violations = 0;
  const std::size_t trials = 1000;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    auto s = RandomnessTape(trial).stream("size-trial");
    const PartialTree shape = random_tree(12, depth, 0.7, s).shape();
    std::vector<Point> strands;
    strands.reserve(m);
    for (std::size_t k = 0; k < m; ++k) strands.push_back(s.point(12));
    const double e = estimate_size(shape, strands);
    violations += std::abs(e - static_cast<double>(shape.size())) > accuracy;
  }
  const bool pass = exact == 200 && violations <= static_cast<std::size_t>(2 * delta * trials);
  return {pass, fmt("(a) %zu/200 exact; (b) m=%zu, %zu/%zu trials outside +-2 (limit %zu)", exact, m, violations,
                    trials, static_cast<std::size_t>(2 * delta * trials))};
}

Outcome label_budgets() {
  const bool pass = budgets.local_calls > 0 && budgets.estimator_calls > 0 && budgets.local_violations == 0 &&
                    budgets.estimator_violations == 0;
  return {pass, fmt("local: %zu calls, worst %zu <= %zu, %zu over; estimator: %zu calls, worst %zu <= %zu, %zu over",
                    budgets.local_calls, budgets.local_worst, budgets.local_bound, budgets.local_violations,
                    budgets.estimator_calls, budgets.estimator_worst, budgets.estimator_bound,
                    budgets.estimator_violations)};
}

Outcome telescoping_and_shallow() {
  std::size_t telescoping = 0;
  auto stream = RandomnessTape(6).stream("triples");
  const auto impurities = builtin_impurities();
  for (int k = 0; k < 500; ++k) {
    const TargetFunction f = TargetFunction::tree(random_tree(10, 6, 0.7, stream));
    const PartialTree shape = random_tree(10, 5, 0.6, stream).shape();
    const auto leaves = shape.leaves();
    const NodeId leaf = leaves[stream.uniform_below(leaves.size())];
    std::size_t coord = 0;
    do {
      coord = stream.uniform_below(10);
    } while (shape.node(leaf).path.uses(coord));
    telescoping += oracle::check_telescoping(impurities[k % 3], f, shape, leaf, coord);
  }

  std::size_t shallow_ok = 0, full_size = 0;
  const TargetFunction f = TargetFunction::majority(16);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const RandomnessTape tape(seed);
    const LabeledDataset data = sample_dataset(f, 16384, 16, tape);
    const GrowthResult r = minibatch_top_down(256, 64, data, gini(), tape);
    shallow_ok += oracle::check_shallow_splits(r.trace);
    full_size += r.tree.size() == 256;
  }
  return {telescoping == 500 && shallow_ok == 100,
          fmt("telescoping %zu/500; shallow-splits %zu/100 traces (%zu reached size 256)", telescoping, shallow_ok,
              full_size)};
}

Outcome learning_proxy() {
  const TargetFunction f = TargetFunction::parse("dnf:1|2&3|4&5&6", 10);
  std::string detail;
  bool pass = true;
  for (const ImpurityFunction& g : builtin_impurities()) {
    std::size_t good = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const RandomnessTape tape(seed);
      const LabeledDataset data = sample_dataset(f, 8192, 10, tape);
      good += exact_error(f, minibatch_top_down(64, 256, data, g, tape).tree) <= 0.05;
    }
    pass = pass && good >= 18;
    detail += fmt("%s %zu/20; ", g.name().c_str(), good);
  }
  detail.resize(detail.size() - 2);
  return {pass, detail};
}

Outcome size_concentration() {
  const std::size_t t = 32, d = 12;
  const std::size_t b = local_batch_size(t, 0.25, 0.1);
  const TargetFunction f = TargetFunction::majority(d);
  std::size_t inside = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const RandomnessTape tape(seed);
    const LabeledDataset data = sample_dataset(f, 32768, d, tape);
    const std::size_t t_prime = top_down_size_estimate(t, b, data, gini(), tape).tree.size();
    inside += t_prime >= 24 && t_prime <= 40;
  }
  return {inside >= 90, fmt("b=%zu, t' in [24,40] for %zu/100 seeds", b, inside)};
}

Outcome concentration_checks() {
  const std::size_t t = 16, d = 10, trials = 2000;
  const double delta = 0.1;
  const LeafPath leaf = LeafPath::decode("4+,8-");

  oracle::ConcentrationConfig balance{TargetFunction::dictator(d, 0), leaf, 0, 0, 0.0, trials, 91};
  balance.batch_size = 4 * balance_batch_size(t, d, delta);
  const double balance_rate = oracle::batch_balance_trials(balance).rate();
  balance.batch_size = balance_batch_size(t, d, delta);
  const double formula_rate = oracle::batch_balance_trials(balance).rate();

  const double accuracy = 0.5;
  oracle::ConcentrationConfig gain{TargetFunction::dictator(d, 0), leaf, 0, 0, accuracy, trials, 92};
  gain.batch_size = min_batch_size(gini(), accuracy, t, d, delta);
  const double gain_rate = oracle::gain_accuracy_trials(gini(), gain).rate();

  const bool pass = balance_rate <= 2 * delta && formula_rate <= 2 * delta && gain_rate <= 2 * delta;
  return {pass, fmt("balance b=%zu fail %.4f, b=%zu fail %.4f; gain b=%zu fail %.4f (limit %.2f)",
                    4 * balance.batch_size, balance_rate, balance.batch_size, formula_rate, gain.batch_size, gain_rate,
                    2 * delta)};
}

Outcome impurity_axioms() {
  std::size_t failures = 0;
  for (const ImpurityFunction& g : builtin_impurities()) {
    failures += g(0.0) != 0.0 || g(1.0) != 0.0 || std::abs(g(0.5) - 1.0) > 1e-15;
    for (int a = 0; a <= 1024; ++a) {
      const double pa = a / 1024.0;
      failures += std::abs(g(pa) - g(1.0 - pa)) > 1e-12;
      for (int b = a + 1; b <= 1024; ++b) {
        const double pb = b / 1024.0;
        failures += (g(pa) + g(pb)) / 2.0 > g((pa + pb) / 2.0) + 1e-12;
        failures += std::abs(g(pa) - g(pb)) > g.holder_constant() * std::pow(pb - pa, g.holder_exponent()) + 1e-12;
      }
    }
  }

  // Argmax of (leaf, coordinate) over several scored leaves, before and after scaling G.
  std::size_t invariant = 0;
  auto stream = RandomnessTape(10).stream("scaling");
  const double factors[] = {0.25, 2.0, 3.7, 10.0};
  for (int instance = 0; instance < 100; ++instance) {
    const std::size_t d = 8;
    const PartialTree shape = random_tree(d, 3, 0.7, stream).shape();
    std::vector<std::vector<Point>> points;
    std::vector<std::vector<Label>> labels;
    for (NodeId leaf : shape.leaves()) {
      const LeafPath& path = shape.node(leaf).path;
      points.emplace_back();
      labels.emplace_back();
      for (int k = 0; k < 48; ++k) {
        Point x = stream.point(d);
        for (const PathStep& s : path.steps()) x = x.with_sign(s.coord, s.sign);
        points.back().push_back(x);
        labels.back().push_back(static_cast<Label>((x.positive(stream.uniform_below(d)) + stream.uniform_below(3)) >= 2));
      }
    }
    const auto argmax = [&](const ImpurityFunction& g) {
      std::vector<Candidate> cands;
      const auto leaves = shape.leaves();
      for (std::size_t k = 0; k < leaves.size(); ++k) {
        const LeafPath& path = shape.node(leaves[k]).path;
        if (auto s = best_split(g, points[k], labels[k], path, d)) cands.push_back({s->gain, path.encode(), s->coord, leaves[k]});
      }
      return *std::min_element(cands.begin(), cands.end(), CandidateOrder{});
    };
    bool same = true;
    for (const auto& g : builtin_impurities()) {
      const Candidate ref = argmax(g);
      for (double c : factors) {
        const Candidate scaled = argmax(g.scaled(c));
        same = same && scaled.key == ref.key && scaled.coord == ref.coord;
      }
    }
    invariant += same;
  }
  return {failures == 0 && invariant == 100,
          fmt("%zu grid violations over 1025 points; argmax invariant on %zu/100 instances", failures, invariant)};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"1 reduction equivalence", reduction_equivalence},
      {"2 local/global equivalence", local_global_equivalence},
      {"3 estimator exactness", estimator_exactness},
      {"4 size estimator", size_estimator},
      {"5 label budgets", label_budgets},
      {"6 telescoping and shallow splits", telescoping_and_shallow},
      {"7 learning proxy", learning_proxy},
      {"8 t' concentration", size_concentration},
      {"9 concentration bounds", concentration_checks},
      {"10 impurity axioms", impurity_axioms},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %s: %s [%.2fs]\n", o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str(), seconds);
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
