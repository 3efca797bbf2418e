// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "cnfold/apps.hpp"
#include "cnfold/bruteforce.hpp"
#include "cnfold/convexmax.hpp"
#include "cnfold/graver.hpp"
#include "cnfold/ip_solver.hpp"
#include "cnfold/nfold.hpp"
#include "cnfold/zonotope.hpp"
#include "support.hpp"

using namespace cnfold;
using cnfold::testing::M;
using cnfold::testing::V;
using cnfold::testing::random_matrix;
using cnfold::testing::random_vector;
using Clock = std::chrono::steady_clock;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

NFoldStencil transport_2x2() {
  return NFoldStencil(IntMat::identity(4), M({{1, 1, 0, 0}, {0, 0, 1, 1}, {1, 0, 1, 0}, {0, 1, 0, 1}}));
}

int best_value_index(const std::vector<IntVec>& points, const IntVec& w) {
  int best = -1;
  Integer value;
  for (std::size_t i = 0; i < points.size(); ++i) {
    Integer v = dot(w, points[i]);
    if (best < 0 || v > value) {
      best = static_cast<int>(i);
      value = v;
    }
  }
  return best;
}

// ---------------------------------------------------------------------------

Verdict graver_example() {
  auto start = Clock::now();
  GraverBasis g = graver_basis(M({{1, 2, 1}}));
  double took = seconds_since(start);
  std::vector<IntVec> expected{V({2, -1, 0}), V({0, -1, 2}), V({1, 0, -1}), V({1, -1, 1})};
  for (std::size_t i = 0; i < 4; ++i) expected.push_back(-expected[i]);
  sort_unique(expected);
  Verdict v;
  if (g.elements() != expected) v.fail("basis differs: " + matrix_to_string(g.canonical_matrix()));
  if (took >= 1.0) v.fail("took " + fmt(took) + " s");
  if (v.pass) v.detail = "8 elements, " + fmt(took) + " s";
  return v;
}

Verdict nproduct_example() {
  auto start = Clock::now();
  IntMat got = nproduct(M({{1, 1, 1}}), 3);
  double took = seconds_since(start);
  IntMat expected = M({{1, 0, 0, 1, 0, 0, 1, 0, 0},
                       {0, 1, 0, 0, 1, 0, 0, 1, 0},
                       {0, 0, 1, 0, 0, 1, 0, 0, 1},
                       {1, 1, 1, 0, 0, 0, 0, 0, 0},
                       {0, 0, 0, 1, 1, 1, 0, 0, 0},
                       {0, 0, 0, 0, 0, 0, 1, 1, 1}});
  Verdict v;
  if (got != expected) v.fail("matrix differs:\n" + matrix_to_string(got));
  if (took >= 1.0) v.fail("took " + fmt(took) + " s");
  if (v.pass) v.detail = "6x9 matrix matches";
  return v;
}

Verdict graver_oracle() {
  auto start = Clock::now();
  std::mt19937 rng(101);
  Verdict v;
  int compared = 0, skipped = 0;
  for (int trial = 0; trial < 2000 && compared < 240; ++trial) {
    std::size_t m = 1 + rng() % 3, n = 2 + rng() % 4;
    IntMat a = random_matrix(rng, m, n, -3, 3);
    GraverBasis g = graver_basis(a);
    long long box = 1;
    for (const auto& e : g.elements()) box = std::max<long long>(box, to_int64(norm_max(e)));
    if (std::pow(2.0 * box + 1, static_cast<double>(n)) > 5e6) {
      ++skipped;
      continue;
    }
    ++compared;
    if (g.elements() != brute_force_graver(a, box).elements()) v.fail("mismatch on\n" + matrix_to_string(a));
  }
  double took = seconds_since(start);
  if (compared < 200) v.fail("only " + std::to_string(compared) + " comparisons");
  if (took >= 300) v.fail("took " + fmt(took) + " s");
  if (v.pass) {
    v.detail = std::to_string(compared) + " matrices agree (" + std::to_string(skipped) + " outside box budget), " +
               fmt(took) + " s";
  }
  return v;
}

Verdict stabilization() {
  auto start = Clock::now();
  std::vector<NFoldStencil> stencils{
      NFoldStencil(M({{1}}), M({{1}})),
      NFoldStencil(M({{1, 0}}), M({{1, -1}})),
      NFoldStencil(IntMat::identity(2), M({{1, 1}})),
      NFoldStencil(IntMat::identity(2), M({{2, 1}})),
      transport_2x2(),
      NFoldStencil(IntMat::identity(3), M({{2, 1, 1}})),
  };
  NFoldOptions lift;
  lift.force_lift = true;
  Verdict v;
  int comparisons = 0;
  for (const auto& st : stencils) {
    std::size_t g = graver_complexity(st);
    for (std::size_t n = 1; n <= g + 2; ++n) {
      ++comparisons;
      if (nfold_graver(st, n, lift).elements() != graver_basis(nfold_matrix(st, n)).elements()) {
        v.fail("n=" + std::to_string(n) + " differs for\n" + matrix_to_string(st.stacked()));
      }
    }
  }
  double took = seconds_since(start);
  if (took >= 600) v.fail("took " + fmt(took) + " s");
  if (v.pass) {
    v.detail = std::to_string(stencils.size()) + " stencils, " + std::to_string(comparisons) + " (stencil, n) pairs, " +
               fmt(took) + " s";
  }
  return v;
}

Verdict ip_oracle() {
  auto start = Clock::now();
  std::mt19937 rng(202);
  Verdict v;
  int bounded = 0, infeasible = 0, unbounded = 0;
  auto check_bounded = [&](const NFoldStencil& st, std::size_t n, const NFoldRhs& b, const IntVec& w) {
    auto points = enumerate_feasible(nfold_matrix(st, n), b.concatenated());
    SolveOutcome r = solve_nfold_ip(st, n, w, b);
    ++bounded;
    if (points.empty()) {
      ++infeasible;
      if (r.status != Status::Infeasible) v.fail("expected infeasible");
      return;
    }
    if (!r.is_optimal()) {
      v.fail("expected optimal");
      return;
    }
    if (r.value != dot(w, points[best_value_index(points, w)])) v.fail("optimal value differs from enumeration");
    if (mat_vec(nfold_matrix(st, n), r.x) != b.concatenated() || !is_nonnegative(r.x)) v.fail("returned point infeasible");
  };

  NFoldStencil transport = transport_2x2();
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t n = 2 + trial % 2;
    IntVec table = random_vector(rng, 4 * n, 0, 2);
    NFoldRhs b = NFoldRhs::split(mat_vec(nfold_matrix(transport, n), table), 4, 4, n);
    if (trial % 8 == 7) b.layers[0][0] += 1;  // breaks the layer total
    check_bounded(transport, n, b, random_vector(rng, 4 * n, -3, 3));
  }
  for (int trial = 0; trial < 70; ++trial) {
    std::size_t r = 1 + trial % 2, t = 2 + trial % 2, n = 2 + trial % (t == 2 ? 3 : 2);
    NFoldStencil st(random_matrix(rng, r, t, 0, 2), random_matrix(rng, 1, t, 1, 2));
    NFoldRhs b;
    if (trial % 3 == 0) {
      b.b0 = random_vector(rng, r, 0, 4);
      for (std::size_t k = 0; k < n; ++k) b.layers.push_back(random_vector(rng, 1, 0, 3));
    } else {
      b = NFoldRhs::split(mat_vec(nfold_matrix(st, n), random_vector(rng, n * t, 0, 2)), r, 1, n);
    }
    check_bounded(st, n, b, random_vector(rng, n * t, -3, 3));
  }
  // Stencils with nonnegative kernel rays: Unbounded must come with a valid
  // ray.
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 2;
    NFoldStencil st(random_matrix(rng, 1, 3, -2, 2), random_matrix(rng, 1, 3, -2, 2));
    IntMat a = nfold_matrix(st, n);
    IntVec x0 = random_vector(rng, 3 * n, 0, 2);
    NFoldRhs b = NFoldRhs::split(mat_vec(a, x0), 1, 1, n);
    IntVec w = random_vector(rng, 3 * n, -2, 2);
    SolveOutcome r = solve_nfold_ip(st, n, w, b);
    if (r.status == Status::Infeasible) {
      v.fail("feasible instance reported infeasible");
    } else if (r.status == Status::Unbounded) {
      ++unbounded;
      if (!is_nonnegative(r.certificate) || !is_zero(mat_vec(a, r.certificate)) || dot(w, r.certificate) <= 0) {
        v.fail("invalid unbounded certificate");
      }
    } else {
      // The optimum may sit outside any box, so check it beats the box and
      // equals the box maximum whenever it lies inside.
      EnumBudget box;
      box.upper = IntVec(3 * n, Integer(6));
      auto points = enumerate_feasible(a, b.concatenated(), box);
      Integer in_box = dot(w, points[best_value_index(points, w)]);
      bool inside = true;
      for (const auto& xi : r.x) inside = inside && xi <= 6;
      if (mat_vec(a, r.x) != b.concatenated() || !is_nonnegative(r.x) || r.value != dot(w, r.x)) {
        v.fail("returned point infeasible");
      } else if (r.value < in_box || (inside && r.value != in_box)) {
        v.fail("optimal value disagrees with box enumeration");
      }
    }
  }
  double took = seconds_since(start);
  if (bounded < 100) v.fail("only " + std::to_string(bounded) + " bounded instances");
  if (unbounded == 0) v.fail("no unbounded instance exercised");
  if (took >= 600) v.fail("took " + fmt(took) + " s");
  if (v.pass) {
    v.detail = std::to_string(bounded) + " bounded (" + std::to_string(infeasible) + " infeasible), " +
               std::to_string(unbounded) + " unbounded certificates, " + fmt(took) + " s";
  }
  return v;
}

Verdict zonotope_oracle() {
  auto start = Clock::now();
  std::mt19937 rng(303);
  Verdict v;
  int sets = 0, degenerate = 0;
  for (int trial = 0; trial < 150; ++trial) {
    std::size_t d = 1 + trial % 3;
    std::size_t m = d == 3 ? 1 + rng() % 8 : 1 + rng() % 12;
    std::vector<IntVec> gens;
    bool special = trial % 4 == 0;
    for (std::size_t i = 0; i < m; ++i) {
      if (special && i > 0 && rng() % 3 == 0) {
        gens.push_back(scaled(gens[rng() % gens.size()], Integer(static_cast<int>(rng() % 5) - 2)));  // parallel or zero
      } else {
        gens.push_back(random_vector(rng, d, -3, 3));
      }
    }
    if (special) ++degenerate;
    ++sets;
    auto got = zonotope_vertices(gens, d);
    auto expected = exhaustive_zonotope_vertices(gens, d);
    std::vector<IntVec> got_vertices;
    for (const auto& z : got) got_vertices.push_back(z.vertex);
    if (got_vertices != expected) {
      v.fail("vertex set differs on set " + std::to_string(trial));
      continue;
    }
    for (const auto& z : got) {
      for (const auto& other : expected) {
        if (other != z.vertex && dot(z.certificate, z.vertex) <= dot(z.certificate, other)) {
          v.fail("certificate does not separate on set " + std::to_string(trial));
        }
      }
    }
  }
  double took = seconds_since(start);
  if (took >= 300) v.fail("took " + fmt(took) + " s");
  if (v.pass) {
    v.detail = std::to_string(sets) + " generator sets (" + std::to_string(degenerate) +
               " with parallel or zero generators), " + fmt(took) + " s";
  }
  return v;
}

// Criteria 7 and 8 share one run.
struct EndToEnd {
  Verdict equivalence;
  std::size_t identity_checks = 0;
  std::size_t identity_failures = 0;
};

class BasisCache {
 public:
  const GraverBasis& get(const NFoldStencil& st, std::size_t n) {
    std::ostringstream key;
    write_stencil(key, st);
    key << n;
    auto it = cache_.find(key.str());
    if (it == cache_.end()) it = cache_.emplace(key.str(), nfold_graver(st, n)).first;
    return it->second;
  }

 private:
  std::map<std::string, GraverBasis> cache_;
};

EndToEnd end_to_end() {
  auto start = Clock::now();
  std::mt19937 rng(404);
  EndToEnd out;
  Verdict& v = out.equivalence;
  BasisCache cache;
  std::map<std::string, int> counts;

  auto random_objective = [&](std::size_t d, int trial) {
    if (trial % 2 == 0) return norm2_objective();
    std::vector<IntVec> forms;
    for (int i = 0; i < 3; ++i) forms.push_back(random_vector(rng, d, -3, 3));
    return max_linear_objective(forms, random_vector(rng, 3, -2, 2));
  };

  auto run = [&](const std::string& family, const NFoldStencil& st, std::size_t n, const NFoldRhs& b,
                 const ObjectiveWeights& w, const ConvexObjective& c) {
    ++counts[family];
    IntegerProgram program = make_nfold_program(st, n, b, cache.get(st, n));
    ConvexOptions one, many;
    many.threads = 4;
    ConvexOutcome o1 = solve_convex_program(program, w, c, one);
    ConvexOutcome o4 = solve_convex_program(program, w, c, many);
    out.identity_checks += o1.stats.identity_checks + o4.stats.identity_checks;
    out.identity_failures += o1.stats.identity_failures + o4.stats.identity_failures;
    if (o1.status != o4.status || o1.x != o4.x || o1.z != o4.z) v.fail(family + ": result depends on thread count");
    auto points = enumerate_feasible(nfold_matrix(st, n), b.concatenated());
    if (points.empty()) {
      if (o1.status != ConvexStatus::Infeasible) v.fail(family + ": expected infeasible");
      return;
    }
    if (!o1.is_optimal()) {
      v.fail(family + ": expected optimal");
      return;
    }
    ConvexArgmax best = brute_convex_max(points, w, c);
    if (*c.value(o1.z) != *c.value(best.z)) v.fail(family + ": objective value differs from enumeration");
  };

  NFoldStencil transport = transport_2x2();
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t n = 2 + trial % 3;
    IntVec table = random_vector(rng, 4 * n, 0, 2);
    NFoldRhs b = NFoldRhs::split(mat_vec(nfold_matrix(transport, n), table), 4, 4, n);
    std::size_t d = 1 + trial % 2;
    run("transport", transport, n, b, ObjectiveWeights(random_matrix(rng, d, 4 * n, -2, 2)),
        random_objective(d, trial));
  }

  const std::vector<IntVec> weight_sets{V({1}), V({2}), V({3}), V({1, 1}), V({2, 1})};
  for (int trial = 0; trial < 40; ++trial) {
    const IntVec& weights = weight_sets[trial % weight_sets.size()];
    std::size_t bins = 1 + (trial / weight_sets.size()) % 4;
    PackingInstance inst{weights, random_vector(rng, weights.size(), 0, 3), random_vector(rng, bins, 0, 4)};
    PackingEncoding enc = build_packing(inst);
    std::size_t d = 1 + trial % 2;
    std::vector<IntMat> utilities;
    for (std::size_t i = 0; i < d; ++i) utilities.push_back(random_matrix(rng, weights.size(), bins, -2, 3));
    run("packing", enc.stencil, bins, enc.rhs, enc.lift_utilities(utilities), random_objective(d, trial));
  }

  for (int trial = 0; trial < 30; ++trial) {
    std::size_t n = 2 + 2 * (trial % 4);  // 2, 4, 6, 8
    std::size_t k = n == 8 ? 1 : 1 + trial % 2;
    PartitionInstance inst{2, k, {}, IntVec{Integer(n / 2), Integer(n / 2)}};
    for (std::size_t i = 0; i < n; ++i) inst.items.push_back(random_vector(rng, k, -4, 4));
    PartitionEncoding enc = build_partition(inst);
    run("partition", enc.stencil, n, enc.rhs, enc.weights, random_objective(2 * k, trial));
  }

  double took = seconds_since(start);
  int total = 0;
  for (const auto& [_, c] : counts) total += c;
  if (total < 100) v.fail("only " + std::to_string(total) + " instances");
  if (took >= 900) v.fail("took " + fmt(took) + " s");
  if (v.pass) {
    v.detail = std::to_string(total) + " instances (transport " + std::to_string(counts["transport"]) + ", packing " +
               std::to_string(counts["packing"]) + ", partition " + std::to_string(counts["partition"]) +
               "), threads 1 and 4 agree, " + fmt(took) + " s";
  }
  return out;
}

Verdict identity(const EndToEnd& e) {
  Verdict v;
  if (e.identity_checks == 0) v.fail("no identity checks recorded");
  if (e.identity_failures != 0) v.fail(std::to_string(e.identity_failures) + " identity failures");
  v.detail = std::to_string(e.identity_checks) + " checks, " + std::to_string(e.identity_failures) + " failures";
  return v;
}

Verdict clustering() {
  PartitionInstance inst{2, 2, {V({0, 0}), V({1, 0}), V({0, 1}), V({5, 5}), V({6, 4}), V({5, 6})}, V({3, 3})};
  PartitionEncoding enc = build_partition(inst);
  ConvexOutcome o = solve_convex_nfold(enc.stencil, 6, enc.weights, enc.rhs, norm2_objective());
  Verdict v;
  if (!o.is_optimal()) {
    v.fail("pipeline did not return a partition");
    return v;
  }
  Rational got = cluster_variance(inst, enc.decode(o.x));
  auto all = enumerate_partitions(6, 2, inst.sizes);
  Rational best = cluster_variance(inst, all.front());
  for (const auto& pi : all) best = std::min(best, cluster_variance(inst, pi));
  if (got != best) v.fail("variance " + got.str() + " but minimum is " + best.str());
  v.detail = "variance " + got.str() + " = minimum over " + std::to_string(all.size()) + " balanced partitions";
  return v;
}

Verdict growth() {
  std::mt19937 rng(505);
  NFoldStencil st = transport_2x2();
  Verdict v;
  std::vector<double> times;
  std::string trace;
  for (std::size_t n : {4u, 8u, 16u, 32u}) {
    IntVec table = random_vector(rng, 4 * n, 0, 2);
    NFoldRhs b = NFoldRhs::split(mat_vec(nfold_matrix(st, n), table), 4, 4, n);
    ObjectiveWeights w(random_matrix(rng, 2, 4 * n, -2, 2));
    // Mean over enough repetitions that timer resolution does not matter.
    int reps = 0;
    auto start = Clock::now();
    do {
      ConvexOutcome o = solve_convex_nfold(st, n, w, b, norm2_objective());
      if (!o.is_optimal()) v.fail("n=" + std::to_string(n) + " not optimal");
      ++reps;
    } while (seconds_since(start) < 0.25);
    double mean = seconds_since(start) / reps;
    times.push_back(mean);
    trace += (trace.empty() ? "" : ", ") + std::string("n=") + std::to_string(n) + " " + fmt(mean * 1000) + " ms";
  }
  double total = 0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    total += times[i];
    if (i > 0 && times[i] > 8 * times[i - 1]) {
      v.fail("ratio " + fmt(times[i] / times[i - 1]) + " at step " + std::to_string(i) + " (" + trace + ")");
    }
  }
  if (total >= 600) v.fail("took " + fmt(total) + " s");
  if (v.pass) v.detail = trace;
  return v;
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](int id, const char* name, const std::function<Verdict()>& fn) {
    Verdict v;
    try {
      v = fn();
    } catch (const std::exception& e) {
      v.fail(std::string("exception: ") + e.what());
    }
    if (!v.pass) ++failures;
    std::printf("criterion %2d %-28s %s  %s\n", id, name, v.pass ? "PASS" : "FAIL", v.detail.c_str());
    std::fflush(stdout);
  };
  report(1, "graver-example", graver_example);
  report(2, "nproduct-example", nproduct_example);
  report(3, "graver-oracle", graver_oracle);
  report(4, "stabilization", stabilization);
  report(5, "ip-oracle", ip_oracle);
  report(6, "zonotope-oracle", zonotope_oracle);
  EndToEnd e2e;
  bool e2e_ran = false;
  report(7, "convex-equivalence", [&] {
    e2e = end_to_end();
    e2e_ran = true;
    return e2e.equivalence;
  });
  report(8, "per-query-identity", [&] {
    Verdict v;
    if (!e2e_ran) v.fail("end-to-end run did not complete");
    return e2e_ran ? identity(e2e) : v;
  });
  report(9, "clustering", clustering);
  report(10, "polynomial-growth", growth);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
