#pragma once

// Command-line front end. tools/cnfold.cpp is a thin main() around
// dispatch() so tests can drive every subcommand in-process.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "cnfold/apps.hpp"
#include "cnfold/bruteforce.hpp"
#include "cnfold/convexmax.hpp"
#include "cnfold/graver.hpp"
#include "cnfold/integer.hpp"
#include "cnfold/ip_solver.hpp"
#include "cnfold/matrix.hpp"
#include "cnfold/nfold.hpp"
#include "cnfold/objective.hpp"
#include "cnfold/zonotope.hpp"

namespace cnfold::cli {

using json = nlohmann::json;

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,  // verification mismatch or internal inconsistency
  kInfeasible = 2,
  kUnbounded = 3,
  kGuard = 4,
  kUsage = 5,
};

/// Size guards, worker count and output path. Environment variables seed the
/// guards; command-line flags override them.
struct RunConfig {
  std::size_t basis_cap = GraverOptions{}.max_elements;
  std::size_t enum_cap = EnumBudget{}.max_points;
  std::size_t max_dim = ZonotopeOptions{}.max_dim;
  std::size_t threads = 1;
  std::string out;
  std::string objective = "norm2";

  GraverOptions graver() const { return {basis_cap}; }
  NFoldOptions nfold() const {
    NFoldOptions o;
    o.graver = graver();
    return o;
  }
  ConvexOptions convex() const {
    ConvexOptions o;
    o.threads = threads;
    o.zonotope.max_dim = max_dim;
    return o;
  }
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::size_t parse_positive(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || v == 0) throw UsageError(what + " must be a positive integer, got '" + text + "'");
  return static_cast<std::size_t>(v);
}

inline void apply_env(RunConfig& cfg) {
  auto read = [](const char* name, std::size_t& slot) {
    if (const char* v = std::getenv(name)) slot = parse_positive(v, name);
  };
  read("CNFOLD_BASIS_CAP", cfg.basis_cap);
  read("CNFOLD_ENUM_CAP", cfg.enum_cap);
  read("CNFOLD_MAX_DIM", cfg.max_dim);
  read("CNFOLD_THREADS", cfg.threads);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline IntMat load_matrix(const std::string& path) { return matrix_from_string(read_file(path)); }

inline IntVec load_vector(const std::string& path) { return flatten(load_matrix(path)); }

inline NFoldStencil load_stencil(const std::string& path) {
  std::istringstream in(read_file(path));
  return read_stencil(in);
}

inline json load_json(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

/// Writes next to the target, then renames over it.
inline void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream o(tmp, std::ios::binary | std::ios::trunc);
    if (!o) throw UsageError("cannot write '" + tmp.string() + "'");
    o << content;
    if (!o.flush()) throw UsageError("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw UsageError("cannot rename onto '" + path + "': " + ec.message());
  }
}

/// To stdout, or atomically to cfg.out when set.
inline void emit(const RunConfig& cfg, std::ostream& out, const std::string& content) {
  if (cfg.out.empty()) {
    out << content;
  } else {
    write_atomic(cfg.out, content);
  }
}

}  // namespace detail

// JSON integers: numbers when they fit in int64, decimal strings otherwise.

inline json to_json(const Integer& v) {
  if (fits_int64(v)) return to_int64(v);
  return v.str();
}

inline json to_json(const IntVec& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(to_json(x));
  return a;
}

inline Integer integer_from_json(const json& j, const std::string& what) {
  if (j.is_number_integer()) return Integer(j.get<std::int64_t>());
  if (j.is_number_unsigned()) return Integer(j.get<std::uint64_t>());
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    std::size_t start = !s.empty() && s[0] == '-' ? 1 : 0;
    if (s.size() > start && s.find_first_not_of("0123456789", start) == std::string::npos) return Integer(s);
  }
  throw ParseError(what + ": expected an integer, got " + j.dump());
}

inline IntVec vector_from_json(const json& j, const std::string& what) {
  if (!j.is_array()) throw ParseError(what + ": expected an array");
  IntVec v;
  for (const auto& e : j) v.push_back(integer_from_json(e, what));
  return v;
}

inline std::vector<IntVec> rows_from_json(const json& j, const std::string& what) {
  if (!j.is_array()) throw ParseError(what + ": expected an array of arrays");
  std::vector<IntVec> rows;
  for (const auto& r : j) rows.push_back(vector_from_json(r, what));
  return rows;
}

inline const json& field(const json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) throw ParseError(std::string("missing field '") + name + "'");
  return j.at(name);
}

/// "norm2", "linear" (sum of z), "linear:<file>", "maxlin:<file>",
/// "negminlin:<file>". Files are JSON: {"coefficients": [...]} for linear,
/// {"forms": [[...], ...], "offsets": [...]} for the other two.
inline ConvexObjective parse_objective(const std::string& spec, std::size_t d) {
  auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string path = colon == std::string::npos ? "" : spec.substr(colon + 1);
  auto check_len = [d](const IntVec& v) {
    if (v.size() != d) {
      throw DimensionError("objective form has length " + std::to_string(v.size()) + ", expected d = " +
                           std::to_string(d));
    }
  };
  if (kind == "norm2" && path.empty()) return norm2_objective();
  if (kind == "linear") {
    if (path.empty()) return linear_objective(IntVec(d, 1));
    IntVec g = vector_from_json(field(detail::load_json(path), "coefficients"), "coefficients");
    check_len(g);
    return linear_objective(std::move(g));
  }
  if ((kind == "maxlin" || kind == "negminlin") && !path.empty()) {
    json j = detail::load_json(path);
    auto forms = rows_from_json(field(j, "forms"), "forms");
    for (const auto& f : forms) check_len(f);
    IntVec offsets = j.contains("offsets") ? vector_from_json(j.at("offsets"), "offsets") : IntVec{};
    return kind == "maxlin" ? max_linear_objective(std::move(forms), std::move(offsets))
                            : neg_min_linear_objective(std::move(forms), std::move(offsets));
  }
  throw UsageError("unknown objective '" + spec + "' (norm2 | linear[:file] | maxlin:file | negminlin:file)");
}

// ---------------------------------------------------------------------------
// Application instances (JSON)

/// A convex n-fold problem decoded from an application instance, plus a
/// renderer that turns a flat solution back into domain-shaped JSON.
struct AppProblem {
  std::string kind;
  NFoldStencil stencil;
  std::size_t n = 0;
  NFoldRhs rhs;
  ObjectiveWeights weights;
  bool infeasible = false;  // detected while encoding
  IntVec upper;             // variable bounds for exhaustive checks
  std::function<json(const IntVec&)> render;
};

namespace detail {

inline json nest_table(const IntVec& table, const std::vector<std::size_t>& shape, std::size_t axis,
                       std::size_t& pos) {
  json a = json::array();
  for (std::size_t i = 0; i < shape[axis]; ++i) {
    if (axis + 1 == shape.size()) {
      a.push_back(to_json(table[pos++]));
    } else {
      a.push_back(nest_table(table, shape, axis + 1, pos));
    }
  }
  return a;
}

inline std::size_t size_from_json(const json& j, const std::string& what) {
  Integer v = integer_from_json(j, what);
  if (v.sign() <= 0 || !fits_int64(v)) throw ParseError(what + " must be a positive integer");
  return static_cast<std::size_t>(to_int64(v));
}

}  // namespace detail

/// {"dims": [m_1..m_{k-1}], "layers": n, "family": [[1,2],...],
///  "margins": [{"index": [i_1, ..., "+", ...], "value": u}, ...],
///  "weights": [table, ...]} where each weight table is flat, row-major with
/// the layer index last (same layout as the output table).
inline AppProblem transport_problem(const json& j) {
  MultiwayInstance inst;
  for (const auto& m : field(j, "dims")) inst.dims.push_back(detail::size_from_json(m, "dims"));
  inst.k = inst.dims.size() + 1;
  inst.n = detail::size_from_json(field(j, "layers"), "layers");
  for (const auto& f : field(j, "family")) {
    std::vector<int> member;
    for (const auto& a : f) member.push_back(static_cast<int>(detail::size_from_json(a, "family")));
    inst.family.push_back(std::move(member));
  }
  for (const auto& m : field(j, "margins")) {
    std::vector<int> key;
    for (const auto& e : field(m, "index")) {
      if (e.is_string() && e.get<std::string>() == "+") {
        key.push_back(MultiwayInstance::kSummed);
      } else {
        Integer v = integer_from_json(e, "margin index");
        if (v.sign() < 0 || !fits_int64(v)) throw ParseError("margin index out of range");
        key.push_back(static_cast<int>(to_int64(v)));
      }
    }
    if (!inst.margins.emplace(key, integer_from_json(field(m, "value"), "margin value")).second) {
      throw ParseError("duplicate margin");
    }
  }
  MultiwayEncoding enc = build_multiway(inst);
  std::vector<IntVec> tables = rows_from_json(field(j, "weights"), "weights");
  if (tables.empty()) throw ParseError("weights: need at least one table");
  IntMat w(tables.size(), enc.codec.brick() * inst.n);
  for (std::size_t i = 0; i < tables.size(); ++i) {
    IntVec flat = enc.codec.encode(tables[i]);
    for (std::size_t c = 0; c < flat.size(); ++c) w(i, c) = flat[c];
  }
  AppProblem p{"transport", enc.stencil, inst.n, enc.rhs, ObjectiveWeights(std::move(w)), false, {}, {}};
  std::vector<std::size_t> shape = inst.dims;
  shape.push_back(inst.n);
  p.render = [codec = enc.codec, shape](const IntVec& x) {
    IntVec table = codec.decode(x);
    std::size_t pos = 0;
    return json{{"shape", shape}, {"table", detail::nest_table(table, shape, 0, pos)}};
  };
  return p;
}

/// {"weights": [v_j], "counts": [n_j], "capacities": [u_k],
///  "utilities": [[[per-bin values of type 1], ...], ...]}: one types x bins
/// utility matrix per objective coordinate.
inline AppProblem packing_problem(const json& j) {
  PackingInstance inst{vector_from_json(field(j, "weights"), "weights"),
                       vector_from_json(field(j, "counts"), "counts"),
                       vector_from_json(field(j, "capacities"), "capacities")};
  PackingEncoding enc = build_packing(inst);
  std::vector<IntMat> utilities;
  for (const auto& u : field(j, "utilities")) {
    utilities.push_back(IntMat::from_rows(rows_from_json(u, "utilities"), enc.bins()));
  }
  if (utilities.empty()) throw ParseError("utilities: need at least one matrix");
  AppProblem p{"pack", enc.stencil, enc.bins(), enc.rhs, enc.lift_utilities(utilities), enc.infeasible, {}, {}};
  p.render = [enc, caps = inst.capacities](const IntVec& x) {
    IntMat a = enc.decode(x);
    json bins = json::array();
    for (std::size_t k = 0; k < enc.bins(); ++k) {
      IntVec items;
      for (std::size_t t = 0; t + 1 < enc.types(); ++t) items.push_back(a(t, k));
      bins.push_back({{"capacity", to_json(caps[k])}, {"items", to_json(items)},
                      {"slack", to_json(a(enc.types() - 1, k))}});
    }
    return json{{"bins", bins}, {"slack_total", to_json(enc.slack)}};
  };
  return p;
}

/// {"players": p, "items": [[...], ...], "sizes": [...] (optional)}.
inline AppProblem partition_problem(const json& j, PartitionInstance* keep = nullptr) {
  PartitionInstance inst;
  inst.p = detail::size_from_json(field(j, "players"), "players");
  inst.items = rows_from_json(field(j, "items"), "items");
  if (inst.items.empty()) throw ParseError("items: need at least one item");
  inst.k = inst.items[0].size();
  if (j.contains("sizes") && !j.at("sizes").is_null()) inst.sizes = vector_from_json(j.at("sizes"), "sizes");
  PartitionEncoding enc = build_partition(inst);
  AppProblem p{"partition", enc.stencil, enc.n, enc.rhs, enc.weights, false, IntVec(enc.n * enc.p, 1), {}};
  p.render = [enc, inst](const IntVec& x) {
    Partition pi = enc.decode(x);
    json clusters = json::array();
    for (std::size_t h = 0; h < inst.p; ++h) {
      json members = json::array();
      for (std::size_t i = 0; i < pi.size(); ++i) {
        if (pi[i] == h) members.push_back(i);
      }
      clusters.push_back(members);
    }
    json out{{"assignment", pi}, {"clusters", clusters}};
    bool defined = true;
    for (std::size_t h = 0; h < inst.p; ++h) {
      bool empty = clusters[h].empty();
      bool allowed = inst.sizes && (*inst.sizes)[h].is_zero();
      defined = defined && (!empty || allowed);
    }
    if (defined) out["variance"] = cluster_variance(inst, pi).str();
    return out;
  };
  if (keep) *keep = inst;
  return p;
}

inline AppProblem app_problem(const std::string& kind, const json& j) {
  if (kind == "transport") return transport_problem(j);
  if (kind == "pack") return packing_problem(j);
  if (kind == "partition") return partition_problem(j);
  throw UsageError("unknown problem kind '" + kind + "' (transport | pack | partition)");
}

inline ConvexOutcome solve_app(const AppProblem& p, const ConvexObjective& c, const RunConfig& cfg) {
  if (p.infeasible) return {};
  return solve_convex_nfold(p.stencil, p.n, p.weights, p.rhs, c, cfg.convex(), cfg.nfold());
}

namespace detail {

inline json outcome_json(const std::string& schema, const ConvexOutcome& o, const ConvexObjective& c) {
  json j{{"schema", schema}, {"status", to_string(o.status)}, {"objective", c.name()}};
  if (o.is_optimal()) {
    j["x"] = to_json(o.x);
    j["z"] = to_json(o.z);
    if (auto v = c.value(o.z)) j["objective_value"] = to_json(*v);
  }
  if (o.status == ConvexStatus::UnboundedPolyhedron && !o.ray.empty()) j["ray"] = to_json(o.ray);
  j["stats"] = {{"directions", o.stats.directions},
                {"vertices", o.stats.vertices},
                {"queries", o.stats.queries},
                {"identity_checks", o.stats.identity_checks},
                {"identity_failures", o.stats.identity_failures}};
  return j;
}

inline int convex_exit(const ConvexOutcome& o) {
  switch (o.status) {
    case ConvexStatus::Optimal: return kOk;
    case ConvexStatus::Infeasible: return kInfeasible;
    case ConvexStatus::UnboundedPolyhedron: return kUnbounded;
  }
  return kFailure;
}

// Serialized bases keep one element per ± pair (first nonzero positive).
inline std::string basis_text(const GraverBasis& g) { return matrix_to_string(g.canonical_matrix()); }

}  // namespace detail

// ---------------------------------------------------------------------------
// Subcommands

inline int run_graver(const RunConfig& cfg, const std::string& path, std::ostream& out, std::ostream& err) {
  IntMat a = detail::load_matrix(path);
  GraverBasis g = graver_basis(a, cfg.graver());
  detail::emit(cfg, out, detail::basis_text(g));
  err << "graver: " << g.size() / 2 << " canonical elements for a " << a.rows() << "x" << a.cols() << " matrix\n";
  return kOk;
}

inline int run_nfold_graver(const RunConfig& cfg, const std::string& stencil, std::size_t n, bool lift,
                            std::ostream& out, std::ostream& err) {
  NFoldStencil st = detail::load_stencil(stencil);
  NFoldOptions o = cfg.nfold();
  o.force_lift = lift;
  GraverBasis g = nfold_graver(st, n, o);
  detail::emit(cfg, out, detail::basis_text(g));
  err << "nfold-graver: n=" << n << ", complexity " << graver_complexity(st, o.graver) << ", " << g.size() / 2
      << " canonical elements\n";
  return kOk;
}

inline int run_zonotope(const RunConfig& cfg, const std::string& path, std::ostream& out, std::ostream& err) {
  IntMat gens = detail::load_matrix(path);
  ZonotopeOptions zo;
  zo.max_dim = cfg.max_dim;
  auto vertices = zonotope_vertices(gens.row_vectors(), gens.cols(), zo);
  std::ostringstream ss;
  for (const auto& v : vertices) ss << to_string(v.vertex, " ") << " ; " << to_string(v.certificate, " ") << '\n';
  detail::emit(cfg, out, ss.str());
  err << "zonotope: " << vertices.size() << " vertices from " << gens.rows() << " generators in dimension "
      << gens.cols() << "\n";
  return kOk;
}

struct ProgramSource {
  std::string stencil, matrix, rhs;
  std::size_t n = 0;
};

inline IntegerProgram load_program(const RunConfig& cfg, const ProgramSource& src) {
  IntVec b = detail::load_vector(src.rhs);
  if (!src.stencil.empty() == !src.matrix.empty()) throw UsageError("give exactly one of --stencil or --matrix");
  if (!src.matrix.empty()) return make_program(detail::load_matrix(src.matrix), b, cfg.graver());
  if (src.n == 0) throw UsageError("--n is required with --stencil");
  NFoldStencil st = detail::load_stencil(src.stencil);
  return make_nfold_program(st, src.n, NFoldRhs::split(b, st.r, st.s, src.n), cfg.nfold());
}

inline int run_solve_ip(const RunConfig& cfg, const ProgramSource& src, const std::string& obj, std::ostream& out,
                        std::ostream& err) {
  IntegerProgram program = load_program(cfg, src);
  SolveOutcome r = program.solve(detail::load_vector(obj));
  json j{{"schema", "cnfold.solve-ip/1"}, {"status", to_string(r.status)}};
  if (r.is_optimal()) {
    j["x"] = to_json(r.x);
    j["value"] = to_json(r.value);
  }
  if (r.status == Status::Unbounded) j["ray"] = to_json(r.certificate);
  if (cfg.out.empty()) {
    out << j.dump() << '\n';
  } else {
    // Solution file in the matrix text format; status still goes to stdout.
    if (r.is_optimal()) detail::write_atomic(cfg.out, matrix_to_string(as_row(r.x)));
    out << j.dump() << '\n';
  }
  err << "solve-ip: " << to_string(r.status);
  if (r.is_optimal()) err << ", value " << r.value;
  err << " (" << program.graver().size() << " Graver elements)\n";
  switch (r.status) {
    case Status::Optimal: return kOk;
    case Status::Infeasible: return kInfeasible;
    case Status::Unbounded: return kUnbounded;
  }
  return kFailure;
}

inline int run_solve_convex(const RunConfig& cfg, const ProgramSource& src, const std::string& weights,
                            std::ostream& out, std::ostream& err) {
  IntegerProgram program = load_program(cfg, src);
  ObjectiveWeights w(detail::load_matrix(weights));
  ConvexObjective c = parse_objective(cfg.objective, w.d());
  ConvexOutcome o = solve_convex_program(program, w, c, cfg.convex());
  detail::emit(cfg, out, detail::outcome_json("cnfold.solve-convex/1", o, c).dump() + "\n");
  err << "solve-convex: " << to_string(o.status) << ", " << o.stats.vertices << " zonotope vertices, "
      << o.stats.queries << " oracle queries\n";
  return detail::convex_exit(o);
}

inline int run_app(const RunConfig& cfg, const std::string& kind, const std::string& path, std::ostream& out,
                   std::ostream& err) {
  AppProblem p = app_problem(kind, detail::load_json(path));
  ConvexObjective c = parse_objective(cfg.objective, p.weights.d());
  ConvexOutcome o = solve_app(p, c, cfg);
  json j = detail::outcome_json("cnfold." + kind + "/1", o, c);
  if (o.is_optimal()) j["solution"] = p.render(o.x);
  detail::emit(cfg, out, j.dump() + "\n");
  err << kind << ": " << to_string(o.status);
  if (auto v = o.is_optimal() ? c.value(o.z) : std::nullopt) err << ", objective " << *v;
  err << "\n";
  return detail::convex_exit(o);
}

/// Pipeline against exhaustive enumeration on an application instance
/// {"problem": "transport" | "pack" | "partition", ...instance fields}.
inline int run_verify(const RunConfig& cfg, const std::string& path, std::ostream& out, std::ostream& err) {
  json in = detail::load_json(path);
  const std::string kind = field(in, "problem").get<std::string>();
  AppProblem p = app_problem(kind, in);
  ConvexObjective c = parse_objective(cfg.objective, p.weights.d());
  ConvexOutcome o = solve_app(p, c, cfg);

  EnumBudget budget;
  budget.max_points = cfg.enum_cap;
  budget.upper = p.upper;
  const IntMat a = nfold_matrix(p.stencil, p.n);
  const IntVec b = p.rhs.concatenated();
  std::vector<IntVec> points;
  if (!p.infeasible) points = enumerate_feasible(a, b, budget);

  std::vector<std::string> problems;
  json report{{"schema", "cnfold.verify/1"}, {"problem", kind}, {"objective", c.name()},
              {"pipeline_status", to_string(o.status)}, {"feasible_points", points.size()}};
  if (points.empty()) {
    if (o.status != ConvexStatus::Infeasible) problems.push_back("oracle found no feasible point");
  } else if (!o.is_optimal()) {
    problems.push_back("pipeline did not return an optimum");
  } else {
    ConvexArgmax best = brute_convex_max(points, p.weights, c);
    report["pipeline_z"] = to_json(o.z);
    report["oracle_z"] = to_json(best.z);
    if (auto v = c.value(o.z)) report["pipeline_value"] = to_json(*v);
    if (auto v = c.value(best.z)) report["oracle_value"] = to_json(*v);
    if (mat_vec(a, o.x) != b || !is_nonnegative(o.x)) problems.push_back("pipeline point is not feasible");
    if (!(c.leq(o.z, best.z) && c.leq(best.z, o.z))) problems.push_back("objective values differ");
    if (o.stats.identity_failures != 0) problems.push_back("oracle-value identity failed");
  }
  report["result"] = problems.empty() ? "PASS" : "FAIL";
  report["problems"] = problems;
  detail::emit(cfg, out, report.dump() + "\n");
  err << "verify " << kind << ": " << (problems.empty() ? "PASS" : "FAIL") << " (" << points.size()
      << " feasible points)\n";
  return problems.empty() ? kOk : kFailure;
}

// ---------------------------------------------------------------------------

inline int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact convex integer maximization over n-fold systems", "cnfold"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "cnfold 0.1.0");

  RunConfig cfg;
  std::optional<std::size_t> basis_cap, enum_cap, max_dim, threads;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--basis-cap", basis_cap, "Maximum Graver basis size")->check(CLI::PositiveNumber);
    sub->add_option("--enum-cap", enum_cap, "Maximum search nodes for exhaustive checks")->check(CLI::PositiveNumber);
    sub->add_option("--max-dim", max_dim, "Maximum objective dimension d")->check(CLI::PositiveNumber);
    sub->add_option("--threads", threads, "Worker threads for oracle queries")->check(CLI::PositiveNumber);
    sub->add_option("-o,--out", cfg.out, "Write the result to this file instead of stdout");
  };

  std::string path, stencil_path, weights_path, obj_path;
  std::size_t n = 0;
  bool lift = false;
  ProgramSource src;

  auto* graver = app.add_subcommand("graver", "Graver basis of a matrix");
  graver->add_option("matrix", path, "Matrix file")->required();
  add_common(graver);

  auto* nfg = app.add_subcommand("nfold-graver", "Graver basis of an n-fold matrix");
  nfg->add_option("--stencil", stencil_path, "Stencil file")->required();
  nfg->add_option("--n", n, "Number of layers")->required()->check(CLI::PositiveNumber);
  nfg->add_flag("--lift", lift, "Lift from the complexity-fold basis even for small n");
  add_common(nfg);

  auto* zono = app.add_subcommand("zonotope", "Vertices of the zonotope spanned by generator rows");
  zono->add_option("generators", path, "Generator file (one generator per row)")->required();
  add_common(zono);

  auto add_program = [&](CLI::App* sub) {
    sub->add_option("--stencil", src.stencil, "Stencil file");
    sub->add_option("--matrix", src.matrix, "Constraint matrix file (generic path)");
    sub->add_option("--n", src.n, "Number of layers")->check(CLI::PositiveNumber);
    sub->add_option("--rhs", src.rhs, "Right-hand side file")->required();
  };

  auto* ip = app.add_subcommand("solve-ip", "Linear integer program max{w x : A x = b, x >= 0}");
  add_program(ip);
  ip->add_option("--obj", obj_path, "Objective vector file")->required();
  add_common(ip);

  auto* cvx = app.add_subcommand("solve-convex", "Convex maximization of c(W x)");
  add_program(cvx);
  cvx->add_option("--weights", weights_path, "Weight matrix file (d rows)")->required();
  cvx->add_option("--objective", cfg.objective, "norm2 | linear[:file] | maxlin:file | negminlin:file");
  add_common(cvx);

  std::vector<CLI::App*> apps;
  for (const char* name : {"transport", "pack", "partition"}) {
    auto* sub = app.add_subcommand(name, std::string("Solve a ") + name + " instance (JSON)");
    sub->add_option("instance", path, "Instance file")->required();
    sub->add_option("--objective", cfg.objective, "norm2 | linear[:file] | maxlin:file | negminlin:file");
    add_common(sub);
    apps.push_back(sub);
  }

  auto* verify = app.add_subcommand("verify", "Compare the pipeline against exhaustive enumeration");
  verify->add_option("instance", path, "Instance file with a 'problem' field")->required();
  verify->add_option("--objective", cfg.objective, "norm2 | linear[:file] | maxlin:file | negminlin:file");
  add_common(verify);

  std::vector<const char*> argv{"cnfold"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    detail::apply_env(cfg);
    if (basis_cap) cfg.basis_cap = *basis_cap;
    if (enum_cap) cfg.enum_cap = *enum_cap;
    if (max_dim) cfg.max_dim = *max_dim;
    if (threads) cfg.threads = *threads;

    if (graver->parsed()) return run_graver(cfg, path, out, err);
    if (nfg->parsed()) return run_nfold_graver(cfg, stencil_path, n, lift, out, err);
    if (zono->parsed()) return run_zonotope(cfg, path, out, err);
    if (ip->parsed()) return run_solve_ip(cfg, src, obj_path, out, err);
    if (cvx->parsed()) return run_solve_convex(cfg, src, weights_path, out, err);
    for (auto* sub : apps) {
      if (sub->parsed()) return run_app(cfg, sub->get_name(), path, out, err);
    }
    if (verify->parsed()) return run_verify(cfg, path, out, err);
  } catch (const GuardExceeded& e) {
    err << "error: " << e.what() << '\n';
    return kGuard;
  } catch (const std::bad_alloc&) {
    err << "error: out of memory\n";
    return kGuard;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const DimensionError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kFailure;
  }
  return kUsage;
}

}  // namespace cnfold::cli
