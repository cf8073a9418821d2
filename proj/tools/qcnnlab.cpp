// Copyright 2026 The qcnnlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line entry point. Exit codes: 0 success, 1 verification failure,
// 2 usage or configuration error, 3 resource cap exceeded.

#include "qcnnlab/grim.hpp"
#include "qcnnlab/haar_checks.hpp"
#include "qcnnlab/pooling.hpp"
#include "qcnnlab/qcnn.hpp"
#include "qcnnlab/variance.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#ifndef QCNNLAB_VERSION
#define QCNNLAB_VERSION "unknown"
#endif

using nlohmann::json;
using namespace qcnnlab;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerification = 1;
constexpr int kExitConfig = 2;
constexpr int kExitResource = 3;

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json exact(const Rational& r) {
  json j{{"exact", r.str()}, {"float", r.to_double()}};
  j["log2"] = r.sign() > 0 ? json(r.log2()) : json(nullptr);
  return j;
}

struct Run {
  explicit Run(std::string name) : subcommand(std::move(name)) {}

  std::string subcommand;
  json config = json::object();
  std::optional<std::uint64_t> seed;
  std::string out_path;
  std::string started = utc_now();

  // Writes to --out (plus manifest) or to stdout.
  void emit(const std::string& text) const {
    if (out_path.empty()) {
      std::cout << text;
      return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw std::invalid_argument("cannot open output file " + out_path);
    f << text;
    f.close();
    std::filesystem::path manifest_path(out_path);
    manifest_path.replace_extension(".manifest.json");
    json m{{"schema", "v1"},
           {"subcommand", subcommand},
           {"config", config},
           {"version", QCNNLAB_VERSION},
           {"master_seed", seed ? json(*seed) : json(nullptr)},
           {"started_at", started},
           {"finished_at", utc_now()},
           {"outputs", json::array({out_path})}};
    std::ofstream mf(manifest_path, std::ios::binary);
    if (!mf) throw std::invalid_argument("cannot open manifest file " + manifest_path.string());
    mf << m.dump(2) << '\n';
  }
};

// ---- variance ----

struct VarianceArgs {
  std::vector<int> qubits;
  std::string mode = "uncorr";
  int samples = 200;
  int reps = 16;
  std::uint64_t seed = 1;
  std::string out;
  bool with_bound = false;
  unsigned threads = 0;
  std::size_t amplitude_cap = kDefaultAmplitudeCap;
  bool allow_large = false;
};

std::vector<BindingMode> modes_of(const std::string& mode) {
  if (mode == "both") return {BindingMode::Correlated, BindingMode::Uncorrelated};
  return {parse_binding_mode(mode)};
}

int run_variance(const VarianceArgs& a) {
  if (a.amplitude_cap > kDefaultAmplitudeCap && !a.allow_large) {
    throw std::invalid_argument("raising --amplitude-cap above 2^26 requires --allow-large");
  }
  const auto modes = modes_of(a.mode);
  Run run{"variance"};
  run.config = {{"qubits", a.qubits}, {"mode", a.mode},           {"samples", a.samples},
                {"reps", a.reps},     {"seed", a.seed},           {"with_bound", a.with_bound},
                {"threads", a.threads}, {"amplitude_cap", a.amplitude_cap}};
  run.seed = a.seed;
  run.out_path = a.out;

  ExperimentConfig base;
  base.samples_per_rep = a.samples;
  base.repetitions = a.reps;
  base.master_seed = a.seed;
  base.threads = a.threads;
  base.amplitude_cap = a.amplitude_cap;
  // Validate every row before spending time on any of them.
  for (int n : a.qubits) {
    if (n < 4 || n % 2 != 0) throw std::invalid_argument("--qubits entries must be even and >= 4");
    ExperimentConfig c = base;
    c.n_qubits = n;
    c.validate();
  }
  std::vector<VarianceRow> rows;
  for (int n : a.qubits) {
    for (auto mode : modes) {
      VarianceRow row{scaling_sweep({n}, mode, base).front(), std::nullopt};
      if (a.with_bound) {
        const Qcnn q = build_qcnn(n, mode);
        row.bound = lower_bound(bound_inputs_for(q.topology, row.report.location)).value.to_double();
      }
      rows.push_back(std::move(row));
    }
  }
  std::ostringstream csv;
  write_variance_csv(csv, rows);
  run.emit(csv.str());
  return kExitOk;
}

// ---- bound ----

struct BoundArgs {
  int qubits = 4;
  int layer = 1;
  std::optional<int> total_layers;
  std::string position = "first";
  std::string grim_case = "auto";
  std::optional<int> block;
  int middle = 1;
  std::string eps_o = "4";
  std::string eps_sigma = "3/4";
  std::string trace_h2 = "1";
  std::string ambiguous = "reject";
  std::string out;
};

int run_bound(const BoundArgs& a) {
  if (a.qubits < 4 || a.qubits % 2 != 0) throw std::invalid_argument("--qubits must be even and >= 4");
  const Qcnn q = build_qcnn(a.qubits, BindingMode::Uncorrelated);
  BoundInputs in;
  in.n_qubits = a.qubits;
  in.total_layers = a.total_layers.value_or(q.topology.total_layers());
  in.layer = a.layer;
  in.position = parse_block_position(a.position);
  in.trace_h2 = Rational::parse(a.trace_h2);
  in.eps_o = Rational::parse(a.eps_o);
  in.eps_sigma = Rational::parse(a.eps_sigma);
  in.policy = parse_ambiguity_policy(a.ambiguous);
  if (in.layer < 1 || in.layer > in.total_layers) {
    throw std::invalid_argument("--layer must satisfy 1 <= layer <= L = " + std::to_string(in.total_layers));
  }

  json detection = nullptr;
  if (a.grim_case == "auto") {
    if (in.layer == 1) {
      in.grim_case = {CaseKind::Case1, 0, 0};
    } else {
      const SubLayer sub = in.position == BlockPosition::FirstSublayer ? SubLayer::First : SubLayer::Second;
      const int topo_layer = q.topology.total_layers() - in.layer + 1;
      if (topo_layer < 1) throw std::invalid_argument("--layer exceeds the layers of this QCNN");
      const int blocks = static_cast<int>(q.topology.blocks_in(topo_layer, sub));
      if (blocks == 0) throw std::invalid_argument("the requested sub-layer has no blocks at this layer");
      const int block = a.block.value_or(in.position == BlockPosition::SecondSublayerEdge ? 0 : blocks / 2);
      const auto det = detect_case(blocks, in.layer, block, sub);
      in.grim_case = det.grim_case;
      detection = {{"block", block}, {"blocks_in_sublayer", blocks}, {"detected_position", to_string(det.position)}};
    }
  } else if (a.grim_case == "1") {
    in.grim_case = {CaseKind::Case1, 0, 0};
  } else if (a.grim_case == "2") {
    in.grim_case = {CaseKind::Case2, 0, in.layer - 1};
  } else if (a.grim_case == "3") {
    if (a.middle < 1 || a.middle > in.layer - 2) {
      throw std::invalid_argument("--case 3 needs 1 <= --middle <= layer - 2");
    }
    in.grim_case = {CaseKind::Case3, a.middle, in.layer - 1 - a.middle};
  } else {
    throw std::invalid_argument("--case must be auto, 1, 2 or 3");
  }

  const BoundResult r = lower_bound(in);
  Run run{"bound"};
  run.config = {{"qubits", a.qubits},       {"layer", a.layer},         {"total_layers", in.total_layers},
                {"position", a.position},   {"case", a.grim_case},      {"middle", a.middle},
                {"eps_o", a.eps_o},         {"eps_sigma", a.eps_sigma}, {"trace_h2", a.trace_h2},
                {"ambiguous", a.ambiguous}};
  if (a.block) run.config["block"] = *a.block;
  run.out_path = a.out;
  json out{{"n_qubits", in.n_qubits},
           {"total_layers", in.total_layers},
           {"layer", in.layer},
           {"position", to_string(in.position)},
           {"case", {{"kind", to_string(r.grim_case)}, {"middle_modules", r.grim_case.middle},
                     {"edge_modules", r.grim_case.edge}}},
           {"detection", detection},
           {"inputs", {{"trace_h2", exact(in.trace_h2)}, {"eps_o", exact(in.eps_o)}, {"eps_sigma", exact(in.eps_sigma)}}},
           {"ambiguity_policy", to_string(in.policy)},
           {"path_sum", exact(r.path_sum)},
           {"backward_factor", exact(r.backward_factor)},
           {"prefactor", exact(r.prefactor)},
           {"value", exact(r.value)},
           {"paths", r.paths.str()},
           {"excluded_entries", r.excluded},
           {"flagged_entries", r.flagged},
           {"notes", r.notes}};
  run.emit(out.dump(2) + "\n");
  return kExitOk;
}

// ---- verify ----

struct VerifyArgs {
  int dim = 4;
  std::size_t samples = 100000;
  std::uint64_t seed = 1;
  double tolerance = -1;  // negative: target default
  int k_max = 3;
  std::string out;
};

int run_verify_weingarten(const VerifyArgs& a) {
  std::mt19937_64 rng(a.seed);
  const auto rep = verify_weingarten_moments(a.dim, a.samples, rng);
  const double tol = a.tolerance > 0 ? a.tolerance : 5e-3;
  const bool pass = rep.max_deviation < tol;
  Run run{"verify weingarten"};
  run.config = {{"dim", a.dim}, {"samples", a.samples}, {"seed", a.seed}, {"tolerance", tol}};
  run.seed = a.seed;
  run.out_path = a.out;
  json out{{"dim", rep.dim},
           {"samples", rep.samples},
           {"first_moment_max_deviation", rep.first_moment_max_dev},
           {"second_moment_max_deviation", rep.second_moment_max_dev},
           {"max_deviation", rep.max_deviation},
           {"w11_fourth_moment", rep.w11_fourth.real()},
           {"w11_fourth_moment_expected", weingarten_second_moment(rep.dim, 0, 0, 0, 0, 0, 0, 0, 0)},
           {"tolerance", tol},
           {"pass", pass}};
  run.emit(out.dump(2) + "\n");
  return pass ? kExitOk : kExitVerification;
}

int run_verify_module(const VerifyArgs& a, ModuleType type) {
  std::mt19937_64 rng(a.seed);
  const auto rep = verify_module_integration(type, a.samples, rng);
  const double tol = a.tolerance > 0 ? a.tolerance : 0.01;
  bool pass = true;
  json coefficients = json::array();
  for (const auto& c : rep.coefficients) {
    coefficients.push_back({{"pattern", c.pattern}, {"weight", c.weight}, {"value", c.value}, {"stderr", c.stderr_}});
  }
  json out{{"module", to_string(type)},
           {"samples", rep.samples},
           {"eps_observable", rep.eps_observable},
           {"observable_resamples", rep.resamples},
           {"coefficients", coefficients},
           {"aggregate", rep.aggregate},
           {"aggregate_stderr", rep.aggregate_stderr}};
  if (rep.expected) {
    const double rel = std::abs(rep.aggregate - *rep.expected) / *rep.expected;
    pass = rel <= tol;
    out["expected"] = *rep.expected;
    out["relative_error"] = rel;
    out["tolerance"] = tol;
  }
  out["pass"] = pass;
  Run run{std::string("verify module-") + (type == ModuleType::Center ? "center" : "edge")};
  run.config = {{"samples", a.samples}, {"seed", a.seed}, {"tolerance", tol}};
  run.seed = a.seed;
  run.out_path = a.out;
  run.emit(out.dump(2) + "\n");
  return pass ? kExitOk : kExitVerification;
}

std::string pad(const std::string& s, std::size_t w) { return s.size() >= w ? s + " " : s + std::string(w - s.size(), ' '); }

void print_entries(std::ostringstream& os, const std::string& title, const std::vector<TableEntry>& entries) {
  os << "== " << title << " ==\n";
  os << pad("from", 6) << pad("to", 6) << pad("value", 28) << pad("float", 14) << "status\n";
  for (const auto& e : entries) {
    if (e.status == EntryStatus::MissingRow) {
      os << pad(e.from, 6) << pad(e.to, 6) << pad("-", 28) << pad("-", 14) << to_string(e.status) << '\n';
      continue;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", e.value.to_double());
    os << pad(e.from, 6) << pad(e.to, 6) << pad(e.value.str(), 28) << pad(buf, 14)
       << (e.status == EntryStatus::Printed ? "" : to_string(e.status));
    if (!e.formula.empty()) os << (e.status == EntryStatus::Printed ? "" : "  ") << "  [" << e.formula << "]";
    os << '\n';
  }
  os << '\n';
}

int run_verify_tables(const VerifyArgs& a) {
  if (a.k_max < 1) throw std::invalid_argument("--k-max must be at least 1");
  std::ostringstream os;
  os << "recursion f_k = 2 f_(k-1) + f_(k-2); seeds as printed\n";
  for (const auto* s : {&seq_a(), &seq_b(), &seq_p(), &seq_q()}) {
    os << s->name() << ":";
    for (int k = 0; k <= a.k_max + 2; ++k) os << ' ' << s->at(k).str();
    os << (s->seeds_consistent() ? "" : "  UNVERIFIED-RECURSION (printed seed disagrees with recursion)") << '\n';
  }
  os << '\n';
  print_entries(os, "edge module coefficients", edge_table(a.k_max));
  print_entries(os, "middle module coefficients", middle_table(a.k_max));
  print_entries(os, "middle-to-edge transition coefficients", transition_table(a.k_max));
  os << "== final center-module constants (edge graph) ==\n";
  for (const auto& [label, v] : terminal_table(a.k_max)) os << pad(label, 6) << pad(v.str(), 28) << '\n';
  Run run{"verify tables"};
  run.config = {{"k_max", a.k_max}};
  run.out_path = a.out;
  run.emit(os.str());
  return kExitOk;
}

// ---- pooling ----

struct PoolingArgs {
  int depth_max = 6;
  std::string mode = "both";
  std::string out;
};

int run_pooling(const PoolingArgs& a) {
  if (a.depth_max < 1) throw std::invalid_argument("--depth-max must be at least 1");
  if (a.depth_max > 62) throw std::invalid_argument("--depth-max must be at most 62");
  std::vector<PoolingMode> modes;
  if (a.mode == "both") {
    modes = {PoolingMode::Correlated, PoolingMode::Uncorrelated};
  } else {
    modes = {parse_pooling_mode(a.mode)};
  }
  std::ostringstream csv;
  csv << "L,n,mode,expected_grad_magnitude,analytic_value,abs_error\n";
  char buf[160];
  for (int L = 1; L <= a.depth_max; ++L) {
    for (auto mode : modes) {
      const PoolingModel model(L, mode);
      const double numeric = expected_gradient_magnitude(model, L, 1);
      const double analytic = analytic_gradient_magnitude(model);
      std::snprintf(buf, sizeof buf, "%d,%lld,%s,%.15e,%.15e,%.3e\n", L, model.n_qubits(), to_string(mode).c_str(),
                    numeric, analytic, std::abs(numeric - analytic));
      csv << buf;
    }
  }
  Run run{"pooling"};
  run.config = {{"depth_max", a.depth_max}, {"mode", a.mode}};
  run.out_path = a.out;
  run.emit(csv.str());
  return kExitOk;
}

// ---- describe ----

int run_describe(int qubits, const std::string& mode, const std::string& out_path) {
  const Qcnn q = build_qcnn(qubits, parse_binding_mode(mode));
  Run run{"describe"};
  run.config = {{"qubits", qubits}, {"mode", mode}};
  run.out_path = out_path;
  run.emit(describe_json(q.topology, q.binding).dump(2) + "\n");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"QCNN gradient-variance laboratory"};
  app.require_subcommand(1);
  app.set_version_flag("--version", QCNNLAB_VERSION);

  VarianceArgs va;
  auto* var = app.add_subcommand("variance", "Monte-Carlo variance of a cost partial derivative (CSV)");
  var->add_option("--qubits", va.qubits, "Comma-separated even qubit counts")->delimiter(',')->required();
  var->add_option("--mode", va.mode, "corr, uncorr or both")->check(CLI::IsMember({"corr", "uncorr", "both"}));
  var->add_option("--samples", va.samples, "Samples per repetition");
  var->add_option("--reps", va.reps, "Repetitions");
  var->add_option("--seed", va.seed, "Master seed");
  var->add_option("--out", va.out, "Output CSV path (stdout if absent)");
  var->add_flag("--with-bound", va.with_bound, "Append the graph lower bound per row");
  var->add_option("--threads", va.threads, "Worker threads (0 = all cores)");
  var->add_option("--amplitude-cap", va.amplitude_cap, "Largest statevector size");
  var->add_flag("--allow-large", va.allow_large, "Acknowledge an amplitude cap above 2^26");

  BoundArgs ba;
  auto* bnd = app.add_subcommand("bound", "Exact variance lower bound (JSON)");
  bnd->add_option("--qubits", ba.qubits, "Qubit count")->required();
  bnd->add_option("--layer", ba.layer, "Modules in the forward light cone (1..L)")->required();
  bnd->add_option("--total-layers", ba.total_layers, "Override L");
  bnd->add_option("--position", ba.position, "first, second-edge or second-inner")
      ->check(CLI::IsMember({"first", "second-edge", "second-inner"}));
  bnd->add_option("--case", ba.grim_case, "auto, 1, 2 or 3")->check(CLI::IsMember({"auto", "1", "2", "3"}));
  bnd->add_option("--block", ba.block, "Block index within its sub-layer (auto case)");
  bnd->add_option("--middle", ba.middle, "Middle modules for case 3");
  bnd->add_option("--eps-o", ba.eps_o, "Observable distance from identity");
  bnd->add_option("--eps-sigma", ba.eps_sigma, "Input-state distance from identity");
  bnd->add_option("--trace-h2", ba.trace_h2, "Trace of the squared generator");
  bnd->add_option("--ambiguous", ba.ambiguous, "Flagged coefficients: reject, exclude or include")
      ->check(CLI::IsMember({"reject", "exclude", "include"}));
  bnd->add_option("--out", ba.out, "Output JSON path (stdout if absent)");

  VerifyArgs vw, vm, ve, vt;
  vm.samples = 200000;
  auto* ver = app.add_subcommand("verify", "Monte-Carlo and table checks");
  ver->require_subcommand(1);
  auto* wg = ver->add_subcommand("weingarten", "Haar first and second moments");
  wg->add_option("--dim", vw.dim, "2 or 4")->check(CLI::IsMember({2, 4}));
  wg->add_option("--samples", vw.samples);
  wg->add_option("--seed", vw.seed);
  wg->add_option("--tolerance", vw.tolerance);
  wg->add_option("--out", vw.out);
  auto* mc = ver->add_subcommand("module-center", "Center-module coefficient");
  mc->add_option("--samples", vm.samples);
  mc->add_option("--seed", vm.seed);
  mc->add_option("--tolerance", vm.tolerance, "Relative tolerance");
  mc->add_option("--out", vm.out);
  ve.samples = 200000;
  auto* me = ver->add_subcommand("module-edge", "Edge first-step pattern coefficients");
  me->add_option("--samples", ve.samples);
  me->add_option("--seed", ve.seed);
  me->add_option("--out", ve.out);
  auto* tb = ver->add_subcommand("tables", "Dump coefficient tables with flags");
  tb->add_option("--k-max", vt.k_max, "Largest family index printed");
  tb->add_option("--out", vt.out);

  PoolingArgs pa;
  auto* pool = app.add_subcommand("pooling", "Pooling-only expected gradient magnitudes (CSV)");
  pool->add_option("--depth-max", pa.depth_max, "Largest depth L")->required();
  pool->add_option("--mode", pa.mode, "corr, uncorr or both")->check(CLI::IsMember({"corr", "uncorr", "both"}));
  pool->add_option("--out", pa.out);

  int dq = 4;
  std::string dmode = "uncorr", dout;
  auto* desc = app.add_subcommand("describe", "QCNN layout (JSON)");
  desc->add_option("--qubits", dq)->required();
  desc->add_option("--mode", dmode)->check(CLI::IsMember({"corr", "uncorr"}));
  desc->add_option("--out", dout);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*var) return run_variance(va);
    if (*bnd) return run_bound(ba);
    if (*wg) return run_verify_weingarten(vw);
    if (*mc) return run_verify_module(vm, ModuleType::Center);
    if (*me) return run_verify_module(ve, ModuleType::EdgeFirstStep);
    if (*tb) return run_verify_tables(vt);
    if (*pool) return run_pooling(pa);
    if (*desc) return run_describe(dq, dmode, dout);
  } catch (const ResourceLimitError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitResource;
  } catch (const QuadratureError& e) {
    std::cerr << "verification failed: " << e.what() << '\n';
    return kExitVerification;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}
