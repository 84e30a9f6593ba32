// Command-line front end: one subcommand per pipeline, JSON report on stdout.
//
// Exit codes: 0 ok, 1 I/O or parse error, 2 validation failure,
// 3 unsupported backend / infinite group, 4 resource cap exceeded.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "twistlab/crossed.hpp"
#include "twistlab/error.hpp"
#include "twistlab/json_io.hpp"
#include "twistlab/norms.hpp"
#include "twistlab/version.hpp"

using namespace twistlab;

namespace {

enum Exit { kOk = 0, kIo = 1, kValidation = 2, kUnsupported = 3, kResource = 4 };

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::parse_error: return kIo;
    case ErrorCode::unsupported:
    case ErrorCode::not_finite:
    case ErrorCode::backend_mismatch: return kUnsupported;
    case ErrorCode::memory_budget_exceeded: return kResource;
    default: return kValidation;
  }
}

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Input {
  std::string path;
  Json json;
  std::string digest;
};

Input read_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  Input input{path, {}, fnv1a_hex(buf.str())};
  try {
    input.json = Json::parse(buf.str());
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::parse_error, path + ": " + e.what());
  }
  return input;
}

struct Options {
  std::string group, cocycle, element, set, mode = "exact", convention = std::string(to_string(kDefaultConvention));
  std::vector<std::string> cocycles;
  int radius = 6, powers = 12, length = 8;
  std::uint64_t seed = 1;
  std::size_t mem_cap = 2'000'000, samples = 0;
  unsigned threads = 1;
  double tol = -1.0;
  bool verify = false;
};

class Run {
 public:
  Run(std::string command, const Options& o) : command_(std::move(command)), o_(o) {}

  Group group() {
    auto in = load("group", o_.group);
    return Group::from_json(in.json);
  }
  Cocycle cocycle(const Group& g, const std::string& path, const std::string& key) {
    if (path.empty()) return Cocycle::trivial(g);
    return Cocycle::from_json(g, load(key, path).json);
  }
  AlgebraElement element(const Group& g) {
    if (o_.element.empty()) throw Error(ErrorCode::invalid_argument, "--element is required");
    return AlgebraElement::from_json(g, load("element", o_.element).json);
  }
  Json set() {
    if (o_.set.empty()) throw Error(ErrorCode::invalid_argument, "--set is required");
    return load("set", o_.set).json;
  }
  std::vector<GroupElement> set_elements(const Group& g, const Json& s) {
    std::vector<GroupElement> out;
    try {
      const Json& list = s.is_array() ? s : s.at("elements");
      for (const auto& x : list) out.push_back(g.element_from_json(x));
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::parse_error, std::string("set: ") + e.what());
    }
    return out;
  }

  void tolerance(const std::string& name, double value) { tolerances_[name] = value; }

  int emit(Json result, int code = kOk) {
    Json report{{"tool", std::string(kToolName) + " " + kVersion},
                {"command", command_},
                {"seed", o_.seed},
                {"mem_cap", o_.mem_cap},
                {"tolerances", tolerances_},
                {"inputs", inputs_},
                {"result", std::move(result)}};
    std::cout << report.dump(2) << "\n";
    return code;
  }

  int fail(const std::string& kind, const std::string& message, int code) {
    std::cerr << "twistlab " << command_ << ": " << message << "\n";
    return emit(Json{{"error", kind}, {"message", message}}, code);
  }

 private:
  Input load(const std::string& key, const std::string& path) {
    Input in = read_json(path);
    inputs_[key] = Json{{"path", path}, {"fnv1a", in.digest}};
    return in;
  }

  std::string command_;
  const Options& o_;
  Json tolerances_ = Json::object();
  Json inputs_ = Json::object();
};

NormOptions norm_options(const Options& o) {
  NormOptions n;
  n.mem_cap = o.mem_cap;
  n.threads = o.threads;
  n.seed = o.seed;
  return n;
}

int cmd_validate(Run& run, const Options& o) {
  const Group g = run.group();
  const Cocycle sigma = run.cocycle(g, o.cocycle, "cocycle");
  ValidateOptions v;
  if (o.tol > 0) v.tolerance = o.tol;
  if (o.samples > 0) v.samples = o.samples;
  v.radius = o.radius;
  v.seed = o.seed;
  run.tolerance("cocycle", v.tolerance);
  const ValidationReport report = validate(sigma, v);
  return run.emit(report.to_json(g), report.pass ? kOk : kValidation);
}

int cmd_norm(Run& run, const Options& o) {
  const Group g = run.group();
  const Cocycle sigma = run.cocycle(g, o.cocycle, "cocycle");
  const AlgebraElement a = run.element(g);
  NormEstimate est;
  run.tolerance("convergence", norm_options(o).converged_threshold);
  if (o.mode == "exact") {
    est.lower = exact_norm(sigma, a);
    est.upper = est.lower;
    est.lower_method = est.upper_method = "exact_regular_rep";
  } else if (o.mode.rfind("truncate:", 0) == 0) {
    int r = 0;
    try {
      r = std::stoi(o.mode.substr(9));
    } catch (const std::exception&) {
      throw Error(ErrorCode::invalid_argument, "bad mode " + o.mode);
    }
    const TruncatedNorm t = truncated_norm_lower(sigma, a, r, norm_options(o));
    est.lower = t.value;
    est.lower_method = "truncated_norm_lower";
    est.radius = r;
    est.iterations = t.iterations;
    if (g.kind() == GroupKind::free) {
      est.upper = haagerup_upper(a);
      est.upper_method = "haagerup_upper";
    }
  } else if (o.mode == "haagerup") {
    est.upper = haagerup_upper(a);
    est.upper_method = "haagerup_upper";
    est.lower = l2_norm(a);
    est.lower_method = "l2_norm";
  } else {
    throw Error(ErrorCode::invalid_argument, "unknown mode " + o.mode);
  }
  return run.emit(Json{{"mode", o.mode}, {"estimate", est.to_json()}});
}

int cmd_transfer(Run& run, const Options& o) {
  const Group g = run.group();
  const auto support = run.set_elements(g, run.set());
  std::vector<Cocycle> sigmas;
  for (std::size_t i = 0; i < o.cocycles.size(); ++i)
    sigmas.push_back(run.cocycle(g, o.cocycles[i], "cocycle" + std::to_string(i)));
  const std::size_t samples = o.samples > 0 ? o.samples : 50;
  const TransferReport report = transfer_check(g, support, sigmas, o.seed, samples);
  run.tolerance("transfer", report.tolerance);
  return run.emit(report.to_json(), report.holds ? kOk : kValidation);
}

int cmd_specrad(Run& run, const Options& o) {
  const Group g = run.group();
  const Cocycle sigma = run.cocycle(g, o.cocycle, "cocycle");
  const AlgebraElement a = run.element(g);
  const SpectralReport report = spectral_report(a, sigma, o.powers, o.radius, norm_options(o));
  run.tolerance("normality", 1e-12);
  Json j = report.to_json();
  j["max_power"] = o.powers;
  j["radius"] = o.radius;
  return run.emit(std::move(j));
}

int cmd_semigroup(Run& run, const Options& o) {
  const Group g = run.group();
  const Json s = run.set();
  GroupElement t = g.identity();
  if (s.is_object() && s.contains("t")) t = g.element_from_json(s.at("t"));
  const auto f = run.set_elements(g, s);
  const FreenessCertificate cert = certify_free_subsemigroup(g, t, f, o.length, o.mem_cap);
  std::vector<GroupElement> gens;
  for (const auto& x : f) gens.push_back(g.compose(t, x));
  Json j = cert.to_json(g, gens);
  j["t"] = g.element_to_json(t);
  return run.emit(std::move(j));
}

int cmd_criterion(Run& run, const Options& o) {
  const Group g = run.group();
  const Cocycle sigma = run.cocycle(g, o.cocycle, "cocycle");
  const Json s = run.set();
  GroupElement t = g.identity();
  if (s.is_object() && s.contains("t")) t = g.element_from_json(s.at("t"));
  const auto f = run.set_elements(g, s);
  CriterionConfig config;
  config.max_power = o.powers;
  config.radius = o.radius;
  config.certify_length = o.length;
  config.seed = o.seed;
  if (o.samples > 0) config.samples = o.samples;
  config.norm = norm_options(o);
  if (!o.element.empty()) config.elements.push_back(run.element(g));
  run.tolerance("convergence", config.norm.converged_threshold);
  const CriterionReport report = criterion_report(sigma, t, f, config);
  Json j = report.to_json(g);
  j["max_power"] = o.powers;
  j["radius"] = o.radius;
  return run.emit(std::move(j));
}

int cmd_decompose(Run& run, const Options& o) {
  const Group g = run.group();
  const Cocycle sigma = run.cocycle(g, o.cocycle, "cocycle");
  DecomposeOptions d;
  d.seed = o.seed;
  run.tolerance("cluster_gap", d.cluster_gap);
  run.tolerance("rank", d.rank_eps);
  const BlockDecomposition blocks = decompose_blocks(sigma, d);
  return run.emit(Json{{"blocks", blocks.to_json()}, {"dimension", g.order()}});
}

int cmd_crossed(Run& run, const Options& o) {
  const Group g = run.group();
  const Cocycle sigma = run.cocycle(g, o.cocycle, "cocycle");
  const Convention convention = convention_from_string(o.convention);
  const double tol = o.tol > 0 ? o.tol : 1e-10;
  run.tolerance("axioms", tol);
  DecomposeOptions d;
  d.seed = o.seed;
  run.tolerance("cluster_gap", d.cluster_gap);

  const TwistedSystem sys = induced_action_data(sigma, convention);
  Json j{{"convention", to_string(convention)}, {"system", sys.to_json()}};
  const AxiomReport axioms = verify_twisted_action(sys, tol);
  j["axioms"] = axioms.pass ? "pass" : "fail";
  j["axiom_report"] = axioms.to_json();
  if (!axioms.pass) return run.emit(std::move(j), o.verify ? kValidation : kOk);

  const BlockDecomposition k_blocks = decompose_blocks(sys.sigma_k, d);
  OrbitDecomposition orbits = orbit_decomposition(sys, k_blocks);
  const CrossedProduct crossed = assemble_crossed_product(sys, d);
  match_summands(sys, k_blocks, crossed, orbits);
  j["k_blocks"] = k_blocks.to_json();
  j["crossed_blocks"] = crossed.blocks.to_json(false);
  j["orbits"] = orbits.to_json();
  j["dimension"] = crossed.dimension();
  bool ok = true;
  if (o.verify) {
    const BlockDecomposition direct = decompose_blocks(sigma, d);
    const BlockComparison cmp = compare_block_structure(crossed.blocks, direct);
    j["direct_blocks"] = direct.block_sizes;
    j["blocks_match"] = cmp.equal;
    j["comparison"] = cmp.to_json();
    ok = cmp.equal;
  }
  return run.emit(std::move(j), ok ? kOk : kValidation);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Twisted group algebra computations", kToolName};
  app.set_version_flag("--version", std::string(kToolName) + " " + kVersion);
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--group", o.group, "group descriptor (JSON)")->required();
    sub->add_option("--seed", o.seed, "seed for every random choice");
    sub->add_option("--mem-cap", o.mem_cap, "basis/support size cap");
    sub->add_option("--threads", o.threads, "worker threads (output does not depend on it)");
    sub->add_option("--tol", o.tol, "tolerance override");
  };
  auto* validate_cmd = app.add_subcommand("validate", "validate a cocycle");
  common(validate_cmd);
  validate_cmd->add_option("--cocycle", o.cocycle)->required();
  validate_cmd->add_option("--samples", o.samples, "sampled triples for infinite groups");
  validate_cmd->add_option("--radius", o.radius);

  auto* norm_cmd = app.add_subcommand("norm", "reduced norm estimate");
  common(norm_cmd);
  norm_cmd->add_option("--cocycle", o.cocycle);
  norm_cmd->add_option("--element", o.element)->required();
  norm_cmd->add_option("--mode", o.mode, "exact | truncate:r | haagerup");

  auto* transfer_cmd = app.add_subcommand("transfer", "check ||a||_sigma <= C ||a||_2 on a support set");
  common(transfer_cmd);
  transfer_cmd->add_option("--set", o.set)->required();
  transfer_cmd->add_option("--cocycle", o.cocycles, "repeatable");
  transfer_cmd->add_option("--samples", o.samples, "random elements on the set (default 50)");

  auto* specrad_cmd = app.add_subcommand("specrad", "l2 spectral radius sequence");
  common(specrad_cmd);
  specrad_cmd->add_option("--cocycle", o.cocycle);
  specrad_cmd->add_option("--element", o.element)->required();
  specrad_cmd->add_option("--powers", o.powers);
  specrad_cmd->add_option("--radius", o.radius);

  auto* semigroup_cmd = app.add_subcommand("semigroup", "bounded-length free subsemigroup certificate");
  common(semigroup_cmd);
  semigroup_cmd->add_option("--set", o.set)->required();
  semigroup_cmd->add_option("--length", o.length);

  auto* criterion_cmd = app.add_subcommand("criterion", "evidence bundle for elements supported on tF");
  common(criterion_cmd);
  criterion_cmd->add_option("--cocycle", o.cocycle);
  criterion_cmd->add_option("--set", o.set)->required();
  criterion_cmd->add_option("--element", o.element);
  criterion_cmd->add_option("--powers", o.powers);
  criterion_cmd->add_option("--radius", o.radius);
  criterion_cmd->add_option("--length", o.length);
  criterion_cmd->add_option("--samples", o.samples);

  auto* decompose_cmd = app.add_subcommand("decompose", "matrix blocks of a finite twisted group algebra");
  common(decompose_cmd);
  decompose_cmd->add_option("--cocycle", o.cocycle);

  auto* crossed_cmd = app.add_subcommand("crossed", "twisted crossed product pipeline for an extension");
  common(crossed_cmd);
  crossed_cmd->add_option("--cocycle", o.cocycle);
  crossed_cmd->add_option("--convention", o.convention)->check(CLI::IsMember({"as-printed", "conjugated"}));
  crossed_cmd->add_flag("--verify", o.verify, "compare with the direct decomposition");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kIo;
  }

  CLI::App* sub = app.get_subcommands().front();
  Run run(sub->get_name(), o);
  try {
    if (sub == validate_cmd) return cmd_validate(run, o);
    if (sub == norm_cmd) return cmd_norm(run, o);
    if (sub == transfer_cmd) return cmd_transfer(run, o);
    if (sub == specrad_cmd) return cmd_specrad(run, o);
    if (sub == semigroup_cmd) return cmd_semigroup(run, o);
    if (sub == criterion_cmd) return cmd_criterion(run, o);
    if (sub == decompose_cmd) return cmd_decompose(run, o);
    if (sub == crossed_cmd) return cmd_crossed(run, o);
  } catch (const IoError& e) {
    return run.fail("IoError", e.what(), kIo);
  } catch (const Error& e) {
    return run.fail(std::string(to_string(e.code())), e.what(), exit_code(e.code()));
  }
  return kOk;
}
