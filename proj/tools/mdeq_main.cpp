// Command-line front end: problem ingestion, dispatch, report emission.
// Exit codes: 0 success, 1 mathematical obstruction, 2 input error.

#include <mdeq/assembly.hpp>
#include <mdeq/canonical.hpp>
#include <mdeq/example.hpp>
#include <mdeq/greens.hpp>
#include <mdeq/json_io.hpp>
#include <mdeq/relations.hpp>
#include <mdeq/verify.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace mdeq;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Inline JSON (starts with '{' or '[') or a path to a JSON file.
Json load_json_arg(const std::string& arg) {
  const bool inline_json = !arg.empty() && (arg.front() == '{' || arg.front() == '[');
  const std::string text = inline_json ? arg : read_file(arg);
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw ParseError(e.what());
  }
}

Complex parse_lambda_arg(const std::string& s) {
  try {
    const auto comma = s.find(',');
    if (comma == std::string::npos) return Complex(std::stod(s), 0.0);
    return Complex(std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1)));
  } catch (const std::exception&) {
    throw ParseError("--lambda expects \"re,im\" or a bare real, got \"" + s + "\"");
  }
}

std::vector<double> parse_points_arg(const std::string& s) {
  std::vector<double> xs;
  if (s.empty()) return xs;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      xs.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ParseError("--points expects comma-separated numbers, got \"" + item + "\"");
    }
  }
  return xs;
}

struct CommonOpts {
  std::string file;
  std::string builtin;
  int M = 2;
  std::string output = "text";
  double tol_rank = -1.0;  // <0 means default
};

void add_common(CLI::App* cmd, CommonOpts& opt) {
  cmd->add_option("file", opt.file, "problem JSON file");
  cmd->add_option("--builtin", opt.builtin, "built-in family name (example)");
  cmd->add_option("--M", opt.M, "size parameter of the built-in family")->check(CLI::PositiveNumber);
  cmd->add_option("--output", opt.output, "report format")
      ->check(CLI::IsMember({"text", "json"}));
  cmd->add_option("--tol", opt.tol_rank, "override the relative rank tolerance");
}

struct Loaded {
  SystemSpec spec;
  Json problem;
  std::string source;
};

Loaded load_problem(const CommonOpts& opt) {
  Loaded out;
  if (!opt.builtin.empty()) {
    if (!opt.file.empty()) throw ParseError("give a file or --builtin, not both");
    if (opt.builtin != "example") throw ParseError("unknown builtin \"" + opt.builtin + "\"");
    out.spec = example_spec(opt.M);
    out.problem = spec_to_json(out.spec);
    out.source = "builtin:example:M=" + std::to_string(opt.M);
    return out;
  }
  if (opt.file.empty()) throw ParseError("no problem given: pass a file or --builtin example");
  Json j;
  try {
    j = Json::parse(read_file(opt.file));
  } catch (const Json::exception& e) {
    throw ParseError(e.what());
  }
  out.spec = parse_spec(j);
  out.problem = std::move(j);
  out.source = opt.file;
  return out;
}

Tolerances make_tol(const CommonOpts& opt) {
  Tolerances tol;
  if (opt.tol_rank > 0) tol.rank = opt.tol_rank;
  return tol;
}

Json tol_json(const Tolerances& tol) {
  Json j;
  j["sym"] = tol.sym;
  j["det"] = tol.det;
  j["rank"] = tol.rank;
  j["gap"] = tol.gap;
  j["expm"] = tol.expm;
  j["supp"] = tol.supp;
  j["lin"] = tol.lin;
  j["solv"] = tol.solv;
  return j;
}

// Input-class errors exit 2, everything else in the error family exits 1.
int error_code(const std::exception& e) {
  if (dynamic_cast<const ParseError*>(&e) || dynamic_cast<const InvalidSpec*>(&e) ||
      dynamic_cast<const OutOfDomain*>(&e) || dynamic_cast<const EmptyPartition*>(&e) ||
      dynamic_cast<const DependentConditions*>(&e))
    return 2;
  if (dynamic_cast<const Error*>(&e)) return 1;
  return 2;
}

std::string error_label(const std::exception& e) {
  if (dynamic_cast<const ParseError*>(&e)) return "ParseError";
  if (dynamic_cast<const InvalidSpec*>(&e)) return "InvalidSpec";
  if (dynamic_cast<const OutOfDomain*>(&e)) return "OutOfDomain";
  if (dynamic_cast<const EmptyPartition*>(&e)) return "EmptyPartition";
  if (dynamic_cast<const DependentConditions*>(&e)) return "DependentConditions";
  if (dynamic_cast<const RankUnstable*>(&e)) return "RankUnstable";
  if (dynamic_cast<const NotInKernel*>(&e)) return "NotInKernel";
  if (dynamic_cast<const GenericityNotFound*>(&e)) return "GenericityNotFound";
  if (dynamic_cast<const ProjectionFailed*>(&e)) return "ProjectionFailed";
  if (dynamic_cast<const NotInResolventSet*>(&e)) return "NotInResolventSet";
  if (dynamic_cast<const InternalDisagreement*>(&e)) return "InternalDisagreement";
  return "Error";
}

struct ReportSink {
  std::string command;
  Json inputs = Json::object();
  Json results = Json::object();
  Tolerances tol;
  std::string status = "ok";
  bool json_mode = false;
  std::vector<std::string> text_lines;

  void line(const std::string& s) { text_lines.push_back(s); }

  void emit() const {
    if (json_mode) {
      Json report;
      report["command"] = command;
      report["inputs"] = inputs;
      report["results"] = results;
      report["tolerances"] = tol_json(tol);
      report["status"] = status;
      std::cout << report.dump(2) << "\n";
      return;
    }
    std::cout << "command: " << command << "\n";
    for (const auto& s : text_lines) std::cout << s << "\n";
    std::cout << "status: " << status << "\n";
  }
};

std::string fmt_complex(Complex z) {
  std::ostringstream ss;
  ss << z.real() << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i";
  return ss.str();
}

int run_guarded(ReportSink& sink, const std::function<int()>& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    sink.status = error_label(e) + ": " + e.what();
    sink.results = Json::object();
    sink.text_lines.clear();
    sink.emit();
    std::cerr << "error: " << e.what() << "\n";
    return error_code(e);
  }
}

int cmd_validate(const CommonOpts& opt) {
  ReportSink sink;
  sink.command = "validate";
  sink.json_mode = opt.output == "json";
  sink.tol = make_tol(opt);
  return run_guarded(sink, [&] {
    const Loaded in = load_problem(opt);
    sink.inputs["problem"] = in.source;
    const ValidationReport rep = validate(in.spec, sink.tol);
    sink.results["ok"] = rep.ok();
    sink.results["violations"] = rep.violations;
    sink.results["n"] = in.spec.n;
    sink.results["atoms"] = in.spec.N();
    sink.line("n = " + std::to_string(in.spec.n) + ", atoms = " + std::to_string(in.spec.N()));
    for (const auto& v : rep.violations) sink.line("violation: " + v);
    if (!rep.ok()) {
      sink.status = "invalid";
      sink.emit();
      return 2;
    }
    sink.emit();
    return 0;
  });
}

int cmd_solve(const CommonOpts& opt, const std::string& lambda_str, const std::string& rhs_arg) {
  ReportSink sink;
  sink.command = "solve";
  sink.json_mode = opt.output == "json";
  sink.tol = make_tol(opt);
  return run_guarded(sink, [&] {
    const Loaded in = load_problem(opt);
    const Complex lambda = parse_lambda_arg(lambda_str);
    sink.inputs["problem"] = in.source;
    sink.inputs["lambda"] = complex_to_json(lambda);
    require_valid(in.spec, sink.tol);

    RightHandSide f = RightHandSide::zero(in.spec);
    if (!rhs_arg.empty()) {
      f = parse_rhs(load_json_arg(rhs_arg), in.spec);
      sink.inputs["rhs"] = "argument";
    } else if (in.problem.contains("rhs")) {
      f = parse_rhs(in.problem["rhs"], in.spec);
      sink.inputs["rhs"] = "problem file";
    } else {
      sink.inputs["rhs"] = "zero";
    }

    const SolveResult res = solve_nonhomogeneous(in.spec, lambda, f, sink.tol);
    if (!res.solvable()) {
      sink.results["solvable"] = false;
      Json obs = Json::array();
      for (const auto& o : res.obstructions) {
        Json jo;
        jo["witness"] = vector_to_json(o.witness);
        jo["pairing"] = complex_to_json(o.pairing);
        obs.push_back(std::move(jo));
      }
      sink.results["obstructions"] = std::move(obs);
      sink.status = "unsolvable";
      sink.line("unsolvable at lambda = " + fmt_complex(lambda));
      sink.line("independent obstructions: " + std::to_string(res.obstructions.size()));
      sink.emit();
      return 1;
    }

    const SolutionSet& sol = *res.solution;
    const BalancedPath path = propagate_path(in.spec, lambda, sol.particular, f);
    const ResidualReport rr = residual(in.spec, path);
    sink.results["solvable"] = true;
    sink.results["kernel_dim"] = static_cast<int>(sol.kernel.cols());
    sink.results["unique"] = sol.unique();
    sink.results["particular"] = vector_to_json(sol.particular);
    sink.results["kernel"] = matrix_to_json(sol.kernel);
    sink.results["residual"] = rr.max();
    sink.results["value_a"] = vector_to_json(path.start);
    sink.results["value_b"] = vector_to_json(path.end);
    sink.line("lambda = " + fmt_complex(lambda));
    sink.line("kernel dim = " + std::to_string(sol.kernel.cols()) +
              (sol.unique() ? " (unique solution)" : ""));
    {
      std::ostringstream ss;
      ss << "residual = " << rr.max();
      sink.line(ss.str());
    }
    sink.emit();
    return 0;
  });
}

int cmd_deficiency(const CommonOpts& opt, std::uint64_t seed) {
  ReportSink sink;
  sink.command = "deficiency";
  sink.json_mode = opt.output == "json";
  sink.tol = make_tol(opt);
  return run_guarded(sink, [&] {
    const Loaded in = load_problem(opt);
    sink.inputs["problem"] = in.source;
    sink.inputs["seed"] = seed;
    require_valid(in.spec, sink.tol);

    const L2Model model = l2_model(in.spec, sink.tol);
    const int np = deficiency(in.spec, model, kI, sink.tol).index;
    const int nm = deficiency(in.spec, model, -kI, sink.tol).index;
    const int dim_l0 = static_cast<int>(l0_basis(in.spec, sink.tol).size());
    sink.results["n_plus"] = np;
    sink.results["n_minus"] = nm;
    sink.results["dim_l0"] = dim_l0;
    sink.line("n+ = " + std::to_string(np) + ", n- = " + std::to_string(nm));
    sink.line("dim L0 = " + std::to_string(dim_l0));
    if (in.spec.N() > 0) {
      const Complex gl = generic_lambda(in.spec, SampleRegion{}, seed, sink.tol);
      const int nt = n_tilde(in.spec, gl, sink.tol);
      sink.results["lambda_generic"] = complex_to_json(gl);
      sink.results["n_tilde"] = nt;
      sink.line("n~(" + fmt_complex(gl) + ") = " + std::to_string(nt));
    } else {
      sink.results["note"] = "no atoms: block system is empty";
      sink.line("no atoms: block system is empty");
    }
    sink.emit();
    return 0;
  });
}

int cmd_greens(const CommonOpts& opt, const std::string& lambda_str, const std::string& points_arg,
               const std::string& boundary_arg) {
  ReportSink sink;
  sink.command = "greens";
  sink.json_mode = opt.output == "json";
  sink.tol = make_tol(opt);
  return run_guarded(sink, [&] {
    const Loaded in = load_problem(opt);
    const Complex lambda = parse_lambda_arg(lambda_str);
    const std::vector<double> xs = parse_points_arg(points_arg);
    sink.inputs["problem"] = in.source;
    sink.inputs["lambda"] = complex_to_json(lambda);
    sink.inputs["points"] = xs;
    require_valid(in.spec, sink.tol);

    const L2Model model = l2_model(in.spec, sink.tol);
    const PairSubspace tmax = tmax_subspace(in.spec, model, sink.tol);
    const DeficiencySpace dp = deficiency(in.spec, model, kI, sink.tol);
    const DeficiencySpace dm = deficiency(in.spec, model, -kI, sink.tol);
    const int d = dp.index + dm.index;

    Matrix coeffs(d, 0);
    if (!boundary_arg.empty()) {
      coeffs = parse_boundary(load_json_arg(boundary_arg));
      sink.inputs["boundary"] = "argument";
    } else if (in.problem.contains("boundary")) {
      coeffs = parse_boundary(in.problem["boundary"]);
      sink.inputs["boundary"] = "problem file";
    } else if (d > 0) {
      if (dp.index != dm.index)
        throw InvalidSpec("no default boundary conditions when n+ != n-; pass --boundary");
      coeffs = Matrix(d, dp.index);
      coeffs.topRows(dp.index) = Matrix::Identity(dp.index, dp.index);
      coeffs.bottomRows(dm.index) = Matrix::Identity(dm.index, dm.index);
      sink.inputs["boundary"] = "default";
    } else {
      sink.inputs["boundary"] = "none needed";
    }

    const BoundaryData bd = make_boundary_data(dp, dm, coeffs);
    const Restriction restr = restriction_from_conditions(in.spec, model, tmax, bd, sink.tol);
    const char* cls = restr.cls == RestrictionClass::SelfAdjoint   ? "self-adjoint"
                      : restr.cls == RestrictionClass::Symmetric ? "symmetric"
                                                                 : "non-symmetric";
    sink.results["n_plus"] = dp.index;
    sink.results["n_minus"] = dm.index;
    sink.results["conditions"] = static_cast<int>(bd.conditions.size());
    sink.results["classification"] = cls;

    const ResolventContext ctx =
        resolvent_context(in.spec, model, restr.domain, lambda, sink.tol);
    const KernelTable table = greens_table(ctx, xs, sink.tol);
    sink.results["table"] = table_to_json(table);

    sink.line("n+ = " + std::to_string(dp.index) + ", n- = " + std::to_string(dm.index) +
              ", conditions = " + std::to_string(bd.conditions.size()) + " (" + cls + ")");
    sink.line("lambda = " + fmt_complex(lambda));
    sink.line("table: " + std::to_string(xs.size()) + " points x " +
              std::to_string(in.spec.N()) + " atoms (use --output json for the blocks)");
    sink.emit();
    return 0;
  });
}

int cmd_verify(const CommonOpts& opt, std::uint64_t seed, int trials) {
  ReportSink sink;
  sink.command = "verify";
  sink.json_mode = opt.output == "json";
  sink.tol = make_tol(opt);
  return run_guarded(sink, [&] {
    sink.inputs["seed"] = seed;
    sink.inputs["trials"] = trials;

    std::vector<CheckResult> checks;
    if (!opt.builtin.empty() && opt.file.empty()) {
      if (opt.builtin != "example") throw ParseError("unknown builtin \"" + opt.builtin + "\"");
      sink.inputs["problem"] = "builtin:example:M=" + std::to_string(opt.M);
      checks = run_builtin_suite(opt.M, seed, trials, sink.tol);
    } else {
      const Loaded in = load_problem(opt);
      sink.inputs["problem"] = in.source;
      const ValidationReport rep = validate(in.spec, sink.tol);
      if (!rep.ok()) {
        sink.results["violations"] = rep.violations;
        sink.status = "validation-failed";
        for (const auto& v : rep.violations) sink.line("violation: " + v);
        sink.emit();
        return 2;
      }
      checks = run_property_suite(in.spec, seed, trials, sink.tol);
    }

    Json arr = Json::array();
    for (const auto& c : checks) {
      Json jc;
      jc["name"] = c.name;
      jc["pass"] = c.pass;
      jc["worst"] = c.worst;
      jc["trials"] = c.trials;
      jc["note"] = c.note;
      arr.push_back(std::move(jc));
      std::ostringstream ss;
      ss << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << " (worst = " << c.worst
         << ", trials = " << c.trials << ")";
      if (!c.note.empty()) ss << " -- " << c.note;
      sink.line(ss.str());
    }
    sink.results["checks"] = std::move(arr);
    if (trials <= 0) sink.results["warning"] = "0 trials requested, all checks vacuous";
    const bool ok = all_pass(checks);
    sink.results["all_pass"] = ok;
    if (!ok) sink.status = "failed";
    sink.emit();
    return ok ? 0 : 1;
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"first-order boundary systems with measure coefficients"};
  app.require_subcommand(1);

  CommonOpts vo, so, dfo, go, veo;
  std::string lambda_solve, lambda_greens, rhs_arg, points_arg, boundary_arg;
  std::uint64_t seed_def = 7, seed_ver = 7;
  int trials = 20;

  CLI::App* validate_cmd = app.add_subcommand("validate", "check a problem file");
  add_common(validate_cmd, vo);

  CLI::App* solve_cmd = app.add_subcommand("solve", "solve the block system at one lambda");
  add_common(solve_cmd, so);
  solve_cmd->add_option("--lambda", lambda_solve, "spectral parameter \"re,im\"")->required();
  solve_cmd->add_option("--rhs", rhs_arg, "right-hand side (inline JSON or file)");

  CLI::App* def_cmd = app.add_subcommand("deficiency", "deficiency indices and related counts");
  add_common(def_cmd, dfo);
  def_cmd->add_option("--seed", seed_def, "seed for the generic lambda draw");

  CLI::App* greens_cmd = app.add_subcommand("greens", "resolvent kernel table");
  add_common(greens_cmd, go);
  greens_cmd->add_option("--lambda", lambda_greens, "spectral parameter \"re,im\"")->required();
  greens_cmd->add_option("--points", points_arg, "comma-separated evaluation points");
  greens_cmd->add_option("--boundary", boundary_arg,
                         "boundary coefficient matrix (inline JSON or file)");

  CLI::App* verify_cmd = app.add_subcommand("verify", "run the property suite");
  add_common(verify_cmd, veo);
  verify_cmd->add_option("--seed", seed_ver, "random seed");
  verify_cmd->add_option("--trials", trials, "trials per check (0 = vacuous pass)");

  CLI11_PARSE(app, argc, argv);

  if (validate_cmd->parsed()) return cmd_validate(vo);
  if (solve_cmd->parsed()) return cmd_solve(so, lambda_solve, rhs_arg);
  if (def_cmd->parsed()) return cmd_deficiency(dfo, seed_def);
  if (greens_cmd->parsed()) return cmd_greens(go, lambda_greens, points_arg, boundary_arg);
  if (verify_cmd->parsed()) return cmd_verify(veo, seed_ver, trials);
  return 2;
}
