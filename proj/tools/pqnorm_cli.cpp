#include "pqnorm/cb.hpp"
#include "pqnorm/json_io.hpp"
#include "pqnorm/pop.hpp"
#include "pqnorm/verify.hpp"

#include "CLI11.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace pqnorm;

namespace {

enum Exit { ok = 0, parse_error = 2, semantic_error = 3, check_failure = 4 };

struct Common {
  std::uint64_t seed = 0;
  int budget = 4;
  int level_cap = 4;
  std::string out;

  EngineOptions options() const {
    EngineOptions o;
    o.seed = seed;
    o.budget = budget;
    o.level_cap = level_cap;
    return o;
  }
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--seed", c.seed, "RNG seed")->envname("PQNORM_SEED");
  app->add_option("--budget", c.budget, "restarts per search")->envname("PQNORM_BUDGET")->check(CLI::PositiveNumber);
  app->add_option("--level-cap", c.level_cap, "largest matrix level searched")
      ->envname("PQNORM_LEVEL_CAP")
      ->check(CLI::PositiveNumber);
  app->add_option("--out", c.out, "write JSON here instead of stdout")->envname("PQNORM_OUT");
}

/// Inline JSON when the argument starts with '{', else a file path.
Json read_input(const std::string& in) {
  const auto start = in.find_first_not_of(" \t\r\n");
  if (start != std::string::npos && in[start] == '{') return parse_json(in);
  std::ifstream f(in);
  if (!f) throw ParseError("cannot read input '" + in + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_json(ss.str());
}

void emit(const Json& j, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream f(out);
  if (!f) throw std::runtime_error("cannot write '" + out + "'");
  f << j.dump(2) << "\n";
}

Json cmd_norm(const Json& in, const EngineOptions& opts) {
  const AmpElem u = element_from_json(in);
  Json j;
  j["ambient"] = u.ambient()->describe();
  j["level"] = u.level();
  j["certificate"] = to_json(pq_norm(u, opts));
  return j;
}

Json cmd_cbnorm(const Json& in, const EngineOptions& opts) {
  Json j;
  if (in.contains("components")) {
    const BilinearDesc rho = bilinear_from_json(in);
    j["kind"] = "bioperator";
    j["estimate"] = to_json(cb_bilinear_estimate(rho, opts.level_cap, opts));
  } else {
    const OperatorDesc phi = operator_from_json(in);
    j["kind"] = "operator";
    j["estimate"] = to_json(cb_norm_estimate(phi, opts.level_cap, opts));
  }
  return j;
}

Json cmd_tensor(const Json& in) {
  if (!in.contains("kind") || !in.contains("left") || !in.contains("right"))
    throw ParseError("tensor: expected {kind, left, right}");
  const std::string kind = in.at("kind").get<std::string>();
  const SpacePtr left = space_from_json(in.at("left"));
  const SpacePtr right = space_from_json(in.at("right"));
  SpacePtr out;
  if (kind == "pop")
    out = PQSpace::pop_tensor(left, right);
  else if (kind == "pr")
    out = PQSpace::pr_tensor(left->base, right);
  else
    throw ParseError("tensor: kind must be 'pop' or 'pr'");
  Json j;
  j["space"] = to_json(*out);
  j["dimension"] = out->dimension();
  j["description"] = out->describe();
  return j;
}

void write_element(const std::string& dir, const std::string& name, const AmpElem& u) {
  if (dir.empty()) return;
  std::filesystem::create_directories(dir);
  emit(to_json(u), (std::filesystem::path(dir) / name).string());
}

Json cmd_vn(int n, int m, const std::string& dir, const EngineOptions& opts) {
  if (n < 1) throw DimensionError("vn: n must be at least 1");
  if (m != 0 && (m < 1 || m >= n)) throw DimensionError("vn: need 1 <= m < n");
  const AmpElem vn = vn_family(n);
  write_element(dir, "v" + std::to_string(n) + ".json", vn);
  const NormCertificate up = pop_upper(vn, opts), lo = pop_lower(vn, opts);
  const NormCertificate op = op_norm_upper(vn, opts, {vn_witness(n)});
  Json j;
  j["n"] = n;
  j["pop"] = {{"reference", n}, {"lower", lo.lower}, {"upper", up.upper}};
  j["op"] = {{"reference", n * n}, {"upper", op.upper}, {"method", op.method}};
  j["gap"] = op.upper > up.upper + 1e-9;
  std::cerr << "pop(V_" << n << ") in [" << lo.lower << ", " << up.upper << "], op witness " << op.upper << "\n";
  if (m != 0) {
    const AmpElem head = vn_part(n, 0, m), tail = vn_part(n, m, n);
    write_element(dir, "v" + std::to_string(m) + "_of_" + std::to_string(n) + ".json", head);
    write_element(dir, "v" + std::to_string(n) + "_minus_v" + std::to_string(m) + ".json", tail);
    const double ub_head = op_norm_upper(head, opts, {vn_witness(n, 0, m)}).upper;
    const double ub_tail = op_norm_upper(tail, opts, {vn_witness(n, m, n)}).upper;
    std::ostringstream line;
    line << ub_head << " + " << ub_tail << (ub_head + ub_tail < op.upper ? " < " : " >= ") << op.upper;
    j["triangle"] = {{"m", m},
                     {"head", {{"reference", m * m}, {"upper", ub_head}}},
                     {"tail", {{"reference", (n - m) * (n - m)}, {"upper", ub_tail}}},
                     {"whole", op.upper},
                     {"violated", ub_head + ub_tail < op.upper},
                     {"line", line.str()}};
  }
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Norms of matricially normed spaces with certificates"};
  app.require_subcommand(1);

  Common common;
  std::string input;

  auto* norm = app.add_subcommand("norm", "certified norm of an element");
  add_common(norm, common);
  norm->add_option("--in", input, "element JSON (file or inline)")->required()->envname("PQNORM_IN");

  auto* cbnorm = app.add_subcommand("cbnorm", "cb-norm estimate of an operator or bioperator");
  add_common(cbnorm, common);
  cbnorm->add_option("--in", input, "operator JSON (file or inline)")->required()->envname("PQNORM_IN");

  auto* tensor = app.add_subcommand("tensor", "build a pop or pr tensor descriptor");
  add_common(tensor, common);
  tensor->add_option("--in", input, "{kind, left, right} JSON (file or inline)")->required()->envname("PQNORM_IN");

  int vn_n = 2, vn_m = 0;
  std::string vn_dir;
  auto* vn = app.add_subcommand("vn", "the V_n family and its norm gap");
  add_common(vn, common);
  vn->add_option("n", vn_n, "family size")->required();
  vn->add_option("m", vn_m, "split point for the triangle comparison");
  vn->add_option("--dir", vn_dir, "write element files here");

  std::string profile = "quick";
  std::optional<double> tol;
  std::string only;
  auto* verify = app.add_subcommand("verify", "run the property-check suite");
  add_common(verify, common);
  verify->add_option("--profile", profile, "quick or full")
      ->envname("PQNORM_PROFILE")
      ->check(CLI::IsMember({"quick", "full"}));
  verify->add_option("--tol", tol, "override every check tolerance")->envname("PQNORM_TOL");
  verify->add_option("--check", only, "run a single named check");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return parse_error;
  }

  try {
    const EngineOptions opts = common.options();
    if (*norm) {
      emit(cmd_norm(read_input(input), opts), common.out);
    } else if (*cbnorm) {
      emit(cmd_cbnorm(read_input(input), opts), common.out);
    } else if (*tensor) {
      emit(cmd_tensor(read_input(input)), common.out);
    } else if (*vn) {
      emit(cmd_vn(vn_n, vn_m, vn_dir, opts), common.out);
    } else if (*verify) {
      Report rep;
      if (!only.empty()) {
        const Profile p = profile == "full" ? Profile::full : Profile::quick;
        rep.seed = common.seed;
        rep.profile = p;
        rep.checks.push_back(run_check(only, common.seed, profile_sizes(p), tol));
      } else {
        rep = run_all(common.seed, profile == "full" ? Profile::full : Profile::quick, tol);
      }
      emit(to_json(rep), common.out);
      for (const auto& c : rep.checks)
        if (!c.passed()) std::cerr << c.verdict << ": " << c.check << " margin " << c.margin << " > " << c.tolerance << "\n";
      std::cerr << rep.count("pass") << "/" << rep.checks.size() << " checks passed\n";
      if (!rep.all_passed()) return check_failure;
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return parse_error;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return semantic_error;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return semantic_error;
  }
  return ok;
}
