#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "vecagg/harness.hpp"
#include "vecagg/linalg.hpp"
#include "vecagg/oracle.hpp"
#include "vecagg/problem.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitInputError = 2;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw vecagg::UsageError("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

vecagg::Problem load_problem(const std::string& path) {
  vecagg::Problem problem = vecagg::parse_problem(slurp(path));
  for (const std::string& warning : problem.warnings) {
    std::cerr << path << ": warning: " << warning << '\n';
  }
  return problem;
}

int cmd_analyze(const std::string& path) {
  vecagg::Problem problem = load_problem(path);
  const vecagg::AggregationSpec& spec = problem.spec;
  int stack_rank = vecagg::rank(vecagg::vstack(spec.f, spec.g));
  int cond = vecagg::conditional_rank(spec.f, spec.g);
  std::cout << "q=" << spec.field.q() << " K=" << spec.users() << " M=" << spec.m()
            << " N=" << spec.n() << " L=" << spec.len << '\n';
  std::cout << "rank([F;G])=" << stack_rank << '\n';
  std::cout << "rank(G|F)=" << cond << '\n';
  std::cout << "R=1" << '\n';
  std::cout << "R_ZSigma=" << cond << '\n';
  return kExitOk;
}

void print_scheme_header(const vecagg::Scheme& scheme) {
  vecagg::RateReport rates = vecagg::rate_report(scheme);
  std::cout << "scheme q=" << scheme.spec.field.q() << " K=" << scheme.spec.users()
            << " M=" << scheme.spec.m() << " L=" << scheme.spec.len
            << " LZS=" << scheme.s_per_block << " R=" << rates.r.to_string()
            << " R_ZSigma=" << rates.r_zsigma.to_string()
            << " R_Z=" << rates.r_z_max.to_string() << '\n';
}

int cmd_verify(const std::string& path, uint64_t budget, int threads, bool inject_fault,
               bool section6) {
  vecagg::Problem problem = load_problem(path);

  vecagg::Scheme scheme = [&]() {
    if (!section6) return vecagg::construct(problem.spec);
    vecagg::Scheme sym = vecagg::symmetrized_three_user(problem.spec.field);
    if (sym.spec.f != problem.spec.f || sym.spec.g != problem.spec.g) {
      throw vecagg::UsageError(
          "--section6 needs the instance F=[1 1 1], G=[1 2 3] over a prime q >= 5");
    }
    return sym;
  }();

  if (inject_fault) {
    if (scheme.s_per_block < 1) {
      throw vecagg::UsageError("--inject-fault needs a scheme with at least one key symbol");
    }
    scheme = vecagg::drop_key_symbol(scheme, scheme.s_per_block - 1);
    std::cerr << "fault injected: dropped the last source key symbol\n";
  }

  print_scheme_header(scheme);
  vecagg::oracle::Options options;
  options.budget = budget;
  options.threads = threads;
  vecagg::oracle::VerificationReport report = vecagg::oracle::run_all_checks(scheme, options);
  std::cout << vecagg::oracle::render(report);
  return report.all_pass() ? kExitOk : kExitVerifyFail;
}

int cmd_simulate(const std::string& path, int rounds, uint64_t seed,
                 const std::string& scheme_path) {
  vecagg::Problem problem = load_problem(path);
  vecagg::Scheme scheme = scheme_path.empty()
                              ? vecagg::construct(problem.spec)
                              : vecagg::import_scheme(slurp(scheme_path), problem.spec);
  vecagg::RunSummary summary = vecagg::run_many(scheme, rounds, seed);
  std::cout << "rounds=" << summary.rounds << " passed=" << summary.passed
            << " message_symbols=" << summary.message_symbols << '\n';
  return summary.all_passed() ? kExitOk : kExitVerifyFail;
}

int cmd_construct(const std::string& path, const std::string& out_path) {
  vecagg::Problem problem = load_problem(path);
  vecagg::Scheme scheme = vecagg::construct(problem.spec);
  std::string text = vecagg::export_scheme(scheme);
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path);
    if (!out) throw vecagg::UsageError("cannot write '" + out_path + "'");
    out << text;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vector linear secure aggregation toolkit"};
  app.require_subcommand(1);

  std::string problem_path;
  uint64_t budget = 100'000'000;
  int threads = 0;
  uint64_t seed = 0;
  int rounds = 100;
  bool inject_fault = false;
  bool section6 = false;
  std::string out_path;
  std::string scheme_path;

  CLI::App* analyze = app.add_subcommand("analyze", "rank analysis and optimal rates");
  analyze->add_option("problem", problem_path, "problem file")->required();

  CLI::App* verify = app.add_subcommand("verify", "exhaustive correctness and security checks");
  verify->add_option("problem", problem_path, "problem file")->required();
  verify->add_option("--budget", budget, "maximum number of enumerated states");
  verify->add_option("--threads", threads, "worker threads (0 = all cores)");
  verify->add_flag("--inject-fault", inject_fault, "drop one key symbol before verifying");
  verify->add_flag("--section6", section6, "verify the symmetrized three-user scheme");

  CLI::App* simulate = app.add_subcommand("simulate", "run the dealer/users/server protocol");
  simulate->add_option("problem", problem_path, "problem file")->required();
  simulate->add_option("--rounds", rounds, "rounds to simulate");
  simulate->add_option("--seed", seed, "base seed");
  simulate->add_option("--scheme", scheme_path, "use an exported scheme file");

  CLI::App* construct = app.add_subcommand("construct", "compile and export a scheme");
  construct->add_option("problem", problem_path, "problem file")->required();
  construct->add_option("--out", out_path, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? kExitInputError : kExitOk;
  }

  try {
    if (analyze->parsed()) return cmd_analyze(problem_path);
    if (verify->parsed()) return cmd_verify(problem_path, budget, threads, inject_fault, section6);
    if (simulate->parsed()) return cmd_simulate(problem_path, rounds, seed, scheme_path);
    if (construct->parsed()) return cmd_construct(problem_path, out_path);
  } catch (const vecagg::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const vecagg::BudgetError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const vecagg::UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const vecagg::Error& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInputError;
  }
  return kExitInputError;
}
