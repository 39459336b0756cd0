// fermient: analysis front end for the fermionic entanglement toolkit.
//
// Subcommands:
//   analyze      report every computed quantity for a state file
//   sweep-werner pseudo-Werner mixture curve C(p), E^qsp(p) with threshold
//   verify       run the oracle-vs-analytic property suites
//   thouless     construct and report the vacuum of a Bogoliubov map
//
// Exit codes: 0 success, 1 verification failure, 2 schema violation,
// 3 invariant violation.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fermient/io.hpp"
#include "fermient/oracle.hpp"
#include "fermient/report.hpp"

namespace {

using namespace fermient;

struct Grid {
  double a = 0.0, b = 1.0, step = 0.1;
};

Grid parse_grid(const std::string& text) {
  Grid g;
  if (std::sscanf(text.c_str(), "%lf:%lf:%lf", &g.a, &g.b, &g.step) != 3 || g.step <= 0 ||
      g.b < g.a)
    throw CLI::ValidationError("--grid expects a:b:step with step > 0");
  return g;
}

Mat read_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open " + path);
  std::vector<std::vector<Complex>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::vector<Complex> row;
    double re, im;
    while (ls >> re >> im) row.emplace_back(re, im);
    if (!row.empty()) rows.push_back(std::move(row));
  }
  if (rows.empty()) throw SchemaError("empty matrix file " + path);
  Mat m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != rows[0].size()) throw SchemaError("ragged matrix in " + path);
    for (std::size_t c = 0; c < rows[r].size(); ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  }
  return m;
}

int run_analyze(const std::string& input, bool split, bool with_decomposition, bool structured) {
  const StateFile sf = parse_state_file(input);
  if (sf.pure) {
    print_report(std::cout, analyze_state(*sf.pure, with_decomposition), structured);
    return 0;
  }
  const MixedState& ms = *sf.mixed;
  const Eigen::VectorXd pd = parity_diagonal(ms.n);
  const double even_weight = 0.5 * (1.0 + (pd.asDiagonal() * ms.rho).trace().real());
  const bool sector_mixing = even_weight > 1e-10 && even_weight < 1.0 - 1e-10;
  if (sector_mixing && !split)
    throw std::invalid_argument(
        "input mixes parity sectors; rerun with --split to analyze each sector");
  if (sector_mixing) {
    const ParitySplit ps = parity_split(ms);
    std::cout << (structured ? "p_plus " : "even-sector weight: ") << detail::fmt(ps.p_plus)
              << "\n";
    if (ps.rho_plus) print_report(std::cout, analyze_state(*ps.rho_plus, with_decomposition), structured);
    std::cout << (structured ? "p_minus " : "odd-sector weight: ") << detail::fmt(ps.p_minus)
              << "\n";
    if (ps.rho_minus) print_report(std::cout, analyze_state(*ps.rho_minus, with_decomposition), structured);
    if (ms.n == 4) {
      const double e = formation_entanglement_split(ms);
      std::cout << (structured ? "E_qsp_total " : "combined E^qsp: ") << detail::fmt(e) << "\n";
    }
    return 0;
  }
  print_report(std::cout, analyze_state(ms, with_decomposition), structured);
  return 0;
}

FockState default_werner_state(Parity parity) {
  Vec amp = Vec::Zero(16);
  if (parity == Parity::odd) {
    amp[0b0001] = 1 / std::sqrt(2.0);  // (c†_1|0> + c_1|0bar>)/sqrt(2)
    amp[0b1110] = 1 / std::sqrt(2.0);
  } else {
    amp[0b0011] = 1 / std::sqrt(2.0);  // (c†_1c†_2 + c†_3c†_4)|0>/sqrt(2)
    amp[0b1100] = 1 / std::sqrt(2.0);
  }
  return FockState(4, amp);
}

int run_sweep(const std::string& parity_name_arg, const std::string& pure_path, const Grid& grid,
              bool with_oracle, const SearchBudget& budget, bool structured) {
  const Parity parity = detail::parse_parity(parity_name_arg);
  if (parity == Parity::mixed) throw SchemaError("--parity must be even or odd");

  FockState psi = default_werner_state(parity);
  if (!pure_path.empty()) {
    const StateFile sf = parse_state_file(pure_path);
    if (!sf.pure) throw SchemaError("--pure-state must name a pure state file");
    psi = *sf.pure;
  }
  if (psi.n != 4 || number_parity(psi) != parity)
    throw std::invalid_argument("sweep state must be n=4 with the requested parity");

  // maximally mixed background on the sector spanned by the quartet basis
  const Mat basis = detail::sector_basis_matrix(parity);
  const Mat background = basis * basis.adjoint() / 8.0;
  const Mat proj = psi.amp * psi.amp.adjoint();

  std::cout << (structured ? "# p C E_qsp" : "      p        C(rho)       E^qsp") << "\n";
  double prev_c = -1.0, prev_p = 0.0;
  std::optional<double> threshold;
  const double eps = grid.step * 1e-9;
  for (double p = grid.a; p <= grid.b + eps; p += grid.step) {
    const double pc = std::min(p, 1.0);
    MixedState ms(4, pc * proj + (1.0 - pc) * background);
    const ConcurrenceReport rep = mixed_concurrence(ms);
    const double e = formation_entanglement(ms);
    std::cout << std::setprecision(12) << pc << " " << rep.concurrence << " " << e;
    if (with_oracle) std::cout << " " << convex_roof_search(ms, budget);
    std::cout << "\n";
    if (prev_c == 0.0 && rep.concurrence > 0.0) {
      // refine the sign change by bisection on the analytic curve
      double lo = prev_p, hi = pc;
      for (int it = 0; it < 60; ++it) {
        const double mid = (lo + hi) / 2;
        MixedState mm(4, mid * proj + (1.0 - mid) * background);
        (mixed_concurrence(mm).concurrence > 0.0 ? hi : lo) = mid;
      }
      threshold = (lo + hi) / 2;
    }
    prev_c = rep.concurrence;
    prev_p = pc;
  }
  if (threshold)
    std::cout << (structured ? "threshold " : "entanglement threshold: ")
              << std::setprecision(12) << *threshold << "\n";
  return 0;
}

int run_verify(const std::string& suite, const SearchBudget& budget) {
  Rng rng(budget.seed + 1);
  int failures = 0;
  auto check = [&](const std::string& name, bool ok, double margin) {
    std::cout << (ok ? "pass " : "FAIL ") << name << "  margin " << std::setprecision(6)
              << margin << "\n";
    if (!ok) ++failures;
  };

  if (suite == "all" || suite == "entropy") {
    double worst = 1e300;
    for (int t = 0; t < 10; ++t) {
      const FockState s = random_pure_state(4, t % 2 ? Parity::odd : Parity::even, rng);
      const double gap = min_entropy_over_qsp_bases(qsp_matrix(s), budget) - entropy_qsp(s);
      worst = std::min(worst, budget.tolerance - std::abs(gap));
    }
    check("entropy: qsp oracle within tolerance of analytic", worst >= 0, worst);
  }
  if (suite == "all" || suite == "concurrence") {
    double worst = 1e300;
    for (int t = 0; t < 6; ++t) {
      const MixedState ms = random_mixed_state(4, t % 2 ? Parity::odd : Parity::even, 2 + t % 3, rng);
      const double gap = convex_roof_search(ms, budget) - mixed_concurrence(ms).concurrence;
      worst = std::min(worst, budget.tolerance - std::abs(gap));
    }
    check("concurrence: convex roof oracle within tolerance", worst >= 0, worst);
  }
  if (suite == "all" || suite == "majorization") {
    double worst = 1e300;
    for (int t = 0; t < 1000; ++t) {
      const int n = 2 + t % 3;
      const FockState s = random_pure_state(n, t % 2 ? Parity::odd : Parity::even, rng);
      const MajorizationChain mc = majorization_chain(s, 1e-9);
      worst = std::min(worst, mc.holds ? 1.0 : -1.0);
      const double sc = entropy_sc(s), sp = entropy_sp(s), qsp = entropy_qsp(s);
      worst = std::min({worst, sc - sp + 1e-9, sp - qsp + 1e-9});
    }
    check("majorization: chain and entropy inequalities on 1000 states", worst >= 0, worst);
  }
  if (suite == "all" || suite == "thouless") {
    double worst = 1e300;
    for (int t = 0; t < 20; ++t) {
      BogoliubovMap m = random_bogoliubov(4, rng, 0.6);
      const FockState vac = thouless_vacuum(m);
      worst = std::min({worst, 1e-9 - annihilation_residual(m, vac), 1e-9 - entropy_qsp(vac),
                        1e-9 - (sp_matrix(vac) - m.V * m.V.adjoint()).norm()});
    }
    check("thouless: vacuum annihilation, S^qsp, rho^sp = VV†", worst >= 0, worst);
  }
  return failures == 0 ? 0 : 1;
}

int run_thouless(const std::string& u_path, const std::string& v_path, const std::string& out_path,
                 bool structured) {
  BogoliubovMap m{read_matrix(u_path), read_matrix(v_path)};
  if (m.U.rows() != m.U.cols() || m.V.rows() != m.V.cols() || m.U.rows() != m.V.rows())
    throw SchemaError("U and V must be square matrices of equal size");
  require_valid(m);
  const FockState vac = thouless_vacuum(m);
  if (!out_path.empty()) {
    std::ofstream os(out_path);
    write_state(os, vac);
  } else {
    write_state(std::cout, vac);
  }
  print_report(std::cout, analyze_state(vac), structured);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fermient: fermionic entanglement measures toolkit"};
  app.require_subcommand(1);

  std::string input, pure_path, parity_arg = "odd", grid_text = "0:1:0.1";
  std::string suite = "all", u_path, v_path, out_path, format = "table";
  bool split = false, with_oracle = false, with_decomposition = false;
  SearchBudget budget;
  if (const char* env = std::getenv("FERMI_ENT_SEED")) budget.seed = std::strtoull(env, nullptr, 10);

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--budget", budget.samples, "oracle sample budget");
    cmd->add_option("--refine", budget.refine_steps, "oracle refinement steps");
    cmd->add_option("--seed", budget.seed, "random seed");
    cmd->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"table", "structured"}));
  };

  CLI::App* analyze = app.add_subcommand("analyze", "report all quantities for a state file");
  analyze->add_option("--input", input, "state file")->required();
  analyze->add_flag("--split", split, "apply parity_split to sector-mixing input");
  analyze->add_flag("--decomposition", with_decomposition, "include the optimal decomposition");
  add_common(analyze);

  CLI::App* sweep = app.add_subcommand("sweep-werner", "pseudo-Werner mixture curve");
  sweep->add_option("--parity", parity_arg, "sector (even|odd)");
  sweep->add_option("--pure-state", pure_path, "replace the maximally entangled state");
  sweep->add_option("--grid", grid_text, "p grid as a:b:step");
  sweep->add_flag("--oracle", with_oracle, "also run the convex roof oracle per point");
  add_common(sweep);

  CLI::App* verify = app.add_subcommand("verify", "oracle-vs-analytic property suites");
  verify->add_option("--suite", suite, "suite name")
      ->check(CLI::IsMember({"all", "entropy", "concurrence", "majorization", "thouless"}));
  add_common(verify);

  CLI::App* thou = app.add_subcommand("thouless", "Thouless vacuum of a Bogoliubov map");
  thou->add_option("--u-matrix", u_path, "text file: rows of re im pairs")->required();
  thou->add_option("--v-matrix", v_path, "text file: rows of re im pairs")->required();
  thou->add_option("--output", out_path, "write the vacuum state file here");
  add_common(thou);

  CLI11_PARSE(app, argc, argv);
  const bool structured = format == "structured";

  try {
    if (*analyze) return run_analyze(input, split, with_decomposition, structured);
    if (*sweep) return run_sweep(parity_arg, pure_path, parse_grid(grid_text), with_oracle,
                                 budget, structured);
    if (*verify) return run_verify(suite, budget);
    if (*thou) return run_thouless(u_path, v_path, out_path, structured);
  } catch (const fermient::SchemaError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
