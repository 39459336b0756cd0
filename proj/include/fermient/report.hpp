#ifndef FERMIENT_REPORT_HPP
#define FERMIENT_REPORT_HPP

#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "fermient/densities.hpp"
#include "fermient/quartet.hpp"

namespace fermient {

/// Aggregated analysis record. Mode-resolved quantities are reported in the
/// computational basis; entropies in bits. Quartet fields are only populated
/// for n = 4 single-sector inputs.
struct Report {
  int n = 0;
  bool pure = true;
  Parity parity = Parity::mixed;

  Eigen::VectorXd p;            // diagonal occupations p_j
  double entropy_sc = 0;        // pure states only; 0 for mixed input
  double entropy_sp = 0;        // tr h(rho^sp)
  double entropy_qsp = 0;       // sum h(f_nu)
  double entropy_quadratic = 0;
  Eigen::VectorXd f;            // qsp pair spectrum, descending
  bool majorization_holds = false;  // pure states only

  struct Quartet {
    double concurrence = 0;
    double f_plus = 0.5;
    double f_minus = 0.5;
    double formation = 0;            // E^qsp
    Eigen::VectorXd d;               // mixed-state d_k (single entry C for pure)
    std::optional<NormalForm> normal;  // pure states only
    std::optional<std::vector<std::pair<double, QuartetState>>> decomposition;
  };
  std::optional<Quartet> quartet;
};

inline Report analyze_state(const FockState& s, bool with_decomposition = false) {
  Report r;
  r.n = s.n;
  r.pure = true;
  r.parity = number_parity(s);
  r.p.resize(s.n);
  for (int j = 1; j <= s.n; ++j) r.p[j - 1] = occupation_probability(s, j);
  r.entropy_sc = entropy_sc(s);
  r.entropy_sp = fermient::entropy_sp(s);
  const Mat q = qsp_matrix(s);
  r.entropy_qsp = fermient::entropy_qsp(q);
  r.entropy_quadratic = fermient::entropy_quadratic(s);
  r.f = qsp_pair_spectrum(q);
  r.majorization_holds = majorization_chain(s).holds;

  if (s.n == 4 && r.parity != Parity::mixed) {
    Report::Quartet qt;
    const QuartetState qs = from_fock(s);
    qt.concurrence = pure_concurrence(qs);
    std::tie(qt.f_plus, qt.f_minus) = qsp_eigenvalues_analytic(qs);
    qt.formation = entropy_qsp_analytic(qs);
    qt.d = Eigen::VectorXd::Constant(1, qt.concurrence);
    qt.normal = normal_form(s);
    if (with_decomposition)
      qt.decomposition = {{1.0, qs}};
    if (std::abs(qt.formation - r.entropy_qsp) > 1e-9)
      throw std::runtime_error("report: S^qsp does not match 4h(f+)");
    r.quartet = std::move(qt);
  }
  return r;
}

inline Report analyze_state(const MixedState& ms, bool with_decomposition = false) {
  Report r;
  r.n = ms.n;
  r.pure = false;
  const Mat sp = sp_matrix(ms);
  r.p.resize(ms.n);
  for (int j = 0; j < ms.n; ++j) r.p[j] = sp(j, j).real();
  r.entropy_sp = fermient::entropy_sp(sp);
  const Mat q = qsp_matrix_mixed(ms);
  r.entropy_qsp = fermient::entropy_qsp(q);
  r.entropy_quadratic = fermient::entropy_quadratic(ms);
  r.f = qsp_pair_spectrum(q);

  const Eigen::VectorXd pd = parity_diagonal(ms.n);
  const double even_weight = 0.5 * (1.0 + (pd.asDiagonal() * ms.rho).trace().real());
  if (even_weight > 1.0 - 1e-10)
    r.parity = Parity::even;
  else if (even_weight < 1e-10)
    r.parity = Parity::odd;
  else
    r.parity = Parity::mixed;

  if (ms.n == 4 && r.parity != Parity::mixed) {
    Report::Quartet qt;
    const ConcurrenceReport cr = mixed_concurrence(ms);
    qt.concurrence = cr.concurrence;
    const double root = std::sqrt(std::max(0.0, 1.0 - cr.concurrence * cr.concurrence));
    qt.f_plus = (1.0 + root) / 2.0;
    qt.f_minus = (1.0 - root) / 2.0;
    qt.formation = formation_entanglement(ms);
    qt.d = cr.d;
    if (with_decomposition) qt.decomposition = optimal_decomposition(ms);
    r.quartet = std::move(qt);
  }
  return r;
}

namespace detail {

inline std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(12) << x;
  return os.str();
}

inline std::string fmt_vec(const Eigen::VectorXd& v) {
  std::ostringstream os;
  os << std::setprecision(12);
  for (Eigen::Index k = 0; k < v.size(); ++k) os << (k ? " " : "") << v[k];
  return os.str();
}

}  // namespace detail

inline void print_report(std::ostream& os, const Report& r, bool structured) {
  using detail::fmt;
  using detail::fmt_vec;
  const char* parity = fermient::parity_name(r.parity);
  if (structured) {
    os << "n " << r.n << "\n"
       << "kind " << (r.pure ? "pure" : "mixed") << "\n"
       << "parity " << parity << "\n"
       << "p_j " << fmt_vec(r.p) << "\n";
    if (r.pure) os << "S_c " << fmt(r.entropy_sc) << "\n";
    os << "S_sp " << fmt(r.entropy_sp) << "\n"
       << "S_qsp " << fmt(r.entropy_qsp) << "\n"
       << "S_2 " << fmt(r.entropy_quadratic) << "\n"
       << "f " << fmt_vec(r.f) << "\n";
    if (r.pure) os << "majorization " << (r.majorization_holds ? "holds" : "violated") << "\n";
    if (r.quartet) {
      const auto& qt = *r.quartet;
      os << "C " << fmt(qt.concurrence) << "\n"
         << "f_plus " << fmt(qt.f_plus) << "\n"
         << "f_minus " << fmt(qt.f_minus) << "\n"
         << "E_qsp " << fmt(qt.formation) << "\n"
         << "d " << fmt_vec(qt.d) << "\n";
      if (qt.normal)
        os << "normal_alpha " << fmt(qt.normal->alpha) << "\n"
           << "normal_beta " << fmt(qt.normal->beta.real()) << " "
           << fmt(qt.normal->beta.imag()) << "\n";
      if (qt.decomposition) {
        for (const auto& [w, qs] : *qt.decomposition)
          os << "component " << fmt(w) << " C " << fmt(pure_concurrence(qs)) << "\n";
      }
    }
    return;
  }

  os << "state: n=" << r.n << " " << (r.pure ? "pure" : "mixed") << " parity=" << parity << "\n";
  os << "  p_j          : " << fmt_vec(r.p) << "\n";
  if (r.pure) os << "  S_c          : " << fmt(r.entropy_sc) << "\n";
  os << "  S^sp         : " << fmt(r.entropy_sp) << "\n"
     << "  S^qsp        : " << fmt(r.entropy_qsp) << "\n"
     << "  S_2          : " << fmt(r.entropy_quadratic) << "\n"
     << "  f spectrum   : " << fmt_vec(r.f) << "\n";
  if (r.pure)
    os << "  majorization : " << (r.majorization_holds ? "holds" : "violated") << "\n";
  if (r.quartet) {
    const auto& qt = *r.quartet;
    os << "  C            : " << fmt(qt.concurrence) << "\n"
       << "  f+, f-       : " << fmt(qt.f_plus) << ", " << fmt(qt.f_minus) << "\n"
       << "  E^qsp        : " << fmt(qt.formation) << "\n"
       << "  d_k          : " << fmt_vec(qt.d) << "\n";
    if (qt.normal)
      os << "  normal form  : alpha=" << fmt(qt.normal->alpha) << " beta=("
         << fmt(qt.normal->beta.real()) << ", " << fmt(qt.normal->beta.imag()) << ")\n";
    if (qt.decomposition) {
      os << "  decomposition:\n";
      for (const auto& [w, qs] : *qt.decomposition)
        os << "    weight " << fmt(w) << "  C " << fmt(pure_concurrence(qs)) << "\n";
    }
  }
}

}  // namespace fermient

#endif  // FERMIENT_REPORT_HPP
