#include "trophy/csv.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <system_error>

namespace trophy::csv {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_history(std::ostream& out, const std::vector<IterationRecord>& history) {
  out << "k,p_bits,delta,rho_tilde,pred,success,f_est,gnorm_est\n";
  for (const IterationRecord& r : history) {
    out << r.k << ',' << r.bits << ',' << format_double(r.delta) << ',' << format_double(r.rho_tilde) << ','
        << format_double(r.pred) << ',' << (r.successful ? 1 : 0) << ',' << format_double(r.f_est) << ','
        << format_double(r.gnorm_est) << '\n';
  }
}

void write_ledger_header(std::ostream& out) { out << "problem,solver,level_bits,f_calls,g_calls\n"; }

void write_ledger_rows(std::ostream& out, const std::string& problem, const std::string& solver,
                       const EvalLedger& ledger) {
  for (std::size_t p = 0; p < ledger.level_bits.size(); ++p) {
    out << problem << ',' << solver << ',' << ledger.level_bits[p] << ',' << ledger.f_calls[p] << ','
        << ledger.g_calls[p] << '\n';
  }
}

void write_runs(std::ostream& out, const std::vector<RunRecord>& records) {
  out << "problem,solver,status,iterations,f_final,gnorm_final,f_calls,g_calls";
  for (std::string_view name : kCostModelNames) {
    std::string column(name);
    for (char& c : column) {
      c = c == '-' ? '_' : c;
    }
    out << ",adjusted_" << column;
  }
  out << '\n';
  for (const RunRecord& r : records) {
    out << r.problem << ',' << r.solver << ',' << to_string(r.status) << ',' << r.iterations << ','
        << format_double(r.f_final) << ',' << format_double(r.gnorm_final) << ',' << r.ledger.total_f() << ','
        << r.ledger.total_g();
    for (double a : r.adjusted_calls) {
      out << ',' << format_double(a);
    }
    out << '\n';
  }
}

void write_profiles_header(std::ostream& out) { out << "metric,solver,tau,h\n"; }

void write_profile_rows(std::ostream& out, std::string_view metric, const std::vector<ProfileCurve>& curves) {
  for (const ProfileCurve& c : curves) {
    for (std::size_t t = 0; t < c.tau.size(); ++t) {
      out << metric << ',' << c.solver << ',' << format_double(c.tau[t]) << ',' << format_double(c.h[t])
          << '\n';
    }
  }
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) {
      throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    }
    f << content;
    if (!f) {
      throw std::runtime_error("failed writing " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace trophy::csv
