#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "trophy/benchmark.hpp"
#include "trophy/solver.hpp"

namespace trophy::csv {

/// %.17g, so every double round-trips exactly.
std::string format_double(double v);

/// k,p_bits,delta,rho_tilde,pred,success,f_est,gnorm_est
void write_history(std::ostream& out, const std::vector<IterationRecord>& history);

/// problem,solver,level_bits,f_calls,g_calls
void write_ledger_header(std::ostream& out);
void write_ledger_rows(std::ostream& out, const std::string& problem, const std::string& solver,
                       const EvalLedger& ledger);

/// problem,solver,status,iterations,f_final,gnorm_final,f_calls,g_calls, then
/// one adjusted_<model> column per cost model.
void write_runs(std::ostream& out, const std::vector<RunRecord>& records);

/// metric,solver,tau,h
void write_profiles_header(std::ostream& out);
void write_profile_rows(std::ostream& out, std::string_view metric, const std::vector<ProfileCurve>& curves);

/// Writes `content` to a sibling temporary file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace trophy::csv
