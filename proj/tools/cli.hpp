#pragma once

#include "lebesgue/trig.hpp"
#include "lebesgue/verify.hpp"

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace lebesgue::cli {

/// Malformed input file; exit code 3.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum ExitCode : int { ok = 0, check_failed = 1, usage_error = 2, numeric_error = 3 };

/// Reads a `t,value` CSV sampled on t_j = 2 pi j / N, N a power of two >= 8.
[[nodiscard]] SampledPeriodic ingest_samples(const std::string& path);
[[nodiscard]] SampledPeriodic parse_samples(std::istream& in);

/// Sweep config with header case_id,check,alpha,r,beta,p,n,target_e,seed.
[[nodiscard]] std::vector<SweepCase> parse_sweep_config(std::istream& in);

/// Report columns in output order.
[[nodiscard]] const std::vector<std::string>& report_fields();
[[nodiscard]] std::string report_json(const VerificationReport& r);
[[nodiscard]] std::string report_csv_header();
[[nodiscard]] std::string report_csv_row(const VerificationReport& r);

/// Shortest round-trip decimal form.
[[nodiscard]] std::string format_number(double v);

/// argv without the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace lebesgue::cli
