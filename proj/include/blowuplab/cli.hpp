#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "blowuplab/model.hpp"

namespace blowuplab::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kUsage = 2 };

/// Entry point of the blowuplab tool. Never throws.
int run(int argc, const char* const* argv);

/// Inclusive grid "lo:hi:n" with n >= 1 points (n = 1 requires lo = hi).
/// Throws DomainError on malformed input.
std::vector<double> parse_grid(const std::string& spec);

/// 17 significant digits, '.' separator, shortest exponent form.
std::string format_double(double x);

/// Reads the t,u,du columns of a trajectory CSV written by `integrate`.
std::vector<State> read_trajectory_csv(std::istream& in);

/// Worker count from BLOWUPLAB_THREADS, else the hardware concurrency.
unsigned thread_count();

}  // namespace blowuplab::cli
