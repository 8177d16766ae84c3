#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace sbern {

/// Failure categories carried by every sbern::error; they map 1:1 onto the
/// C API status codes and the CLI exit conventions.
enum class errc {
  invalid_argument = 1,  // precondition violation (bad input, bad config)
  io_error = 2,          // file/parse problems
  degenerate = 3,        // degenerate analytic outcome (e.g. vanishing bias functional)
  verification_failed = 4,
  internal = 5,
};

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& what) { throw error(code, what); }

/// Neumaier-compensated accumulator; used wherever lattice sums must cancel to
/// far below the magnitude of their terms (identity residuals, lemma sums).
struct kahan_sum {
  double sum = 0.0;
  double comp = 0.0;

  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum + comp; }
};

}  // namespace sbern
