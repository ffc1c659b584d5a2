#ifndef CZITER_ERRORS_HPP
#define CZITER_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cziter {

// Two top-level families, matching the CLI exit codes: input_error -> 2,
// computation_error -> 1.

struct input_error : std::runtime_error {
  explicit input_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct computation_error : std::runtime_error {
  explicit computation_error(const std::string& msg) : std::runtime_error(msg) {}
};

// malformed or inconsistent dimensions on construction / parse
struct dimension_error : input_error {
  explicit dimension_error(const std::string& msg) : input_error(msg) {}
};

// violated structural invariant (non-symplectic matrix, bad angle range, ...)
struct invariant_error : input_error {
  explicit invariant_error(const std::string& msg) : input_error(msg) {}
};

// escalating-precision ladder exhausted, eigenvalue clusters unresolvable
struct precision_error : computation_error {
  explicit precision_error(const std::string& msg) : computation_error(msg) {}
};

// guarded rational angle used beyond its guard bound
struct guard_error : computation_error {
  explicit guard_error(const std::string& msg) : computation_error(msg) {}
};

// degenerate endpoint, index undefined
struct degeneracy_error : computation_error {
  explicit degeneracy_error(const std::string& msg) : computation_error(msg) {}
};

// spectral structure outside what an algorithm supports (deep Jordan towers,
// non-semisimple extension endpoints, ...)
struct structure_error : computation_error {
  explicit structure_error(const std::string& msg) : computation_error(msg) {}
};

}  // namespace cziter

#endif
