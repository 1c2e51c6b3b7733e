#ifndef OBILEVEL_ERRORS_HPP
#define OBILEVEL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace obilevel {

enum class Errc {
  none = 0,
  dimension_mismatch,
  non_finite,
  infeasible_point,
  invalid_config,
  unsupported,
  divergence,
  solver_failure,
  io_failure,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace obilevel

#endif
