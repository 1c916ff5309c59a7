#ifndef BERGMAN_ERROR_HPP
#define BERGMAN_ERROR_HPP

#include <stdexcept>
#include <string>

namespace bergman {

enum class errc {
  none = 0,
  bad_argument,
  out_of_domain,
  division_by_zero,
  no_convergence,
  not_bracketed,
  not_concave,
  no_decaying_tail,
  tail_not_certified,
  empty_region,
};

/// All failures in this library throw Error (or a subclass carrying extra
/// state, see quadrature.hpp).  The code is stable across releases; the
/// message is for humans.
class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

}  // namespace bergman

#endif
