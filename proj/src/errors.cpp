#include "isscert/errors.hpp"

#include <cmath>

namespace isscert {

void require_level(double r, const char* what) {
  if (!std::isfinite(r) || r < 0.0) {
    throw DomainError(std::string(what) + ": expected a finite nonnegative value, got " +
                      std::to_string(r));
  }
}

}  // namespace isscert
