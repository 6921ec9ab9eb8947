#include "carnot/tolerances.hpp"

#include <cmath>
#include <cstdlib>

namespace carnot {

namespace {

void read_env(const char* name, double& slot) {
  const char* v = std::getenv(name);
  if (v == nullptr || *v == '\0') return;
  char* end = nullptr;
  const double d = std::strtod(v, &end);
  if (end != v && *end == '\0' && std::isfinite(d) && d > 0.0) slot = d;
}

Tolerances load() {
  Tolerances t;
  read_env("CARNOT_FD_STEP", t.fd_step);
  read_env("CARNOT_DECAY_THRESHOLD", t.decay_threshold);
  read_env("CARNOT_X1F_TOL", t.x1f_tol);
  read_env("CARNOT_DEGENERATE_PAIR", t.degenerate_pair);
  read_env("CARNOT_RESIDUAL_TOL", t.residual_tol);
  return t;
}

}  // namespace

const Tolerances& tolerances() {
  static const Tolerances t = load();
  return t;
}

}  // namespace carnot
