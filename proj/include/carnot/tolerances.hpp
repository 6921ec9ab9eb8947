#pragma once

namespace carnot {

/// Numerical defaults. Each can be overridden by an environment variable
/// (read once, at first use):
///   CARNOT_FD_STEP, CARNOT_DECAY_THRESHOLD, CARNOT_X1F_TOL,
///   CARNOT_DEGENERATE_PAIR, CARNOT_RESIDUAL_TOL.
struct Tolerances {
  double fd_step = 1e-5;          ///< central-difference step
  double decay_threshold = 0.05;  ///< final-level bound in "modulus -> 0" verdicts
  double x1f_tol = 1e-8;          ///< X_1 f degeneracy bound
  double degenerate_pair = 1e-12; ///< pairs closer than this are skipped in sup-ratios
  double residual_tol = 1e-6;     ///< broad* / smoothing residual tolerance
};

const Tolerances& tolerances();

}  // namespace carnot
