#pragma once

#include <functional>
#include <string>
#include <vector>

#include "duet/ndgrad/adam.hpp"
#include "duet/ndgrad/tape.hpp"

namespace duet::ndgrad {

struct GradCheckOptions {
  double step = 1e-6;           // central-difference step h
  double kink_margin = 1e-4;    // reject points this close to a ReLU/max kink
  double denominator_floor = 1e-3;
};

struct GradCheckReport {
  double max_relative_error = 0.0;
  std::string worst_parameter;
  std::size_t worst_index = 0;
  std::size_t coordinates_checked = 0;
  double tolerance = 0.0;
  bool near_kink = false;  // point rejected; nothing was measured
  bool passed = false;
};

// Builds a scalar loss from the current parameter values on the given tape.
using LossBuilder = std::function<Tensor<double>(Tape<double>&)>;

// Compares the tape's analytic gradients against central differences for
// every coordinate of every parameter. Relative error per coordinate is
// |analytic - numeric| / max(|analytic|, |numeric|, denominator_floor).
// Runs in 64-bit precision with finiteness checks on; throws NumericError
// on NaN/Inf.
GradCheckReport gradient_check(std::vector<Parameter<double>> params, const LossBuilder& loss,
                               double tolerance, const GradCheckOptions& options = {});

}  // namespace duet::ndgrad
