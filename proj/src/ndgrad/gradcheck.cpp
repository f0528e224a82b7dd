#include "duet/ndgrad/gradcheck.hpp"

#include <algorithm>
#include <cmath>

#include "duet/error.hpp"

namespace duet::ndgrad {
namespace {

double evaluate(const LossBuilder& loss) {
  Tape<double> tape;
  tape.set_check_finite(true);
  const double v = loss(tape).item();
  if (!std::isfinite(v)) throw NumericError("gradient_check: non-finite loss");
  return v;
}

}  // namespace

GradCheckReport gradient_check(std::vector<Parameter<double>> params, const LossBuilder& loss,
                               double tolerance, const GradCheckOptions& options) {
  GradCheckReport report;
  report.tolerance = tolerance;

  for (auto& p : params) {
    p.tensor.set_requires_grad(true);
    p.tensor.zero_grad();
  }
  {
    Tape<double> tape;
    tape.set_check_finite(true);
    tape.set_track_kinks(true);
    auto l = loss(tape);
    if (tape.min_kink_distance() < options.kink_margin) {
      report.near_kink = true;
      return report;
    }
    tape.backward(l);
  }

  for (auto& p : params) {
    const std::vector<double> analytic = p.tensor.has_grad()
                                             ? std::vector<double>(p.tensor.grad().begin(), p.tensor.grad().end())
                                             : std::vector<double>(p.tensor.size(), 0.0);
    auto values = p.tensor.data();
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double saved = values[i];
      values[i] = saved + options.step;
      const double up = evaluate(loss);
      values[i] = saved - options.step;
      const double down = evaluate(loss);
      values[i] = saved;
      const double numeric = (up - down) / (2.0 * options.step);
      const double denom =
          std::max({std::abs(analytic[i]), std::abs(numeric), options.denominator_floor});
      const double err = std::abs(analytic[i] - numeric) / denom;
      ++report.coordinates_checked;
      if (report.worst_parameter.empty() || err > report.max_relative_error) {
        report.max_relative_error = err;
        report.worst_parameter = p.name;
        report.worst_index = i;
      }
    }
  }
  report.passed = report.max_relative_error < tolerance;
  return report;
}

}  // namespace duet::ndgrad
