#pragma once

#include <functional>
#include <vector>

namespace nlmc {

struct IntegrationResult {
  double value = 0;
  double abserr = 0;
  int status = 0;  // GSL status code; nonzero means the tolerance was not met
};

// Adaptive integration of f over (lo, hi).  Known interior kinks or jumps can
// be passed as breakpoints; points outside (lo, hi) are ignored.
IntegrationResult integrate(const std::function<double(double)>& f, double lo, double hi,
                            double abs_tol, double rel_tol,
                            const std::vector<double>& breakpoints = {});

}  // namespace nlmc
