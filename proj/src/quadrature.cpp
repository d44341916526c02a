#include "nlmc/quadrature.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include <algorithm>
#include <cmath>
#include <memory>

namespace nlmc {

namespace {

constexpr size_t kWorkspaceSize = 4096;
constexpr size_t kMaxBreakpoints = 200;

struct WorkspaceDeleter {
  void operator()(gsl_integration_workspace* w) const { gsl_integration_workspace_free(w); }
};

gsl_integration_workspace* workspace() {
  thread_local std::unique_ptr<gsl_integration_workspace, WorkspaceDeleter> ws(
      gsl_integration_workspace_alloc(kWorkspaceSize));
  return ws.get();
}

double call_std_function(double t, void* params) {
  return (*static_cast<const std::function<double(double)>*>(params))(t);
}

struct HandlerSilencer {
  HandlerSilencer() { gsl_set_error_handler_off(); }
};

}  // namespace

IntegrationResult integrate(const std::function<double(double)>& f, double lo, double hi,
                            double abs_tol, double rel_tol,
                            const std::vector<double>& breakpoints) {
  static HandlerSilencer silencer;
  IntegrationResult out;
  if (!(hi > lo)) return out;

  gsl_function gf;
  gf.function = &call_std_function;
  gf.params = const_cast<std::function<double(double)>*>(&f);

  std::vector<double> pts;
  pts.push_back(lo);
  for (double b : breakpoints)
    if (b > lo && b < hi) pts.push_back(b);
  pts.push_back(hi);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() > kMaxBreakpoints) {
    // Keep the endpoints and thin the interior evenly.
    std::vector<double> thin;
    thin.push_back(pts.front());
    double stride = double(pts.size() - 2) / double(kMaxBreakpoints - 2);
    for (size_t k = 0; k < kMaxBreakpoints - 2; ++k) thin.push_back(pts[1 + size_t(k * stride)]);
    thin.push_back(pts.back());
    std::sort(thin.begin(), thin.end());
    thin.erase(std::unique(thin.begin(), thin.end()), thin.end());
    pts = std::move(thin);
  }

  if (pts.size() > 2) {
    out.status = gsl_integration_qagp(&gf, pts.data(), pts.size(), abs_tol, rel_tol,
                                      kWorkspaceSize, workspace(), &out.value, &out.abserr);
  } else {
    out.status = gsl_integration_qag(&gf, lo, hi, abs_tol, rel_tol, kWorkspaceSize,
                                     GSL_INTEG_GAUSS15, workspace(), &out.value, &out.abserr);
  }
  return out;
}

}  // namespace nlmc
