// Copyright 2026 The smolu Authors.
// SPDX-License-Identifier: Apache-2.0

#include "smolu/auxpde.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace smolu {

namespace {

struct Coefficients {
  std::vector<double> a;  // (lambda^2 + Q(x,x)) / 2 per x node
  std::vector<double> b;  // (lambda^2 + Q(y,y)) / 2 per y node
  std::vector<double> c;  // Q(x,y) per node
};

Coefficients build_coefficients(const AuxProblem& p, int n, double h) {
  Coefficients k;
  const double l2 = p.lambda * p.lambda;
  k.a.resize(n);
  k.b.resize(n);
  k.c.assign(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    const double x = -p.box + i * h;
    double q = 0.0;
    if (!p.noise.empty()) q = p.noise.eval_covariance({x}, {x}).q_diag[0][0];
    k.a[i] = 0.5 * (l2 + q);
    k.b[i] = k.a[i];
  }
  if (!p.noise.empty()) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double x = -p.box + i * h, y = -p.box + j * h;
        k.c[static_cast<std::size_t>(i) * n + j] =
            p.noise.eval_covariance({x}, {y}).q_xy[0][0];
      }
  }
  return k;
}

}  // namespace

void AuxProblem::validate() const {
  if (!noise.empty() && noise.dim() != 1)
    throw ConfigError("auxiliary PDE is implemented for d = 1 only");
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  if (!(T > 0.0)) throw ConfigError("aux horizon T must be positive");
  if (!(box > 0.0)) throw ConfigError("aux box must be positive");
  if (!(lambda > 0.0))
    throw ConfigError("aux PDE needs lambda > 0 for uniform ellipticity");
  const double hh = spacing();
  if (hh > epsilon / 4.0 * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "aux grid too coarse: h = " << hh << " exceeds epsilon/4 = "
       << epsilon / 4.0;
    throw ConfigError(os.str());
  }
  if (2.0 * box / hh < 16.0) throw ConfigError("aux box holds fewer than 16 cells");
  if (window > box) throw ConfigError("aux window exceeds the box");
}

AuxResult solve_aux(const AuxProblem& prob) {
  prob.validate();
  const double h0 = prob.spacing();
  const int cells = static_cast<int>(std::ceil(2.0 * prob.box / h0 - 1e-9));
  const double h = 2.0 * prob.box / cells;
  const int n = cells + 1;
  const auto nn = static_cast<std::size_t>(n);
  const Coefficients k = build_coefficients(prob, n, h);

  // Monotone stencil: the mixed term uses the diagonal pair aligned with the
  // sign of Q(x,y), which needs a, b >= |c|/2.
  double rate = 0.0;
  for (int i = 1; i < n - 1; ++i)
    for (int j = 1; j < n - 1; ++j) {
      const double c = std::abs(k.c[i * nn + j]);
      if (k.a[i] < 0.5 * c - 1e-14 || k.b[j] < 0.5 * c - 1e-14)
        throw ConfigError("aux stencil is not monotone: lambda^2 too small "
                          "relative to the noise cross-covariance");
      rate = std::max(rate, (2.0 * k.a[i] + 2.0 * k.b[j] - c) / (h * h));
    }
  const double qmax = [&] {
    double m = 0.0;
    for (int i = 0; i < n; ++i) m = std::max(m, 2.0 * (k.a[i] - 0.5 * prob.lambda * prob.lambda));
    return 2.0 * m;  // |Qhat| <= Q(x,x) + Q(y,y)
  }();
  double dt = 0.25 * h * h / (2.0 * (prob.lambda * prob.lambda + qmax));
  if (rate > 0.0) dt = std::min(dt, 1.0 / rate);
  const long long steps = static_cast<long long>(std::ceil(prob.T / dt));
  dt = prob.T / static_cast<double>(steps);

  std::vector<double> src(nn * nn, 0.0);
  const KernelSpec kernel(1, prob.epsilon, prob.C0, prob.iota, prob.shape);
  for (int i = 1; i < n - 1; ++i)
    for (int j = 1; j < n - 1; ++j) {
      const double x = -prob.box + i * h, y = -prob.box + j * h;
      src[i * nn + j] = prob.source ? prob.source(x, y)
                                    : kernel.theta_eps({x - y + prob.z});
    }

  // Forward in s = T - t: d_s r = A r + source.
  std::vector<double> r(nn * nn, 0.0), next(nn * nn, 0.0);
  const double ih2 = 1.0 / (h * h);
  for (long long s = 0; s < steps; ++s) {
    for (int i = 1; i < n - 1; ++i) {
      const double* row = r.data() + i * nn;
      const double* up = row + nn;
      const double* dn = row - nn;
      const double ai = k.a[i];
      for (int j = 1; j < n - 1; ++j) {
        const double c = k.c[i * nn + j];
        const double ac = std::abs(c);
        const double center = row[j];
        double lap = (ai - 0.5 * ac) * (up[j] + dn[j] - 2.0 * center) +
                     (k.b[j] - 0.5 * ac) * (row[j + 1] + row[j - 1] - 2.0 * center);
        if (c > 0.0)
          lap += 0.5 * ac * (up[j + 1] + dn[j - 1] - 2.0 * center);
        else if (c < 0.0)
          lap += 0.5 * ac * (up[j - 1] + dn[j + 1] - 2.0 * center);
        next[i * nn + j] = center + dt * (lap * ih2 + src[i * nn + j]);
      }
    }
    r.swap(next);
  }

  AuxResult out;
  out.n = n;
  out.h = h;
  out.dt = dt;
  out.steps = steps;
  out.min_r = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double v = r[i * nn + j];
      if (!std::isfinite(v)) throw NumericalError("aux solve produced non-finite values");
      out.sup_r_full = std::max(out.sup_r_full, v);
      out.min_r = std::min(out.min_r, v);
      const double x = -prob.box + i * h, y = -prob.box + j * h;
      if (std::abs(x) > prob.window + 1e-12 || std::abs(y) > prob.window + 1e-12)
        continue;
      out.sup_r = std::max(out.sup_r, v);
      if (i > 0 && i < n - 1) {
        const double g = (r[(i + 1) * nn + j] - r[(i - 1) * nn + j]) / (2.0 * h);
        out.sup_grad_x = std::max(out.sup_grad_x, std::abs(g));
      }
    }
  const int jc = n / 2;
  for (int i = 0; i < n; ++i) {
    out.profile_x.push_back(-prob.box + i * h);
    out.profile_r.push_back(r[i * nn + jc]);
  }
  out.r = std::move(r);
  return out;
}

void linear_fit(const std::vector<double>& x, const std::vector<double>& y,
                double& slope, double& intercept, double& r_squared) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw ConfigError("linear fit needs >= 2 points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  slope = sxx > 0.0 ? sxy / sxx : 0.0;
  intercept = my - slope * mx;
  r_squared = (sxx > 0.0 && syy > 0.0) ? sxy * sxy / (sxx * syy) : 0.0;
}

GradientFit check_gradient_scaling(const AuxProblem& base,
                                   const std::vector<double>& eps_levels) {
  if (eps_levels.size() < 4)
    throw ConfigError("gradient scaling needs at least 4 epsilon levels");
  GradientFit fit;
  std::vector<double> logs;
  for (double eps : eps_levels) {
    AuxProblem p = base;
    p.epsilon = eps;
    p.z = 0.0;
    if (base.h > 0.0) p.h = std::min(base.h, eps / 4.0);
    const AuxResult res = solve_aux(p);
    fit.epsilon.push_back(eps);
    fit.sup_r.push_back(res.sup_r);
    fit.sup_grad.push_back(res.sup_grad_x);
    logs.push_back(std::abs(std::log(eps)));
  }
  linear_fit(logs, fit.sup_grad, fit.slope, fit.intercept, fit.r_squared);
  return fit;
}

std::vector<double> z_continuity(const AuxProblem& base,
                                 const std::vector<double>& z_values) {
  AuxProblem p0 = base;
  p0.z = 0.0;
  const AuxResult r0 = solve_aux(p0);
  std::vector<double> out;
  for (double z : z_values) {
    AuxProblem p = base;
    p.z = z;
    const AuxResult rz = solve_aux(p);
    double sup = 0.0;
    for (int i = 0; i < r0.n; ++i)
      for (int j = 0; j < r0.n; ++j) {
        const double x = -base.box + i * r0.h, y = -base.box + j * r0.h;
        if (std::abs(x) > base.window + 1e-12 || std::abs(y) > base.window + 1e-12)
          continue;
        const std::size_t idx = static_cast<std::size_t>(i) * r0.n + j;
        sup = std::max(sup, std::abs(rz.r[idx] - r0.r[idx]));
      }
    out.push_back(sup);
  }
  return out;
}

}  // namespace smolu
