// Copyright 2026 The smolu Authors.
// SPDX-License-Identifier: Apache-2.0

#include "smolu/noise_field.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "smolu/rng.hpp"

namespace smolu {

namespace {

void require_dim(int d) {
  if (d < 1 || d > kMaxDim) {
    throw ConfigError("noise: dimension must be 1, 2 or 3 (got " +
                      std::to_string(d) + ")");
  }
}

}  // namespace

// ---------------------------------------------------------------------------

ConstantField::ConstantField(int d, const Vec& c) : d_(d), c_(c) {
  require_dim(d);
  for (int i = d; i < kMaxDim; ++i) c_[i] = 0.0;
}

FieldJet ConstantField::jet(const Vec&) const {
  FieldJet j;
  j.value = c_;
  return j;
}

std::string ConstantField::describe() const {
  std::ostringstream os;
  os << "constant(";
  for (int i = 0; i < d_; ++i) os << (i ? "," : "") << c_[i];
  os << ")";
  return os.str();
}

// ---------------------------------------------------------------------------

ShearField::ShearField(int d, int component, int coord, double wavenumber,
                       double phase)
    : d_(d), component_(component), coord_(coord), k_(wavenumber),
      phase_(phase) {
  require_dim(d);
  if (d < 2 || component == coord || component < 0 || coord < 0 ||
      component >= d || coord >= d) {
    throw ConfigError("shear: needs d >= 2 and distinct component/coordinate");
  }
}

FieldJet ShearField::jet(const Vec& x) const {
  const double arg = k_ * x[coord_] + phase_;
  FieldJet j;
  j.value[component_] = std::sin(arg);
  j.jacobian[component_][coord_] = k_ * std::cos(arg);
  j.hessian[component_][coord_][coord_] = -k_ * k_ * std::sin(arg);
  return j;
}

std::string ShearField::describe() const {
  std::ostringstream os;
  os << "shear(sin(" << k_ << "*x" << coord_ << "+" << phase_ << ") e"
     << component_ << ")";
  return os.str();
}

// ---------------------------------------------------------------------------

FieldJet StreamField2D::jet(const Vec& x) const {
  const StreamJet s = stream_jet(x);
  FieldJet j;
  j.value[0] = s.grad[1];
  j.value[1] = -s.grad[0];
  for (int b = 0; b < 2; ++b) {
    j.jacobian[0][b] = s.hess[1][b];
    j.jacobian[1][b] = -s.hess[0][b];
    for (int c = 0; c < 2; ++c) {
      j.hessian[0][b][c] = s.third[1][b][c];
      j.hessian[1][b][c] = -s.third[0][b][c];
    }
  }
  return j;
}

EddyField::EddyField(double k1, double k2, int variant)
    : k1_(k1), k2_(k2), variant_(variant) {
  if (variant < 0 || variant > 3) {
    throw ConfigError("periodic-eddies: variant must be in 0..3");
  }
}

StreamJet EddyField::stream_jet(const Vec& x) const {
  const double half_pi = 0.5 * std::numbers::pi;
  const double phase_x = (variant_ & 1) ? half_pi : 0.0;
  const double phase_y = (variant_ & 2) ? half_pi : 0.0;
  // n-th derivative of sin(k t + p) is k^n sin(k t + p + n pi/2)
  std::array<double, 4> fx{}, gy{};
  for (int n = 0; n < 4; ++n) {
    fx[n] = std::pow(k1_, n) * std::sin(k1_ * x[0] + phase_x + n * half_pi);
    gy[n] = std::pow(k2_, n) * std::sin(k2_ * x[1] + phase_y + n * half_pi);
  }
  auto d = [&](int nx, int ny) { return fx[nx] * gy[ny]; };
  StreamJet s;
  s.psi = d(0, 0);
  s.grad = {d(1, 0), d(0, 1)};
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      s.hess[a][b] = d((a == 0) + (b == 0), (a == 1) + (b == 1));
      for (int c = 0; c < 2; ++c) {
        s.third[a][b][c] = d((a == 0) + (b == 0) + (c == 0),
                             (a == 1) + (b == 1) + (c == 1));
      }
    }
  }
  return s;
}

std::string EddyField::describe() const {
  std::ostringstream os;
  os << "periodic-eddies(k=" << k1_ << "," << k2_ << ";variant=" << variant_
     << ")";
  return os.str();
}

StreamJet RotationField::stream_jet(const Vec& x) const {
  StreamJet s;
  s.psi = -0.5 * (x[0] * x[0] + x[1] * x[1]);
  s.grad = {-x[0], -x[1]};
  s.hess[0][0] = -1.0;
  s.hess[1][1] = -1.0;
  return s;
}

WindowedRotationField::WindowedRotationField(double rho) : rho_(rho) {
  if (!(rho > 0.0)) throw ConfigError("rotation-windowed: rho must be > 0");
}

StreamJet WindowedRotationField::stream_jet(const Vec& x) const {
  // psi = f(s), s = |x|^2, f(s) = -s/2 * b(s / rho^2),
  // b(u) = exp(1 - 1/(1-u)) on u < 1.
  StreamJet out;
  const double s = x[0] * x[0] + x[1] * x[1];
  const double r2 = rho_ * rho_;
  const double u = s / r2;
  if (u >= 1.0) return out;
  const double w = 1.0 - u;
  const double h1 = -1.0 / (w * w);
  const double h2 = -2.0 / (w * w * w);
  const double h3 = -6.0 / (w * w * w * w);
  const double b0 = std::exp(1.0 - 1.0 / w);
  const double b1 = h1 * b0 / r2;
  const double b2 = (h2 + h1 * h1) * b0 / (r2 * r2);
  const double b3 = (h3 + 3.0 * h1 * h2 + h1 * h1 * h1) * b0 / (r2 * r2 * r2);
  const double f0 = -0.5 * s * b0;
  const double f1 = -0.5 * (b0 + s * b1);
  const double f2 = -0.5 * (2.0 * b1 + s * b2);
  const double f3 = -0.5 * (3.0 * b2 + s * b3);
  const std::array<double, 2> p{x[0], x[1]};
  out.psi = f0;
  for (int i = 0; i < 2; ++i) {
    out.grad[i] = 2.0 * f1 * p[i];
    for (int j = 0; j < 2; ++j) {
      out.hess[i][j] = 4.0 * f2 * p[i] * p[j] + (i == j ? 2.0 * f1 : 0.0);
      for (int k = 0; k < 2; ++k) {
        out.third[i][j][k] =
            8.0 * f3 * p[i] * p[j] * p[k] +
            4.0 * f2 *
                ((i == j ? p[k] : 0.0) + (i == k ? p[j] : 0.0) +
                 (j == k ? p[i] : 0.0));
      }
    }
  }
  return out;
}

std::string WindowedRotationField::describe() const {
  std::ostringstream os;
  os << "rotation-windowed(rho=" << rho_ << ")";
  return os.str();
}

// ---------------------------------------------------------------------------

void NoiseFieldSet::add(std::shared_ptr<const VectorField> field,
                        double amplitude) {
  if (!field) throw ConfigError("noise: null field");
  if (d_ == 0) d_ = field->dim();
  if (field->dim() != d_) {
    throw ConfigError("noise: field dimension " +
                      std::to_string(field->dim()) + " does not match set "
                      "dimension " + std::to_string(d_));
  }
  if (!std::isfinite(amplitude)) throw ConfigError("noise: amplitude not finite");
  fields_.push_back(std::move(field));
  amplitudes_.push_back(amplitude);
}

void NoiseFieldSet::append(const NoiseFieldSet& other) {
  for (std::size_t k = 0; k < other.size(); ++k) {
    add(other.fields_[k], other.amplitudes_[k]);
  }
}

bool NoiseFieldSet::bounded() const {
  for (const auto& f : fields_) {
    if (!f->bounded()) return false;
  }
  return true;
}

Vec NoiseFieldSet::eval_field(std::size_t k, const Vec& x) const {
  if (k >= fields_.size()) {
    throw ConfigError("noise: field index " + std::to_string(k) +
                      " out of range (|K| = " + std::to_string(size()) + ")");
  }
  Vec v = fields_[k]->value(x);
  for (int i = 0; i < d_; ++i) v[i] *= amplitudes_[k];
  return v;
}

FieldJet NoiseFieldSet::jet(std::size_t k, const Vec& x) const {
  if (k >= fields_.size()) {
    throw ConfigError("noise: field index " + std::to_string(k) +
                      " out of range");
  }
  FieldJet j = fields_[k]->jet(x);
  const double a = amplitudes_[k];
  for (int i = 0; i < d_; ++i) {
    j.value[i] *= a;
    for (int b = 0; b < d_; ++b) {
      j.jacobian[i][b] *= a;
      for (int c = 0; c < d_; ++c) j.hessian[i][b][c] *= a;
    }
  }
  return j;
}

double NoiseFieldSet::divergence(std::size_t k, const Vec& x) const {
  const FieldJet j = jet(k, x);
  double div = 0.0;
  for (int i = 0; i < d_; ++i) div += j.jacobian[i][i];
  return div;
}

Vec NoiseFieldSet::strat_correction(const Vec& x) const {
  Vec out{};
  for (std::size_t k = 0; k < fields_.size(); ++k) {
    const FieldJet j = jet(k, x);
    for (int a = 0; a < d_; ++a) {
      for (int b = 0; b < d_; ++b) out[a] += j.value[b] * j.jacobian[a][b];
    }
  }
  for (int a = 0; a < d_; ++a) out[a] *= 0.5;
  return out;
}

CovarianceEval NoiseFieldSet::eval_covariance(const Vec& x,
                                              const Vec& y) const {
  CovarianceEval out;
  for (std::size_t k = 0; k < fields_.size(); ++k) {
    const FieldJet jx = jet(k, x);
    const Vec sy = eval_field(k, y);
    double div = 0.0;
    for (int b = 0; b < d_; ++b) div += jx.jacobian[b][b];
    for (int a = 0; a < d_; ++a) {
      for (int b = 0; b < d_; ++b) {
        out.q_xy[a][b] += jx.value[a] * sy[b];
        out.q_diag[a][b] += jx.value[a] * jx.value[b];
        // d_b (s^a s^b) = (d_b s^a) s^b + s^a (d_b s^b)
        out.grad_q_diag[a] += jx.jacobian[a][b] * jx.value[b];
      }
      out.grad_q_diag[a] += jx.value[a] * div;
    }
  }
  return out;
}

double NoiseFieldSet::q_diag_norm(const Vec& x) const {
  double trace = 0.0;
  for (std::size_t k = 0; k < fields_.size(); ++k) {
    const Vec s = eval_field(k, x);
    trace += dot(s, s, d_);
  }
  return trace;
}

double NoiseFieldSet::speed_sum(const Vec& x) const {
  double total = 0.0;
  for (std::size_t k = 0; k < fields_.size(); ++k) {
    total += norm(eval_field(k, x), d_);
  }
  return total;
}

bool NoiseFieldSet::periodic_on(double L, int samples) const {
  RandomStream rng(0x5eedULL, StreamRole::kAuxiliary, 0, 0);
  for (int s = 0; s < samples; ++s) {
    Vec x{};
    for (int i = 0; i < d_; ++i) x[i] = (rng.uniform() - 0.5) * L;
    for (std::size_t k = 0; k < size(); ++k) {
      const Vec v = eval_field(k, x);
      for (int axis = 0; axis < d_; ++axis) {
        Vec shifted = x;
        shifted[axis] += L;
        const Vec w = eval_field(k, shifted);
        for (int i = 0; i < d_; ++i) {
          if (std::abs(v[i] - w[i]) > 1e-9 * (1.0 + std::abs(v[i]))) {
            return false;
          }
        }
      }
    }
  }
  return true;
}

std::string NoiseFieldSet::describe() const {
  std::ostringstream os;
  for (std::size_t k = 0; k < size(); ++k) {
    os << (k ? "; " : "") << amplitudes_[k] << "*" << fields_[k]->describe();
  }
  return os.str();
}

// ---------------------------------------------------------------------------

NoiseFieldSet builtin_catalog(const std::string& name,
                              std::span<const double> params,
                              double amplitude, int d) {
  require_dim(d);
  NoiseFieldSet set(d);
  auto param = [&](std::size_t i, double fallback) {
    return i < params.size() ? params[i] : fallback;
  };
  if (name == "constant") {
    if (params.size() != static_cast<std::size_t>(d)) {
      throw ConfigError("constant: expected " + std::to_string(d) +
                        " components, got " + std::to_string(params.size()));
    }
    Vec c{};
    for (int i = 0; i < d; ++i) c[i] = params[i];
    set.add(std::make_shared<ConstantField>(d, c), amplitude);
  } else if (name == "shear") {
    if (d < 2) throw ConfigError("shear: requires d >= 2");
    const int component = static_cast<int>(param(1, 0));
    const int coord = static_cast<int>(param(2, 1));
    set.add(std::make_shared<ShearField>(d, component, coord, param(0, 1.0)),
            amplitude);
  } else if (name == "rotation") {
    if (d != 2) throw ConfigError("rotation: requires d = 2");
    set.add(std::make_shared<RotationField>(), amplitude);
  } else if (name == "rotation-windowed") {
    if (d != 2) throw ConfigError("rotation-windowed: requires d = 2");
    set.add(std::make_shared<WindowedRotationField>(param(0, 2.0)), amplitude);
  } else if (name == "periodic-eddies") {
    if (d == 1) {
      set.add(std::make_shared<ConstantField>(1, Vec{1.0, 0.0, 0.0}),
              amplitude);
    } else if (d == 2) {
      set.add(std::make_shared<EddyField>(param(0, 1.0), param(1, 1.0),
                                          static_cast<int>(param(2, 0))),
              amplitude);
    } else {
      const double k = param(0, 1.0);
      set.add(std::make_shared<ShearField>(3, 0, 2, k, 0.0), amplitude);
      set.add(std::make_shared<ShearField>(3, 1, 2, k, 0.5 * std::numbers::pi),
              amplitude);
    }
  } else {
    throw ConfigError("noise: unknown field '" + name +
                      "' (known: constant, shear, rotation, "
                      "rotation-windowed, periodic-eddies)");
  }
  return set;
}

}  // namespace smolu
