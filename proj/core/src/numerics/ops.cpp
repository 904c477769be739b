/*
 * Copyright (c) 2026 The ltp Authors
 *
 * Licensed under the Apache License, Version 2.0;
 * You may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an 'AS IS' BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "ltp/numerics/ops.hpp"

#include <Eigen/Core>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "ltp/error.hpp"
#include "ltp/rng.hpp"

namespace ltp::num {
inline namespace LTP_PRECISION_NS {
namespace {

using MatRM = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapC = Eigen::Map<const MatRM>;
using MapM = Eigen::Map<MatRM>;

MapC as_mat(const Tensor& t) { return MapC(t.ptr(), t.rows(), t.cols()); }
MapM as_mat(Tensor& t) { return MapM(t.ptr(), t.rows(), t.cols()); }

[[noreturn]] void shape_fail(const char* op, const Shape& a, const Shape& b) {
  throw DimensionError(std::string(op) + ": incompatible shapes " + shape_str(a) +
                       " and " + shape_str(b));
}

void require_matrix(const char* op, const Tensor& t) {
  if (t.dim() != 2) {
    throw DimensionError(std::string(op) + ": expected a matrix, got " + shape_str(t.shape()));
  }
}

void require_same(const char* op, const Var& a, const Var& b) {
  if (a.shape() != b.shape()) shape_fail(op, a.shape(), b.shape());
}

Tape& tape_of(const Var& a) {
  if (!a) throw ContractError("operation on an empty Var");
  return *a.tape();
}

// Elementwise unary op with derivative computed from (x, y).
template <typename F, typename D>
Var unary(const char* name, const Var& x, F f, D dfdx) {
  Tape& tape = tape_of(x);
  const Tensor& xv = x.value();
  Tensor out(xv.shape());
  for (std::size_t i = 0; i < xv.size(); ++i) out[i] = f(xv[i]);
  const int xi = x.id();
  return tape.record(name, std::move(out), {x}, [xi, dfdx](Tape& t, int self) {
    const Tensor& g = t.grad_view(self);
    const Tensor& xv = t.value(xi);
    const Tensor& yv = t.value(self);
    Tensor& gx = t.grad(xi);
    for (std::size_t i = 0; i < g.size(); ++i) gx[i] += g[i] * dfdx(xv[i], yv[i]);
  });
}


}  // namespace

Var matmul(const Var& a, const Var& b) {
  Tape& tape = tape_of(a);
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  if (av.dim() != 2 || bv.dim() != 2 || av.cols() != bv.rows()) {
    shape_fail("matmul", av.shape(), bv.shape());
  }
  Tensor out({av.rows(), bv.cols()});
  as_mat(out).noalias() = as_mat(av) * as_mat(bv);
  const int ai = a.id(), bi = b.id();
  return tape.record("matmul", std::move(out), {a, b}, [ai, bi](Tape& t, int self) {
    const auto g = as_mat(t.grad_view(self));
    if (t.requires_grad(ai)) as_mat(t.grad(ai)).noalias() += g * as_mat(t.value(bi)).transpose();
    if (t.requires_grad(bi)) as_mat(t.grad(bi)).noalias() += as_mat(t.value(ai)).transpose() * g;
  });
}

Var matmul_nt(const Var& a, const Var& b) {
  Tape& tape = tape_of(a);
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  if (av.dim() != 2 || bv.dim() != 2 || av.cols() != bv.cols()) {
    shape_fail("matmul_nt", av.shape(), bv.shape());
  }
  Tensor out({av.rows(), bv.rows()});
  as_mat(out).noalias() = as_mat(av) * as_mat(bv).transpose();
  const int ai = a.id(), bi = b.id();
  return tape.record("matmul_nt", std::move(out), {a, b}, [ai, bi](Tape& t, int self) {
    const auto g = as_mat(t.grad_view(self));
    if (t.requires_grad(ai)) as_mat(t.grad(ai)).noalias() += g * as_mat(t.value(bi));
    if (t.requires_grad(bi)) as_mat(t.grad(bi)).noalias() += g.transpose() * as_mat(t.value(ai));
  });
}

Var transpose(const Var& a) {
  Tape& tape = tape_of(a);
  const Tensor& av = a.value();
  require_matrix("transpose", av);
  Tensor out({av.cols(), av.rows()});
  as_mat(out) = as_mat(av).transpose();
  const int ai = a.id();
  return tape.record("transpose", std::move(out), {a}, [ai](Tape& t, int self) {
    as_mat(t.grad(ai)) += as_mat(t.grad_view(self)).transpose();
  });
}

Var add(const Var& a, const Var& b) {
  require_same("add", a, b);
  Tape& tape = tape_of(a);
  Tensor out = a.value();
  out.add_(b.value());
  const int ai = a.id(), bi = b.id();
  return tape.record("add", std::move(out), {a, b}, [ai, bi](Tape& t, int self) {
    const Tensor& g = t.grad_view(self);
    if (t.requires_grad(ai)) t.grad(ai).add_(g);
    if (t.requires_grad(bi)) t.grad(bi).add_(g);
  });
}

Var sub(const Var& a, const Var& b) {
  require_same("sub", a, b);
  Tape& tape = tape_of(a);
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  Tensor out(av.shape());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = av[i] - bv[i];
  const int ai = a.id(), bi = b.id();
  return tape.record("sub", std::move(out), {a, b}, [ai, bi](Tape& t, int self) {
    const Tensor& g = t.grad_view(self);
    if (t.requires_grad(ai)) t.grad(ai).add_(g);
    if (t.requires_grad(bi)) {
      Tensor& gb = t.grad(bi);
      for (std::size_t i = 0; i < g.size(); ++i) gb[i] -= g[i];
    }
  });
}

Var mul(const Var& a, const Var& b) {
  require_same("mul", a, b);
  Tape& tape = tape_of(a);
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  Tensor out(av.shape());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = av[i] * bv[i];
  const int ai = a.id(), bi = b.id();
  return tape.record("mul", std::move(out), {a, b}, [ai, bi](Tape& t, int self) {
    const Tensor& g = t.grad_view(self);
    const Tensor& av = t.value(ai);
    const Tensor& bv = t.value(bi);
    if (t.requires_grad(ai)) {
      Tensor& ga = t.grad(ai);
      for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * bv[i];
    }
    if (t.requires_grad(bi)) {
      Tensor& gb = t.grad(bi);
      for (std::size_t i = 0; i < g.size(); ++i) gb[i] += g[i] * av[i];
    }
  });
}

Var div(const Var& a, const Var& b) {
  require_same("div", a, b);
  Tape& tape = tape_of(a);
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  Tensor out(av.shape());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = av[i] / bv[i];
  const int ai = a.id(), bi = b.id();
  return tape.record("div", std::move(out), {a, b}, [ai, bi](Tape& t, int self) {
    const Tensor& g = t.grad_view(self);
    const Tensor& bv = t.value(bi);
    const Tensor& yv = t.value(self);
    if (t.requires_grad(ai)) {
      Tensor& ga = t.grad(ai);
      for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] / bv[i];
    }
    if (t.requires_grad(bi)) {
      Tensor& gb = t.grad(bi);
      for (std::size_t i = 0; i < g.size(); ++i) gb[i] -= g[i] * yv[i] / bv[i];
    }
  });
}

Var add_bias(const Var& x, const Var& b) {
  Tape& tape = tape_of(x);
  const Tensor& xv = x.value();
  const Tensor& bv = b.value();
  if (xv.dim() != 2 || bv.dim() != 1 || bv.size() != static_cast<std::size_t>(xv.cols())) {
    shape_fail("add_bias", xv.shape(), bv.shape());
  }
  Tensor out = xv;
  const int r = xv.rows(), c = xv.cols();
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) out.at(i, j) += bv[j];
  const int xi = x.id(), bi = b.id();
  return tape.record("add_bias", std::move(out), {x, b}, [xi, bi, r, c](Tape& t, int self) {
    const Tensor& g = t.grad_view(self);
    if (t.requires_grad(xi)) t.grad(xi).add_(g);
    if (t.requires_grad(bi)) {
      Tensor& gb = t.grad(bi);
      for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) gb[j] += g.at(i, j);
    }
  });
}

Var scale(const Var& x, Real s) {
  return unary("scale", x, [s](Real v) { return s * v; }, [s](Real, Real) { return s; });
}

Var add_scalar(const Var& x, Real s) {
  return unary("add_scalar", x, [s](Real v) { return v + s; }, [](Real, Real) { return Real(1); });
}

Var square(const Var& x) {
  return unary("square", x, [](Real v) { return v * v; }, [](Real v, Real) { return 2 * v; });
}

Var exp(const Var& x) {
  return unary("exp", x, [](Real v) { return std::exp(v); }, [](Real, Real y) { return y; });
}

Var log(const Var& x) {
  return unary("log", x, [](Real v) { return std::log(v); }, [](Real v, Real) { return 1 / v; });
}

Var softplus(const Var& x) {
  return unary(
      "softplus", x,
      [](Real v) { return std::max(v, Real(0)) + std::log1p(std::exp(-std::abs(v))); },
      [](Real v, Real) {
        // sigmoid(v), split by sign to avoid overflow
        if (v >= 0) return 1 / (1 + std::exp(-v));
        const Real e = std::exp(v);
        return e / (1 + e);
      });
}

Var gelu(const Var& x) {
  constexpr Real inv_sqrt2 = Real(0.70710678118654752440);
  constexpr Real inv_sqrt_2pi = Real(0.39894228040143267794);
  return unary(
      "gelu", x, [](Real v) { return Real(0.5) * v * (1 + std::erf(v * inv_sqrt2)); },
      [](Real v, Real) {
        const Real cdf = Real(0.5) * (1 + std::erf(v * inv_sqrt2));
        const Real pdf = inv_sqrt_2pi * std::exp(Real(-0.5) * v * v);
        return cdf + v * pdf;
      });
}

Var softmax_rows(const Var& x) {
  Tape& tape = tape_of(x);
  const Tensor& xv = x.value();
  require_matrix("softmax_rows", xv);
  const int r = xv.rows(), c = xv.cols();
  Tensor out(xv.shape());
  for (int i = 0; i < r; ++i) {
    Real mx = -std::numeric_limits<Real>::infinity();
    for (int j = 0; j < c; ++j) mx = std::max(mx, xv.at(i, j));
    if (!std::isfinite(mx)) {
      throw NumericalError("softmax_rows: row " + std::to_string(i) + " has no finite entry");
    }
    double total = 0.0;
    for (int j = 0; j < c; ++j) {
      const Real v = xv.at(i, j);
      const Real e = std::isinf(v) ? Real(0) : std::exp(v - mx);
      out.at(i, j) = e;
      total += e;
    }
    const Real inv = Real(1.0 / total);
    for (int j = 0; j < c; ++j) out.at(i, j) *= inv;
  }
  const int xi = x.id();
  return tape.record("softmax_rows", std::move(out), {x}, [xi, r, c](Tape& t, int self) {
    const Tensor& g = t.grad_view(self);
    const Tensor& y = t.value(self);
    Tensor& gx = t.grad(xi);
    for (int i = 0; i < r; ++i) {
      double dot = 0.0;
      for (int j = 0; j < c; ++j) dot += double(g.at(i, j)) * y.at(i, j);
      for (int j = 0; j < c; ++j) gx.at(i, j) += y.at(i, j) * (g.at(i, j) - Real(dot));
    }
  });
}

Var mask_fill(const Var& x, std::span<const std::uint8_t> allowed) {
  Tape& tape = tape_of(x);
  const Tensor& xv = x.value();
  if (allowed.size() != xv.size()) {
    throw DimensionError("mask_fill: mask has " + std::to_string(allowed.size()) +
                         " entries for tensor " + shape_str(xv.shape()));
  }
  Tensor out = xv;
  std::vector<std::uint8_t> keep(allowed.begin(), allowed.end());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!keep[i]) out[i] = -std::numeric_limits<Real>::infinity();
  }
  const int xi = x.id();
  return tape.record(
      "mask_fill", std::move(out), {x},
      [xi, keep = std::move(keep)](Tape& t, int self) {
        const Tensor& g = t.grad_view(self);
        Tensor& gx = t.grad(xi);
        for (std::size_t i = 0; i < g.size(); ++i)
          if (keep[i]) gx[i] += g[i];
      },
      /*allow_neg_inf=*/true);
}

Var layer_norm(const Var& x, const Var& gamma, const Var& beta, Real eps) {
  Tape& tape = tape_of(x);
  const Tensor& xv = x.value();
  const int d = xv.cols();
  if (xv.dim() < 1 || gamma.value().size() != static_cast<std::size_t>(d) ||
      beta.value().size() != static_cast<std::size_t>(d)) {
    shape_fail("layer_norm", xv.shape(), gamma.shape());
  }
  const int rows = static_cast<int>(xv.size() / d);
  const Tensor& gv = gamma.value();
  const Tensor& bv = beta.value();
  Tensor out(xv.shape());
  // Normalized activations and inverse std per row, kept for backward.
  Tensor xhat(xv.shape());
  std::vector<Real> inv_std(rows);
  for (int i = 0; i < rows; ++i) {
    const Real* row = xv.ptr() + static_cast<std::size_t>(i) * d;
    double m = 0.0;
    for (int j = 0; j < d; ++j) m += row[j];
    m /= d;
    double var = 0.0;
    for (int j = 0; j < d; ++j) var += (row[j] - m) * (row[j] - m);
    var /= d;
    const Real is = Real(1.0 / std::sqrt(var + eps));
    inv_std[i] = is;
    for (int j = 0; j < d; ++j) {
      const Real h = Real(row[j] - m) * is;
      xhat[static_cast<std::size_t>(i) * d + j] = h;
      out[static_cast<std::size_t>(i) * d + j] = gv[j] * h + bv[j];
    }
  }
  const int xi = x.id(), gi = gamma.id(), bi = beta.id();
  return tape.record(
      "layer_norm", std::move(out), {x, gamma, beta},
      [xi, gi, bi, rows, d, xhat = std::move(xhat), inv_std = std::move(inv_std)](Tape& t,
                                                                                  int self) {
        const Tensor& g = t.grad_view(self);
        const Tensor& gv = t.value(gi);
        if (t.requires_grad(gi)) {
          Tensor& gg = t.grad(gi);
          for (int i = 0; i < rows; ++i)
            for (int j = 0; j < d; ++j) {
              const std::size_t k = static_cast<std::size_t>(i) * d + j;
              gg[j] += g[k] * xhat[k];
            }
        }
        if (t.requires_grad(bi)) {
          Tensor& gb = t.grad(bi);
          for (int i = 0; i < rows; ++i)
            for (int j = 0; j < d; ++j) gb[j] += g[static_cast<std::size_t>(i) * d + j];
        }
        if (t.requires_grad(xi)) {
          Tensor& gx = t.grad(xi);
          for (int i = 0; i < rows; ++i) {
            const std::size_t base = static_cast<std::size_t>(i) * d;
            double mean_dh = 0.0, mean_dh_h = 0.0;
            for (int j = 0; j < d; ++j) {
              const double dh = double(g[base + j]) * gv[j];
              mean_dh += dh;
              mean_dh_h += dh * xhat[base + j];
            }
            mean_dh /= d;
            mean_dh_h /= d;
            for (int j = 0; j < d; ++j) {
              const double dh = double(g[base + j]) * gv[j];
              gx[base + j] += Real(inv_std[i] * (dh - mean_dh - xhat[base + j] * mean_dh_h));
            }
          }
        }
      });
}

Var reshape(const Var& x, Shape shape) {
  Tape& tape = tape_of(x);
  Tensor out = x.value().reshaped(std::move(shape));
  const int xi = x.id();
  return tape.record("reshape", std::move(out), {x}, [xi](Tape& t, int self) {
    const Tensor& g = t.grad_view(self);
    Tensor& gx = t.grad(xi);
    for (std::size_t i = 0; i < g.size(); ++i) gx[i] += g[i];
  });
}

Var slice_cols(const Var& x, int c0, int c1) {
  Tape& tape = tape_of(x);
  const Tensor& xv = x.value();
  require_matrix("slice_cols", xv);
  if (c0 < 0 || c1 > xv.cols() || c0 >= c1) {
    throw DimensionError("slice_cols: bad range [" + std::to_string(c0) + "," +
                         std::to_string(c1) + ") for " + shape_str(xv.shape()));
  }
  const int r = xv.rows(), w = c1 - c0;
  Tensor out({r, w});
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < w; ++j) out.at(i, j) = xv.at(i, c0 + j);
  const int xi = x.id();
  return tape.record("slice_cols", std::move(out), {x}, [xi, r, w, c0](Tape& t, int self) {
    const Tensor& g = t.grad_view(self);
    Tensor& gx = t.grad(xi);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < w; ++j) gx.at(i, c0 + j) += g.at(i, j);
  });
}

Var concat_cols(const std::vector<Var>& parts) {
  if (parts.empty()) throw DimensionError("concat_cols: no inputs");
  Tape& tape = tape_of(parts.front());
  const int r = parts.front().value().rows();
  int total = 0;
  std::vector<int> ids, offsets;
  for (const Var& p : parts) {
    const Tensor& v = p.value();
    require_matrix("concat_cols", v);
    if (v.rows() != r) shape_fail("concat_cols", parts.front().shape(), v.shape());
    ids.push_back(p.id());
    offsets.push_back(total);
    total += v.cols();
  }
  Tensor out({r, total});
  for (std::size_t k = 0; k < parts.size(); ++k) {
    const Tensor& v = parts[k].value();
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < v.cols(); ++j) out.at(i, offsets[k] + j) = v.at(i, j);
  }
  return tape.record("concat_cols", std::move(out), std::span<const Var>(parts),
                           [ids, offsets, r](Tape& t, int self) {
                             const Tensor& g = t.grad_view(self);
                             for (std::size_t k = 0; k < ids.size(); ++k) {
                               if (!t.requires_grad(ids[k])) continue;
                               Tensor& gp = t.grad(ids[k]);
                               const int w = gp.cols();
                               for (int i = 0; i < r; ++i)
                                 for (int j = 0; j < w; ++j) gp.at(i, j) += g.at(i, offsets[k] + j);
                             }
                           });
}

Var sum(const Var& x) {
  Tape& tape = tape_of(x);
  double s = 0.0;
  for (Real v : x.value().data()) s += v;
  const int xi = x.id();
  return tape.record("sum", Tensor::scalar(Real(s)), {x}, [xi](Tape& t, int self) {
    const Real g = t.grad_view(self)[0];
    Tensor& gx = t.grad(xi);
    for (std::size_t i = 0; i < gx.size(); ++i) gx[i] += g;
  });
}

Var mean(const Var& x) {
  return scale(sum(x), Real(1.0 / static_cast<double>(x.value().size())));
}

Var dropout(const Var& x, double rate, Rng& rng) {
  if (rate <= 0.0) return x;
  if (rate >= 1.0) throw ContractError("dropout rate must be < 1");
  const Real keep_scale = Real(1.0 / (1.0 - rate));
  Tensor mask(x.shape());
  for (std::size_t i = 0; i < mask.size(); ++i) {
    mask[i] = rng.uniform() < rate ? Real(0) : keep_scale;
  }
  return mul(x, tape_of(x).constant(std::move(mask)));
}

}  // namespace LTP_PRECISION_NS
}  // namespace ltp::num
