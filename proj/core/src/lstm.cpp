#include "retrainer/nn/lstm.hpp"

#include <string>

#include "retrainer/errors.hpp"

namespace retrainer::nn {

LstmCell::LstmCell(int in, int hidden, Activation act)
    : wi(hidden, in + hidden),
      wf(hidden, in + hidden),
      wo(hidden, in + hidden),
      wg(hidden, in + hidden),
      bi(hidden, 0.0),
      bf(hidden, 0.0),
      bo(hidden, 0.0),
      bg(hidden, 0.0),
      input_size(in),
      hidden_size(hidden),
      cell_act(act) {}

void LstmCell::init(Rng& rng) {
  const int fan_in = input_size + hidden_size;
  glorot_init(wi, fan_in, hidden_size, rng);
  glorot_init(wf, fan_in, hidden_size, rng);
  glorot_init(wo, fan_in, hidden_size, rng);
  glorot_init(wg, fan_in, hidden_size, rng);
  // Forget-gate bias at 1 keeps early gradients flowing.
  for (auto& v : bf) v = 1.0;
}

Vector LstmCell::step(std::span<const double> input, LstmState& state, LstmStepCache* cache) const {
  if (static_cast<int>(input.size()) != input_size) {
    throw ShapeError("lstm step: input length " + std::to_string(input.size()) +
                     " does not match cell input size " + std::to_string(input_size));
  }
  if (static_cast<int>(state.h.size()) != hidden_size ||
      static_cast<int>(state.c.size()) != hidden_size) {
    throw ShapeError("lstm step: state length does not match hidden size");
  }

  Vector xh(input_size + hidden_size);
  for (int k = 0; k < input_size; ++k) xh[k] = input[k];
  for (int k = 0; k < hidden_size; ++k) xh[input_size + k] = state.h[k];

  Vector i(hidden_size), f(hidden_size), o(hidden_size), g(hidden_size);
  matvec(wi, xh, i);
  matvec(wf, xh, f);
  matvec(wo, xh, o);
  matvec(wg, xh, g);
  for (int k = 0; k < hidden_size; ++k) {
    i[k] = activate(Activation::Sigmoid, i[k] + bi[k]);
    f[k] = activate(Activation::Sigmoid, f[k] + bf[k]);
    o[k] = activate(Activation::Sigmoid, o[k] + bo[k]);
    g[k] = activate(cell_act, g[k] + bg[k]);
  }

  Vector c_new(hidden_size), c_act(hidden_size), h_new(hidden_size);
  for (int k = 0; k < hidden_size; ++k) {
    c_new[k] = f[k] * state.c[k] + i[k] * g[k];
    c_act[k] = activate(cell_act, c_new[k]);
    h_new[k] = o[k] * c_act[k];
  }

  if (cache) {
    cache->xh = xh;
    cache->i = i;
    cache->f = f;
    cache->o = o;
    cache->g = g;
    cache->c_prev = state.c;
    cache->c_new = c_new;
    cache->c_act = c_act;
  }

  state.c = std::move(c_new);
  state.h = h_new;
  return h_new;
}

Vector LstmCell::backward_step(const LstmStepCache& cache, std::span<const double> dh,
                               Vector& dc, Vector& dh_prev, LstmGrad& g) const {
  Vector dpre_i(hidden_size), dpre_f(hidden_size), dpre_o(hidden_size), dpre_g(hidden_size);
  Vector dc_prev(hidden_size);

  for (int k = 0; k < hidden_size; ++k) {
    const double dct = dc[k] + dh[k] * cache.o[k] * activate_grad_from_output(cell_act, cache.c_act[k]);
    dpre_o[k] = dh[k] * cache.c_act[k] * activate_grad_from_output(Activation::Sigmoid, cache.o[k]);
    dpre_i[k] = dct * cache.g[k] * activate_grad_from_output(Activation::Sigmoid, cache.i[k]);
    dpre_f[k] = dct * cache.c_prev[k] * activate_grad_from_output(Activation::Sigmoid, cache.f[k]);
    dpre_g[k] = dct * cache.i[k] * activate_grad_from_output(cell_act, cache.g[k]);
    dc_prev[k] = dct * cache.f[k];
  }

  outer_add(g.dwi, dpre_i, cache.xh);
  outer_add(g.dwf, dpre_f, cache.xh);
  outer_add(g.dwo, dpre_o, cache.xh);
  outer_add(g.dwg, dpre_g, cache.xh);
  axpy(1.0, dpre_i, g.dbi);
  axpy(1.0, dpre_f, g.dbf);
  axpy(1.0, dpre_o, g.dbo);
  axpy(1.0, dpre_g, g.dbg);

  Vector dxh(input_size + hidden_size, 0.0);
  matvec_transposed_add(wi, dpre_i, dxh);
  matvec_transposed_add(wf, dpre_f, dxh);
  matvec_transposed_add(wo, dpre_o, dxh);
  matvec_transposed_add(wg, dpre_g, dxh);

  Vector dx(input_size);
  for (int k = 0; k < input_size; ++k) dx[k] = dxh[k];
  dh_prev.assign(hidden_size, 0.0);
  for (int k = 0; k < hidden_size; ++k) dh_prev[k] = dxh[input_size + k];
  dc = std::move(dc_prev);
  return dx;
}

LstmGrad LstmCell::make_grad() const {
  LstmGrad g;
  g.dwi = Matrix(hidden_size, input_size + hidden_size);
  g.dwf = Matrix(hidden_size, input_size + hidden_size);
  g.dwo = Matrix(hidden_size, input_size + hidden_size);
  g.dwg = Matrix(hidden_size, input_size + hidden_size);
  g.dbi.assign(hidden_size, 0.0);
  g.dbf.assign(hidden_size, 0.0);
  g.dbo.assign(hidden_size, 0.0);
  g.dbg.assign(hidden_size, 0.0);
  return g;
}

ParamRefs LstmCell::params() {
  return {std::span<double>(wi.a), std::span<double>(wf.a), std::span<double>(wo.a),
          std::span<double>(wg.a), std::span<double>(bi),   std::span<double>(bf),
          std::span<double>(bo),   std::span<double>(bg)};
}

ParamRefs LstmCell::grad_refs(LstmGrad& g) const {
  return {std::span<double>(g.dwi.a), std::span<double>(g.dwf.a), std::span<double>(g.dwo.a),
          std::span<double>(g.dwg.a), std::span<double>(g.dbi),   std::span<double>(g.dbf),
          std::span<double>(g.dbo),   std::span<double>(g.dbg)};
}

}  // namespace retrainer::nn
