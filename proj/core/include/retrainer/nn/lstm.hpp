#pragma once

#include <span>

#include "retrainer/nn/dense.hpp"
#include "retrainer/nn/tensor.hpp"

namespace retrainer::nn {

struct LstmState {
  Vector h;
  Vector c;
};

struct LstmStepCache {
  Vector xh;  // concatenated [input, h_prev]
  Vector i, f, o, g;
  Vector c_prev;
  Vector c_new;
  Vector c_act;  // cell_act(c_new)
};

struct LstmGrad {
  Matrix dwi, dwf, dwo, dwg;
  Vector dbi, dbf, dbo, dbg;
};

// Gated recurrent cell with the standard update:
//   i = sig(Wi [x;h] + bi), f = sig(Wf ...), o = sig(Wo ...), g = act(Wg ...)
//   c' = f*c + i*g,  h' = o * act(c')
// cell_act is tanh by default; the throughput forecaster runs it with relu.
struct LstmCell {
  Matrix wi, wf, wo, wg;  // each hidden x (input + hidden)
  Vector bi, bf, bo, bg;  // hidden
  int input_size = 0;
  int hidden_size = 0;
  Activation cell_act = Activation::Tanh;

  LstmCell() = default;
  LstmCell(int in, int hidden, Activation act = Activation::Tanh);

  void init(Rng& rng);
  LstmState zero_state() const { return {Vector(hidden_size, 0.0), Vector(hidden_size, 0.0)}; }

  // Advances one step; state is updated in place. Throws ShapeError on any
  // size mismatch between input/state and the cell.
  Vector step(std::span<const double> input, LstmState& state, LstmStepCache* cache = nullptr) const;

  // Backward through one step. dh/dc are gradients w.r.t. this step's output
  // hidden and new cell state; returns gradients w.r.t. input, and updates
  // dh_prev/dc_prev for the previous step.
  Vector backward_step(const LstmStepCache& cache, std::span<const double> dh,
                       Vector& dc, Vector& dh_prev, LstmGrad& g) const;

  LstmGrad make_grad() const;
  ParamRefs params();
  ParamRefs grad_refs(LstmGrad& g) const;
};

}  // namespace retrainer::nn
