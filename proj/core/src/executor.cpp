// SPDX-License-Identifier: Apache-2.0
#include "uibcost/executor.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace uibcost::exec {

using namespace ir;

namespace {

Tensor zeros(const TensorShape& s) {
  Tensor t;
  t.shape = s;
  t.data.assign(size_t(s.elems()), 0.0f);
  return t;
}

// TF-SAME padding origin for one axis.
int pad_begin(int in, int out, int k, int stride) {
  const int total = std::max((out - 1) * stride + k - in, 0);
  return total / 2;
}

std::mt19937_64 layer_rng(std::uint64_t seed, int layer_index) {
  // distinct stream per layer
  return std::mt19937_64(seed * 0x9e3779b97f4a7c15ULL + 0x632be59bd9b4e019ULL +
                         std::uint64_t(layer_index));
}

BlockWeights::Layer make_conv_layer(std::uint64_t seed, int layer_index,
                                    WeightInit init, size_t weight_count,
                                    int out_c, bool identity_1x1, int in_c) {
  BlockWeights::Layer l;
  l.w.assign(weight_count, 0.0f);
  l.bias.assign(size_t(out_c), 0.0f);
  l.bn_scale.assign(size_t(out_c), 1.0f);
  l.bn_shift.assign(size_t(out_c), 0.0f);
  if (init == WeightInit::SeededUniform) {
    auto rng = layer_rng(seed, layer_index);
    std::uniform_real_distribution<float> wd(-0.05f, 0.05f);
    std::uniform_real_distribution<float> sd(0.8f, 1.2f);
    std::uniform_real_distribution<float> bd(-0.05f, 0.05f);
    for (float& v : l.w) v = wd(rng);
    for (float& v : l.bn_scale) v = sd(rng);
    for (float& v : l.bn_shift) v = bd(rng);
    for (float& v : l.bias) v = bd(rng);
  } else if (init == WeightInit::Identity && identity_1x1) {
    // 1x1 conv with out_c == in_c: w[ci][co] = (ci == co)
    for (int ci = 0; ci < in_c; ++ci)
      if (ci < out_c) l.w[size_t(ci) * out_c + ci] = 1.0f;
  }
  return l;
}

// conv weights layout: [ky][kx][ci][co]; depthwise: [ky][kx][c]
Tensor conv2d_exec(const Tensor& in, const BlockWeights::Layer& l, int k,
                   int stride, int out_c, bool depthwise, bool bn, bool bias,
                   bool relu) {
  const int oh = ceil_div(in.shape.h, stride);
  const int ow = ceil_div(in.shape.w, stride);
  const int ic = in.shape.c;
  const int oc = depthwise ? ic : out_c;
  Tensor out = zeros({oh, ow, oc});
  const int py = pad_begin(in.shape.h, oh, k, stride);
  const int px = pad_begin(in.shape.w, ow, k, stride);
  std::vector<float> acc(static_cast<size_t>(oc), 0.0f);
  for (int oy = 0; oy < oh; ++oy) {
    for (int ox = 0; ox < ow; ++ox) {
      std::fill(acc.begin(), acc.end(), 0.0f);
      for (int ky = 0; ky < k; ++ky) {
        const int iy = oy * stride - py + ky;
        if (iy < 0 || iy >= in.shape.h) continue;
        for (int kx = 0; kx < k; ++kx) {
          const int ix = ox * stride - px + kx;
          if (ix < 0 || ix >= in.shape.w) continue;
          const float* src = &in.data[(size_t(iy) * in.shape.w + ix) * ic];
          if (depthwise) {
            const float* w = &l.w[(size_t(ky) * k + kx) * ic];
            for (int c = 0; c < ic; ++c) acc[size_t(c)] += src[c] * w[c];
          } else {
            const float* wbase = &l.w[((size_t(ky) * k + kx) * ic) * oc];
            for (int ci = 0; ci < ic; ++ci) {
              const float v = src[ci];
              const float* w = wbase + size_t(ci) * oc;
              for (int co = 0; co < oc; ++co) acc[size_t(co)] += v * w[co];
            }
          }
        }
      }
      float* dst = &out.data[(size_t(oy) * ow + ox) * oc];
      for (int co = 0; co < oc; ++co) {
        float v = acc[size_t(co)];
        if (bn) v = v * l.bn_scale[size_t(co)] + l.bn_shift[size_t(co)];
        if (bias) v += l.bias[size_t(co)];
        if (relu) v = std::max(v, 0.0f);
        dst[co] = v;
      }
    }
  }
  return out;
}

// projection weights layout: [ci][co]
void matmul(const float* in, int rows, int ci, const float* w, int co,
            float* out) {
  for (int r = 0; r < rows; ++r) {
    float* dst = out + size_t(r) * co;
    std::fill(dst, dst + co, 0.0f);
    const float* src = in + size_t(r) * ci;
    for (int i = 0; i < ci; ++i) {
      const float v = src[i];
      const float* wr = w + size_t(i) * co;
      for (int j = 0; j < co; ++j) dst[j] += v * wr[j];
    }
  }
}

size_t conv_weight_count(int k, int ci, int co, bool depthwise) {
  return depthwise ? size_t(k) * k * ci : size_t(k) * k * ci * co;
}

}  // namespace

Tensor make_tensor(const TensorShape& shape, float fill) {
  Tensor t;
  t.shape = shape;
  t.data.assign(size_t(shape.elems()), fill);
  return t;
}

Tensor random_tensor(const TensorShape& shape, std::uint64_t seed, float lo,
                     float hi) {
  Tensor t = make_tensor(shape);
  std::mt19937_64 rng(seed ^ 0xa02bdbf7bb3c0a7ULL);
  std::uniform_real_distribution<float> d(lo, hi);
  for (float& v : t.data) v = d(rng);
  return t;
}

BlockWeights make_weights(const BlockSpec& block, int in_c, std::uint64_t seed,
                          WeightInit init) {
  BlockWeights w;
  int li = 0;
  auto conv = [&](int k, int ci, int co, bool depthwise) {
    w.layers.push_back(make_conv_layer(
        seed, li++, init, conv_weight_count(k, ci, co, depthwise), co,
        k == 1 && !depthwise && ci == co, ci));
  };
  if (const auto* c = block.as<Conv2D>()) {
    conv(c->kernel, in_c, c->depthwise ? in_c : c->out_c, c->depthwise);
  } else if (const auto* f = block.as<FusedIB>()) {
    conv(f->kernel, in_c, f->expanded_c, false);
    conv(1, f->expanded_c, f->out_c, false);
  } else if (const auto* u = block.as<UIB>()) {
    if (u->start_dw) conv(*u->start_dw, in_c, in_c, true);
    conv(1, in_c, u->expanded_c, false);
    if (u->mid_dw) conv(*u->mid_dw, u->expanded_c, u->expanded_c, true);
    conv(1, u->expanded_c, u->out_c, false);
  } else if (const auto* m = block.as<MobileMQA>()) {
    const int heads = m->heads_for(in_c);
    const int d = m->head_dim;
    if (m->kv_stride > 1) conv(3, in_c, in_c, true);  // K/V spatial reduction
    conv(1, in_c, heads * d, false);                  // W^Q
    conv(1, in_c, d, false);                          // W^K
    conv(1, in_c, d, false);                          // W^V
    conv(1, heads * d, in_c, false);                  // W^O
  } else if (const auto* dn = block.as<Dense>()) {
    conv(1, in_c, dn->out_c, false);
  }
  // AvgPool: no weights
  return w;
}

namespace {

Tensor run_mqa(const MobileMQA& m, const Tensor& in, const BlockWeights& w,
               MqaProbe* probe) {
  const int c = in.shape.c;
  const int heads = m.heads_for(c);
  const int d = m.head_dim;
  const int n = in.shape.h * in.shape.w;
  size_t li = 0;

  // K/V path: optional stride-2 3x3 depthwise spatial reduction
  Tensor kv_src = in;
  if (m.kv_stride > 1) {
    kv_src = conv2d_exec(in, w.layers[li++], 3, m.kv_stride, c, true, true,
                         false, false);
  }
  const int mt = kv_src.shape.h * kv_src.shape.w;

  std::vector<float> q(size_t(n) * heads * d);
  std::vector<float> key(size_t(mt) * d);
  std::vector<float> val(size_t(mt) * d);
  matmul(in.data.data(), n, c, w.layers[li].w.data(), heads * d, q.data());
  ++li;
  matmul(kv_src.data.data(), mt, c, w.layers[li].w.data(), d, key.data());
  ++li;
  matmul(kv_src.data.data(), mt, c, w.layers[li].w.data(), d, val.data());
  ++li;

  const double scale = 1.0 / std::sqrt(double(d));
  std::vector<float> context(size_t(n) * heads * d, 0.0f);
  std::vector<double> logits(static_cast<size_t>(mt), 0.0);
  for (int h = 0; h < heads; ++h) {
    for (int i = 0; i < n; ++i) {
      const float* qi = &q[(size_t(i) * heads + h) * d];
      double maxv = -1e300;
      for (int j = 0; j < mt; ++j) {
        double dot = 0;
        const float* kj = &key[size_t(j) * d];
        for (int t = 0; t < d; ++t) dot += double(qi[t]) * kj[t];
        logits[size_t(j)] = dot * scale + (probe ? probe->logit_shift : 0.0);
        maxv = std::max(maxv, logits[size_t(j)]);
      }
      double denom = 0;
      for (int j = 0; j < mt; ++j) {
        logits[size_t(j)] = std::exp(logits[size_t(j)] - maxv);
        denom += logits[size_t(j)];
      }
      double row_sum = 0;
      float* ctx = &context[(size_t(i) * heads + h) * d];
      for (int j = 0; j < mt; ++j) {
        const double a = logits[size_t(j)] / denom;
        row_sum += a;
        const float* vj = &val[size_t(j) * d];
        for (int t = 0; t < d; ++t) ctx[t] += float(a) * vj[t];
      }
      if (probe) probe->row_sums.push_back(row_sum);
    }
  }

  Tensor out = zeros(in.shape);
  matmul(context.data(), n, heads * d, w.layers[li].w.data(), c,
         out.data.data());
  return out;
}

}  // namespace

Tensor run_block(const BlockSpec& block, const Tensor& input,
                 const BlockWeights& weights, MqaProbe* probe) {
  const TensorShape expect = block_output_shape(block, input.shape);
  Tensor out;
  if (const auto* c = block.as<Conv2D>()) {
    const bool bn = c->followed_by_bn;
    out = conv2d_exec(input, weights.layers.at(0), c->kernel, c->stride,
                      c->out_c, c->depthwise, bn, c->bias, true);
  } else if (const auto* f = block.as<FusedIB>()) {
    Tensor t = conv2d_exec(input, weights.layers.at(0), f->kernel, f->stride,
                           f->expanded_c, false, true, false, true);
    out = conv2d_exec(t, weights.layers.at(1), 1, 1, f->out_c, false, true,
                      false, false);  // linear projection
  } else if (const auto* u = block.as<UIB>()) {
    size_t li = 0;
    Tensor t = input;
    const int mid_stride = u->mid_dw ? u->stride : 1;
    const int start_stride = (u->start_dw && !u->mid_dw) ? u->stride : 1;
    const int proj_stride = (!u->start_dw && !u->mid_dw) ? u->stride : 1;
    if (u->start_dw)
      t = conv2d_exec(t, weights.layers.at(li++), *u->start_dw, start_stride,
                      t.shape.c, true, true, false, false);
    t = conv2d_exec(t, weights.layers.at(li++), 1, 1, u->expanded_c, false,
                    true, false, true);
    if (u->mid_dw)
      t = conv2d_exec(t, weights.layers.at(li++), *u->mid_dw, mid_stride,
                      t.shape.c, true, true, false, true);
    out = conv2d_exec(t, weights.layers.at(li++), 1, proj_stride, u->out_c,
                      false, true, false, false);  // linear projection
  } else if (const auto* m = block.as<MobileMQA>()) {
    out = run_mqa(*m, input, weights, probe);
  } else if (block.is<AvgPool>()) {
    out = zeros({1, 1, input.shape.c});
    const double inv = 1.0 / (double(input.shape.h) * input.shape.w);
    std::vector<double> acc(size_t(input.shape.c), 0.0);
    for (int y = 0; y < input.shape.h; ++y)
      for (int x = 0; x < input.shape.w; ++x)
        for (int c = 0; c < input.shape.c; ++c)
          acc[size_t(c)] += input.at(y, x, c);
    for (int c = 0; c < input.shape.c; ++c)
      out.at(0, 0, c) = float(acc[size_t(c)] * inv);
  } else if (const auto* dn = block.as<Dense>()) {
    out = zeros({input.shape.h, input.shape.w, dn->out_c});
    matmul(input.data.data(), input.shape.h * input.shape.w, input.shape.c,
           weights.layers.at(0).w.data(), dn->out_c, out.data.data());
    if (dn->bias)
      for (int p = 0; p < input.shape.h * input.shape.w; ++p)
        for (int c = 0; c < dn->out_c; ++c)
          out.data[size_t(p) * dn->out_c + c] += weights.layers.at(0).bias[size_t(c)];
  }
  if (!(out.shape == expect))
    throw ShapeError("executed shape disagrees with propagated shape");
  return out;
}

Tensor run_network(const NetworkSpec& net, const RunOptions& options) {
  NetworkSpec local = net;
  if (options.downsample_resolution)
    local.input_res = *options.downsample_resolution;
  const auto shapes = propagate_shapes(local);
  Tensor t = random_tensor({local.input_res, local.input_res, local.input_c},
                           options.seed);
  for (size_t i = 0; i < local.blocks.size(); ++i) {
    const BlockWeights w = make_weights(local.blocks[i], shapes[i].in.c,
                                        options.seed + 1000003ULL * (i + 1));
    Tensor out = run_block(local.blocks[i], t, w);
    if (shapes[i].residual) {
      for (size_t k = 0; k < out.data.size(); ++k) out.data[k] += t.data[k];
    }
    t = std::move(out);
  }
  return t;
}

}  // namespace uibcost::exec
