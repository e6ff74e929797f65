#include "archsweep/mlp.hpp"

#include <algorithm>
#include <cmath>

#include "archsweep/csvio.hpp"
#include "archsweep/error.hpp"
#include "archsweep/rng.hpp"

namespace archsweep {

void validate(const TrainConfig& cfg) {
  if (cfg.epochs < 1) {
    raise(errc::usage, "epochs must be >= 1, got " + std::to_string(cfg.epochs));
  }
  if (!(cfg.learning_rate > 0.0)) {
    raise(errc::usage, "learning_rate must be > 0");
  }
}

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

void check_batch(const Network& net, const Batch& batch) {
  if (batch.size() == 0) raise(errc::empty_input, "empty batch");
  if (batch.dim != net.layer_dims.front()) {
    raise(errc::dimension_mismatch, "batch has dim " + std::to_string(batch.dim) +
                                        ", network expects " +
                                        std::to_string(net.layer_dims.front()));
  }
}

// One full-batch pass: accumulates the gradient of the half mean squared
// error into g (which must be zeroed) and returns the batch MSE.
double accumulate_gradient(const Network& net, const Batch& batch, Gradients& g) {
  const auto layers = static_cast<int>(net.weights.size());
  std::vector<std::vector<double>> act(static_cast<std::size_t>(layers));
  std::vector<std::vector<double>> delta(static_cast<std::size_t>(layers));
  for (int l = 0; l < layers; ++l) {
    const auto width = static_cast<std::size_t>(net.layer_dims[static_cast<std::size_t>(l) + 1]);
    act[static_cast<std::size_t>(l)].resize(width);
    delta[static_cast<std::size_t>(l)].resize(width);
  }

  const double inv_n = 1.0 / batch.size();
  double sq_sum = 0.0;
  for (int i = 0; i < batch.size(); ++i) {
    std::span<const double> prev = batch.row(i);
    for (int l = 0; l < layers; ++l) {
      const int fan_in = net.layer_dims[static_cast<std::size_t>(l)];
      const int fan_out = net.layer_dims[static_cast<std::size_t>(l) + 1];
      const auto& w = net.weights[static_cast<std::size_t>(l)];
      const auto& b = net.biases[static_cast<std::size_t>(l)];
      auto& out = act[static_cast<std::size_t>(l)];
      for (int r = 0; r < fan_out; ++r) {
        double z = b[static_cast<std::size_t>(r)];
        const double* row = w.data() + static_cast<std::size_t>(r) * static_cast<std::size_t>(fan_in);
        for (int c = 0; c < fan_in; ++c) z += row[c] * prev[static_cast<std::size_t>(c)];
        out[static_cast<std::size_t>(r)] = l == layers - 1 ? z : sigmoid(z);
      }
      prev = out;
    }

    const double diff = act[static_cast<std::size_t>(layers) - 1][0] - batch.y[static_cast<std::size_t>(i)];
    sq_sum += diff * diff;
    delta[static_cast<std::size_t>(layers) - 1][0] = diff * inv_n;

    for (int l = layers - 1; l >= 0; --l) {
      const int fan_in = net.layer_dims[static_cast<std::size_t>(l)];
      const int fan_out = net.layer_dims[static_cast<std::size_t>(l) + 1];
      const std::span<const double> input =
          l == 0 ? batch.row(i) : std::span<const double>(act[static_cast<std::size_t>(l) - 1]);
      auto& gw = g.weights[static_cast<std::size_t>(l)];
      auto& gb = g.biases[static_cast<std::size_t>(l)];
      const auto& d = delta[static_cast<std::size_t>(l)];
      for (int r = 0; r < fan_out; ++r) {
        const double dr = d[static_cast<std::size_t>(r)];
        double* grow = gw.data() + static_cast<std::size_t>(r) * static_cast<std::size_t>(fan_in);
        for (int c = 0; c < fan_in; ++c) grow[c] += dr * input[static_cast<std::size_t>(c)];
        gb[static_cast<std::size_t>(r)] += dr;
      }
      if (l > 0) {
        const auto& w = net.weights[static_cast<std::size_t>(l)];
        auto& dprev = delta[static_cast<std::size_t>(l) - 1];
        const auto& aprev = act[static_cast<std::size_t>(l) - 1];
        for (int c = 0; c < fan_in; ++c) {
          double s = 0.0;
          for (int r = 0; r < fan_out; ++r) {
            s += w[static_cast<std::size_t>(r) * static_cast<std::size_t>(fan_in) +
                   static_cast<std::size_t>(c)] *
                 d[static_cast<std::size_t>(r)];
          }
          const double a = aprev[static_cast<std::size_t>(c)];
          dprev[static_cast<std::size_t>(c)] = s * a * (1.0 - a);
        }
      }
    }
  }
  return sq_sum / batch.size();
}

Gradients zeroed_like(const Network& net) {
  Gradients g;
  g.weights.reserve(net.weights.size());
  g.biases.reserve(net.biases.size());
  for (const auto& w : net.weights) g.weights.emplace_back(w.size(), 0.0);
  for (const auto& b : net.biases) g.biases.emplace_back(b.size(), 0.0);
  return g;
}

bool all_finite(const Network& net) {
  for (const auto& w : net.weights) {
    for (double v : w) {
      if (!std::isfinite(v)) return false;
    }
  }
  for (const auto& b : net.biases) {
    for (double v : b) {
      if (!std::isfinite(v)) return false;
    }
  }
  return true;
}

}  // namespace

Network init(const ArchSpec& spec, int input_dim, std::uint64_t seed) {
  if (input_dim < 1) raise(errc::usage, "input_dim must be >= 1");
  if (spec.widths.empty()) raise(errc::empty_input, "architecture has no hidden layers");
  for (int w : spec.widths) {
    if (w < 1) raise(errc::malformed_label, "layer width must be >= 1");
  }

  Network net;
  net.layer_dims.reserve(spec.widths.size() + 2);
  net.layer_dims.push_back(input_dim);
  for (int w : spec.widths) net.layer_dims.push_back(w);
  net.layer_dims.push_back(1);

  SplitMix64 rng(seed);
  const auto layers = net.layer_dims.size() - 1;
  net.weights.resize(layers);
  net.biases.resize(layers);
  for (std::size_t l = 0; l < layers; ++l) {
    const auto fan_in = static_cast<std::size_t>(net.layer_dims[l]);
    const auto fan_out = static_cast<std::size_t>(net.layer_dims[l + 1]);
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    auto& w = net.weights[l];
    w.resize(fan_in * fan_out);
    for (auto& v : w) v = rng.next_uniform(-bound, bound);
    net.biases[l].assign(fan_out, 0.0);
  }
  return net;
}

double forward(const Network& net, std::span<const double> x) {
  if (static_cast<int>(x.size()) != net.layer_dims.front()) {
    raise(errc::dimension_mismatch, "input has dim " + std::to_string(x.size()) +
                                        ", network expects " +
                                        std::to_string(net.layer_dims.front()));
  }
  const auto layers = net.weights.size();
  std::vector<double> buf(x.begin(), x.end());
  std::vector<double> next;
  for (std::size_t l = 0; l < layers; ++l) {
    const auto fan_in = static_cast<std::size_t>(net.layer_dims[l]);
    const auto fan_out = static_cast<std::size_t>(net.layer_dims[l + 1]);
    next.assign(fan_out, 0.0);
    for (std::size_t r = 0; r < fan_out; ++r) {
      double z = net.biases[l][r];
      const double* row = net.weights[l].data() + r * fan_in;
      for (std::size_t c = 0; c < fan_in; ++c) z += row[c] * buf[c];
      next[r] = l == layers - 1 ? z : sigmoid(z);
    }
    buf.swap(next);
  }
  return buf[0];
}

Gradients gradient(const Network& net, const Batch& batch) {
  check_batch(net, batch);
  Gradients g = zeroed_like(net);
  accumulate_gradient(net, batch, g);
  return g;
}

TrainResult train(Network net, const Batch& train_set, const TrainConfig& cfg) {
  validate(cfg);
  check_batch(net, train_set);

  TrainResult result;
  result.loss_history.reserve(static_cast<std::size_t>(cfg.epochs));
  Gradients g = zeroed_like(net);
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (auto& w : g.weights) std::fill(w.begin(), w.end(), 0.0);
    for (auto& b : g.biases) std::fill(b.begin(), b.end(), 0.0);
    const double mse = accumulate_gradient(net, train_set, g);
    if (!std::isfinite(mse)) {
      raise(errc::diverged_training, "non-finite loss at epoch " + std::to_string(epoch));
    }
    result.loss_history.push_back(mse);
    for (std::size_t l = 0; l < net.weights.size(); ++l) {
      auto& w = net.weights[l];
      const auto& gw = g.weights[l];
      for (std::size_t i = 0; i < w.size(); ++i) w[i] -= cfg.learning_rate * gw[i];
      auto& b = net.biases[l];
      const auto& gb = g.biases[l];
      for (std::size_t i = 0; i < b.size(); ++i) b[i] -= cfg.learning_rate * gb[i];
    }
  }
  if (!all_finite(net)) {
    raise(errc::diverged_training, "non-finite parameters after final epoch");
  }
  result.net = std::move(net);
  return result;
}

EvalMetrics evaluate(const Network& net, const Batch& test_set) {
  check_batch(net, test_set);
  double abs_sum = 0.0;
  double sq_sum = 0.0;
  for (int i = 0; i < test_set.size(); ++i) {
    const double diff = forward(net, test_set.row(i)) - test_set.y[static_cast<std::size_t>(i)];
    abs_sum += std::fabs(diff);
    sq_sum += diff * diff;
  }
  EvalMetrics m;
  m.mae_pct = abs_sum / test_set.size() * 100.0;
  m.sse = sq_sum;
  return m;
}

std::string parameters_csv(const Network& net) {
  std::string out;
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    for (double v : net.weights[l]) {
      out += format_double(v);
      out.push_back('\n');
    }
    for (double v : net.biases[l]) {
      out += format_double(v);
      out.push_back('\n');
    }
  }
  return out;
}

}  // namespace archsweep
