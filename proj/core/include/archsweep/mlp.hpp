#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "archsweep/archspace.hpp"

namespace archsweep {

struct TrainConfig {
  int epochs = 300;
  double learning_rate = 0.05;
  std::uint64_t seed = 0;
};

void validate(const TrainConfig& cfg);

// Row-major feature matrix, one row per sample.
struct Batch {
  int dim = 0;
  std::vector<double> x;  // size() * dim entries
  std::vector<double> y;

  int size() const noexcept { return static_cast<int>(y.size()); }
  std::span<const double> row(int i) const noexcept {
    return {x.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(dim),
            static_cast<std::size_t>(dim)};
  }
};

// Weight matrices are row-major [fan_out x fan_in]; layer l maps
// layer_dims[l] -> layer_dims[l+1]. Hidden activations are logistic
// sigmoids, the output layer is linear with a single unit.
struct Network {
  std::vector<int> layer_dims;               // [input, hidden..., 1]
  std::vector<std::vector<double>> weights;  // one matrix per layer
  std::vector<std::vector<double>> biases;   // one vector per layer
};

// Weights uniform on [-1/sqrt(fan_in), +1/sqrt(fan_in)], drawn layer by
// layer in row-major order from splitmix64(seed); biases start at 0 and
// consume no draws.
Network init(const ArchSpec& spec, int input_dim, std::uint64_t seed);

double forward(const Network& net, std::span<const double> x);

struct Gradients {
  std::vector<std::vector<double>> weights;
  std::vector<std::vector<double>> biases;
};

// Gradient of the half mean squared error over the batch.
Gradients gradient(const Network& net, const Batch& batch);

struct TrainResult {
  Network net;
  // Training MSE measured at the start of each epoch, before its update.
  std::vector<double> loss_history;
};

// Full-batch gradient descent. Throws DivergedTraining on non-finite loss
// or parameters.
TrainResult train(Network net, const Batch& train_set, const TrainConfig& cfg);

struct EvalMetrics {
  double mae_pct = 0.0;  // mean absolute error, percentage points of return
  double sse = 0.0;      // sum of squared errors
};

EvalMetrics evaluate(const Network& net, const Batch& test_set);

// Flat dump in layer order, weights row-major then biases, one value per
// line. For cross-implementation diffing.
std::string parameters_csv(const Network& net);

}  // namespace archsweep
