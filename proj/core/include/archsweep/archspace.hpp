#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace archsweep {

// Search-space bounds: 1..k_max hidden layers, 1..n_max neurons per layer.
struct SpaceBounds {
  int n_max = 6;
  int k_max = 5;
};

// Hidden-layer widths only; input and output layers are implied by the task.
struct ArchSpec {
  std::vector<int> widths;

  friend bool operator==(const ArchSpec&, const ArchSpec&) = default;
};

struct ArchFeatures {
  int n_layers = 0;
  int n_neurons = 0;
  double mean_neurons = 0.0;
  // Population standard deviation over the widths (divide by n_layers).
  double std_neurons = 0.0;
  int n_inflections = 0;

  friend bool operator==(const ArchFeatures&, const ArchFeatures&) = default;
};

void validate_bounds(SpaceBounds bounds);

// Sum of n_max^i for i in 1..k_max, exact; throws BoundsOverflow past uint64.
std::uint64_t count_total(SpaceBounds bounds);

// Every architecture within bounds, lexicographic by (n_layers, widths).
std::vector<ArchSpec> enumerate_space(SpaceBounds bounds);

// Same order as enumerate_space without materializing the population.
void for_each_arch(SpaceBounds bounds,
                   const std::function<void(const ArchSpec&)>& fn);

// Count of adjacent opposite-sign pairs among consecutive width differences.
// Zero differences never participate: a plateau between two opposite-sign
// moves absorbs the reversal.
int inflections(std::span<const int> widths) noexcept;

ArchFeatures features(const ArchSpec& spec);

// "n1.n2...nk" with base-10 widths; parse accepts exactly that grammar.
std::string format_label(const ArchSpec& spec);
ArchSpec parse_label(std::string_view label);

}  // namespace archsweep
