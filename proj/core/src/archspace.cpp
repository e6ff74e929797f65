#include "archsweep/archspace.hpp"

#include <charconv>
#include <cmath>
#include <limits>

#include "archsweep/error.hpp"

namespace archsweep {

void validate_bounds(SpaceBounds bounds) {
  if (bounds.n_max < 1) {
    raise(errc::usage, "n_max must be >= 1, got " + std::to_string(bounds.n_max));
  }
  if (bounds.k_max < 1) {
    raise(errc::usage, "k_max must be >= 1, got " + std::to_string(bounds.k_max));
  }
}

std::uint64_t count_total(SpaceBounds bounds) {
  validate_bounds(bounds);
  const auto n = static_cast<std::uint64_t>(bounds.n_max);
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t total = 0;
  std::uint64_t power = 1;
  for (int i = 1; i <= bounds.k_max; ++i) {
    if (power > kMax / n) {
      raise(errc::bounds_overflow,
            "architecture count exceeds uint64 at k=" + std::to_string(i));
    }
    power *= n;
    if (total > kMax - power) {
      raise(errc::bounds_overflow,
            "architecture count exceeds uint64 at k=" + std::to_string(i));
    }
    total += power;
  }
  return total;
}

void for_each_arch(SpaceBounds bounds,
                   const std::function<void(const ArchSpec&)>& fn) {
  validate_bounds(bounds);
  ArchSpec spec;
  for (int k = 1; k <= bounds.k_max; ++k) {
    spec.widths.assign(static_cast<std::size_t>(k), 1);
    for (;;) {
      fn(spec);
      // Odometer increment from the last layer gives lexicographic order.
      int i = k - 1;
      while (i >= 0 && spec.widths[static_cast<std::size_t>(i)] == bounds.n_max) {
        spec.widths[static_cast<std::size_t>(i)] = 1;
        --i;
      }
      if (i < 0) break;
      ++spec.widths[static_cast<std::size_t>(i)];
    }
  }
}

std::vector<ArchSpec> enumerate_space(SpaceBounds bounds) {
  std::vector<ArchSpec> out;
  out.reserve(count_total(bounds));
  for_each_arch(bounds, [&](const ArchSpec& spec) { out.push_back(spec); });
  return out;
}

int inflections(std::span<const int> widths) noexcept {
  int count = 0;
  const auto n = static_cast<int>(widths.size());
  for (int i = 0; i + 2 < n; ++i) {
    const int d0 = widths[static_cast<std::size_t>(i + 1)] - widths[static_cast<std::size_t>(i)];
    const int d1 = widths[static_cast<std::size_t>(i + 2)] - widths[static_cast<std::size_t>(i + 1)];
    if ((d0 < 0 && d1 > 0) || (d0 > 0 && d1 < 0)) ++count;
  }
  return count;
}

ArchFeatures features(const ArchSpec& spec) {
  if (spec.widths.empty()) {
    raise(errc::empty_input, "architecture has no hidden layers");
  }
  ArchFeatures f;
  f.n_layers = static_cast<int>(spec.widths.size());
  long long sum = 0;
  for (int w : spec.widths) sum += w;
  f.n_neurons = static_cast<int>(sum);
  f.mean_neurons = static_cast<double>(sum) / f.n_layers;
  double ss = 0.0;
  for (int w : spec.widths) {
    const double d = w - f.mean_neurons;
    ss += d * d;
  }
  f.std_neurons = std::sqrt(ss / f.n_layers);
  f.n_inflections = inflections(spec.widths);
  return f;
}

std::string format_label(const ArchSpec& spec) {
  std::string out;
  for (std::size_t i = 0; i < spec.widths.size(); ++i) {
    if (i != 0) out.push_back('.');
    out += std::to_string(spec.widths[i]);
  }
  return out;
}

ArchSpec parse_label(std::string_view label) {
  if (label.empty()) raise(errc::malformed_label, "empty label");
  ArchSpec spec;
  std::size_t pos = 0;
  for (;;) {
    const std::size_t dot = label.find('.', pos);
    const std::string_view token =
        dot == std::string_view::npos ? label.substr(pos) : label.substr(pos, dot - pos);
    // Grammar per width: [1-9][0-9]*
    if (token.empty() || token.front() == '0') {
      raise(errc::malformed_label,
            "bad width \"" + std::string(token) + "\" in \"" + std::string(label) + "\"");
    }
    int value = 0;
    auto res = std::from_chars(token.data(), token.data() + token.size(), value);
    if (res.ec != std::errc() || res.ptr != token.data() + token.size() || value < 1) {
      raise(errc::malformed_label,
            "bad width \"" + std::string(token) + "\" in \"" + std::string(label) + "\"");
    }
    spec.widths.push_back(value);
    if (dot == std::string_view::npos) break;
    pos = dot + 1;
  }
  return spec;
}

}  // namespace archsweep
