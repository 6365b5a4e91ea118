#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

// Relaxation schedules alpha_n. Every value must lie in (0,1); the divergent
// sum condition (sum alpha_n = infinity) holds automatically for the constant
// and harmonic families. Custom sequences are the caller's responsibility and
// get flagged if their partial sum over the run budget looks too small.

namespace sspvip {

struct ScheduleError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ConstantSchedule {
  double value = 0.9;
};

// alpha_n = 1 / (n + offset), offset >= 2 so alpha_0 < 1
struct HarmonicSchedule {
  double offset = 2.0;
};

struct CustomSchedule {
  std::vector<double> values;  // cycled if shorter than the run
};

using AlphaSchedule = std::variant<ConstantSchedule, HarmonicSchedule, CustomSchedule>;

inline AlphaSchedule make_constant_schedule(double value) {
  if (!(value > 0.0) || !(value < 1.0))
    throw ScheduleError("constant schedule value must lie in (0,1), got " +
                        std::to_string(value));
  return ConstantSchedule{value};
}

inline AlphaSchedule make_harmonic_schedule(double offset) {
  if (!(offset > 1.0) || !std::isfinite(offset))
    throw ScheduleError("harmonic schedule offset must exceed 1, got " +
                        std::to_string(offset));
  return HarmonicSchedule{offset};
}

inline AlphaSchedule make_custom_schedule(std::vector<double> values) {
  if (values.empty()) throw ScheduleError("custom schedule needs at least one value");
  for (double v : values)
    if (!(v > 0.0) || !(v < 1.0))
      throw ScheduleError("custom schedule values must lie in (0,1), got " +
                          std::to_string(v));
  return CustomSchedule{std::move(values)};
}

inline double alpha_at(const AlphaSchedule& s, std::size_t n) {
  if (const auto* c = std::get_if<ConstantSchedule>(&s)) return c->value;
  if (const auto* h = std::get_if<HarmonicSchedule>(&s))
    return 1.0 / (static_cast<double>(n) + h->offset);
  const auto& cu = std::get<CustomSchedule>(s);
  return cu.values[n % cu.values.size()];
}

// Smallest alpha_n over the first `horizon` indices; the certification's
// per-iteration contraction is weakest there.
inline double alpha_min(const AlphaSchedule& s, std::size_t horizon) {
  if (const auto* c = std::get_if<ConstantSchedule>(&s)) return c->value;
  if (const auto* h = std::get_if<HarmonicSchedule>(&s))
    return 1.0 / (static_cast<double>(horizon == 0 ? 0 : horizon - 1) + h->offset);
  const auto& cu = std::get<CustomSchedule>(s);
  double m = 1.0;
  for (double v : cu.values) m = std::min(m, v);
  return m;
}

// Partial sum of the first `count` values. Exact for constant, closed-form-free
// (plain accumulation) otherwise; used only for the custom-schedule warning.
inline double alpha_partial_sum(const AlphaSchedule& s, std::size_t count) {
  if (const auto* c = std::get_if<ConstantSchedule>(&s))
    return c->value * static_cast<double>(count);
  double sum = 0.0;
  for (std::size_t n = 0; n < count; ++n) sum += alpha_at(s, n);
  return sum;
}

// A custom schedule whose partial sum over the run budget stays below 10 has
// no hope of driving the iteration anywhere; surface that before solving.
inline bool custom_schedule_suspicious(const AlphaSchedule& s, std::size_t max_iters) {
  if (!std::holds_alternative<CustomSchedule>(s)) return false;
  return alpha_partial_sum(s, max_iters) < 10.0;
}

}  // namespace sspvip
