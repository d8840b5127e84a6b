// SPDX-License-Identifier: Apache-2.0
#include "hillband/coeffs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace hillband {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void rebuild_starts(PeriodicCoefficients& c) {
  c.segment_starts.clear();
  c.segment_starts.reserve(c.segments.size());
  double acc = 0;
  for (const Segment& seg : c.segments) {
    c.segment_starts.push_back(acc);
    acc += seg.width;
  }
}

}  // namespace

const char* model_kind_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::free_particle: return "free_particle";
    case ModelKind::constant_shift: return "constant_shift";
    case ModelKind::kronig_penney: return "kronig_penney";
    case ModelKind::mathieu: return "mathieu";
    case ModelKind::piecewise_constant: return "piecewise_constant";
  }
  return "unknown";
}

PeriodicCoefficients PeriodicCoefficients::free_particle(double period) {
  PeriodicCoefficients c;
  c.kind = ModelKind::free_particle;
  c.period = period;
  c.segments = {{period, 1.0, 0.0, 1.0}};
  rebuild_starts(c);
  return c;
}

PeriodicCoefficients PeriodicCoefficients::constant_shift(double period, double v0) {
  PeriodicCoefficients c;
  c.kind = ModelKind::constant_shift;
  c.period = period;
  c.v0 = v0;
  c.segments = {{period, 1.0, v0, 1.0}};
  rebuild_starts(c);
  return c;
}

PeriodicCoefficients PeriodicCoefficients::kronig_penney(double period,
                                                         double barrier_height,
                                                         double barrier_width) {
  PeriodicCoefficients c;
  c.kind = ModelKind::kronig_penney;
  c.period = period;
  c.barrier_height = barrier_height;
  c.barrier_width = barrier_width;
  c.segments = {{barrier_width, 1.0, barrier_height, 1.0},
                {period - barrier_width, 1.0, 0.0, 1.0}};
  rebuild_starts(c);
  return c;
}

PeriodicCoefficients PeriodicCoefficients::mathieu(double period, double amplitude) {
  PeriodicCoefficients c;
  c.kind = ModelKind::mathieu;
  c.period = period;
  c.amplitude = amplitude;
  return c;
}

PeriodicCoefficients PeriodicCoefficients::piecewise(double period,
                                                     std::vector<Segment> segs) {
  PeriodicCoefficients c;
  c.kind = ModelKind::piecewise_constant;
  c.period = period;
  c.segments = std::move(segs);
  rebuild_starts(c);
  double smin = std::numeric_limits<double>::infinity();
  for (const Segment& seg : c.segments) smin = std::min(smin, seg.s);
  c.s_min = smin;
  return c;
}

double PeriodicCoefficients::reduce(double x) const {
  double r = std::fmod(x, period);
  if (r < 0) r += period;
  if (r >= period) r = 0;  // guard against r == period after the += above
  return r;
}

CoeffValues PeriodicCoefficients::evaluate(double x) const {
  const double xr = reduce(x);
  if (kind == ModelKind::mathieu) {
    return {1.0, amplitude * std::cos(kTwoPi * xr / period), 1.0};
  }
  // last segment whose start is <= xr
  auto it = std::upper_bound(segment_starts.begin(), segment_starts.end(), xr);
  const auto idx = static_cast<std::size_t>(it - segment_starts.begin()) - 1;
  const Segment& seg = segments[idx];
  return {seg.p, seg.q, seg.s};
}

std::vector<double> PeriodicCoefficients::breakpoints() const {
  std::vector<double> out;
  const std::size_t n = segments.size();
  if (n < 2) return out;
  for (std::size_t i = 0; i < n; ++i) {
    const Segment& prev = segments[(i + n - 1) % n];
    const Segment& cur = segments[i];
    if (prev.p != cur.p || prev.q != cur.q || prev.s != cur.s) {
      out.push_back(segment_starts[i]);
    }
  }
  return out;
}

ValidationReport validate(const PeriodicCoefficients& coeffs) {
  ValidationReport rep;
  rep.p_min = std::numeric_limits<double>::infinity();
  rep.s_min = std::numeric_limits<double>::infinity();

  auto issue = [&rep](std::string field, std::string msg) {
    rep.issues.push_back({std::move(field), std::move(msg)});
  };

  if (!(coeffs.period > 0) || !std::isfinite(coeffs.period)) {
    issue("period", "period must be positive and finite");
    rep.ok = false;
    return rep;
  }

  switch (coeffs.kind) {
    case ModelKind::free_particle:
    case ModelKind::constant_shift:
      if (!std::isfinite(coeffs.v0)) issue("v0", "shift must be finite");
      break;
    case ModelKind::kronig_penney:
      if (!std::isfinite(coeffs.barrier_height))
        issue("barrier_height", "barrier height must be finite");
      if (!(coeffs.barrier_width > 0) || !(coeffs.barrier_width < coeffs.period))
        issue("barrier_width", "barrier width must lie strictly inside (0, period)");
      break;
    case ModelKind::mathieu:
      if (!std::isfinite(coeffs.amplitude))
        issue("amplitude", "amplitude must be finite");
      break;
    case ModelKind::piecewise_constant: {
      if (coeffs.segments.empty()) {
        issue("segments", "segment list is empty");
        break;
      }
      double total = 0;
      for (std::size_t i = 0; i < coeffs.segments.size(); ++i) {
        const Segment& seg = coeffs.segments[i];
        const std::string where = "segments[" + std::to_string(i) + "]";
        if (!(seg.width > 0)) issue(where + ".width", "segment width must be positive");
        if (!(seg.p > 0)) issue(where + ".p", "p vanishes or is negative");
        if (!(seg.s > 0)) issue(where + ".s", "s vanishes or is negative");
        if (!std::isfinite(seg.q)) issue(where + ".q", "q must be finite");
        total += seg.width;
      }
      if (std::abs(total - coeffs.period) > 1e-12 * coeffs.period)
        issue("segments", "segments do not tile the period");
      break;
    }
  }

  if (coeffs.piecewise_exact()) {
    for (const Segment& seg : coeffs.segments) {
      rep.p_min = std::min(rep.p_min, seg.p);
      rep.s_min = std::min(rep.s_min, seg.s);
    }
  } else {
    // dense sample of the smooth profile
    const int n = 4096;
    for (int i = 0; i <= n; ++i) {
      const CoeffValues v = coeffs.evaluate(coeffs.period * i / n);
      rep.p_min = std::min(rep.p_min, v.p);
      rep.s_min = std::min(rep.s_min, v.s);
    }
  }
  if (!(rep.p_min > 0)) issue("p", "p vanishes");
  if (!(rep.s_min > 0)) issue("s", "s is not bounded away from zero");

  rep.ok = rep.issues.empty();
  return rep;
}

}  // namespace hillband
