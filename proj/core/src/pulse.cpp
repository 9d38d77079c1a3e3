#include "bswap/pulse.hpp"

#include <cmath>
#include <numbers>

#include "bswap/errors.hpp"

namespace bswap {

PulseSegment PulseSegment::flat(const DriveParams& drv, double duration, double ramp, Frame frame) {
  PulseSegment s;
  s.shape = Shape::flat;
  s.duration = duration;
  s.drive = drv;
  s.frame = frame;
  s.ramp = ramp;
  s.validate();
  return s;
}

PulseSegment PulseSegment::gaussian(const DriveParams& drv, double sigma, Target target) {
  PulseSegment s;
  s.shape = Shape::gaussian;
  s.duration = 4.0 * sigma;
  s.sigma = sigma;
  s.drive = drv;
  s.target = target;
  s.validate();
  return s;
}

PulseSegment PulseSegment::idle(double duration) {
  PulseSegment s;
  s.shape = Shape::idle;
  s.duration = duration;
  s.validate();
  return s;
}

void PulseSegment::validate() const {
  if (!(duration > 0) || !std::isfinite(duration)) throw DomainError("PulseSegment: duration must be positive");
  if (shape == Shape::idle) return;
  drive.validate();
  if (shape == Shape::gaussian && !(sigma > 0)) throw DomainError("PulseSegment: gaussian sigma must be positive");
  if (shape == Shape::flat && (ramp < 0 || 2 * ramp > duration))
    throw DomainError("PulseSegment: ramps must fit inside the pulse");
}

double PulseSegment::envelope(double t) const {
  switch (shape) {
    case Shape::idle:
      return 0.0;
    case Shape::flat: {
      if (t < 0 || t > duration) return 0.0;
      if (ramp <= 0) return 1.0;
      auto rise = [&](double x) { return 0.5 * (1.0 - std::cos(std::numbers::pi * x / ramp)); };
      if (t < ramp) return rise(t);
      if (t > duration - ramp) return rise(duration - t);
      return 1.0;
    }
    case Shape::gaussian: {
      if (t < 0 || t > duration) return 0.0;
      const double c = duration / 2;
      const double edge = std::exp(-0.5 * (c / sigma) * (c / sigma));
      const double g = std::exp(-0.5 * ((t - c) / sigma) * ((t - c) / sigma));
      return (g - edge) / (1.0 - edge);
    }
  }
  return 0.0;
}

bool PulseSegment::flat_body(double& begin, double& end) const {
  if (shape != Shape::flat) return false;
  begin = ramp;
  end = duration - ramp;
  return end > begin;
}

double Schedule::duration() const {
  double t = 0;
  for (const auto& s : segments) t += s.duration;
  return t;
}

void Schedule::validate() const {
  if (segments.empty()) throw DomainError("Schedule: no segments");
  for (const auto& s : segments) {
    s.validate();
    if (s.shape != Shape::idle && s.frame == Frame::lab && frame_frequency != 0.0)
      throw DomainError("Schedule: lab-frame segments need frame_frequency = 0");
  }
  if (!std::isfinite(duration())) throw DomainError("Schedule: total duration is not finite");
}

Schedule& Schedule::then(const Schedule& other) {
  if (other.frame_frequency != frame_frequency) throw DomainError("Schedule::then: frame mismatch");
  segments.insert(segments.end(), other.segments.begin(), other.segments.end());
  return *this;
}

}  // namespace bswap
