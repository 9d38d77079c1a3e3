#pragma once

#include <vector>

#include "bswap/model.hpp"

namespace bswap {

enum class Shape { flat, gaussian, idle };
enum class Frame { rwa, lab };
/// Which transmons a segment's drive line couples to. `both` is the common
/// line (transmon 2 sees lambda * amplitude); the others are local lines.
enum class Target { both, q1, q2 };

struct PulseSegment {
  Shape shape = Shape::idle;
  double duration = 0.0;  // seconds
  DriveParams drive;
  Frame frame = Frame::rwa;
  Target target = Target::both;
  double sigma = 0.0;  // gaussian only
  double ramp = 0.0;   // flat only: cosine rise/fall time

  static PulseSegment flat(const DriveParams& drv, double duration, double ramp = 10e-9, Frame frame = Frame::rwa);
  /// Duration 4 sigma, truncated at +-2 sigma, offset-subtracted, peak 1.
  static PulseSegment gaussian(const DriveParams& drv, double sigma, Target target = Target::both);
  static PulseSegment idle(double duration);

  /// Envelope in [0, 1] at local time `t` in [0, duration].
  double envelope(double t) const;
  /// Constant-envelope stretch [begin, end) in local time; empty for shaped pulses.
  bool flat_body(double& begin, double& end) const;
  void validate() const;
};

/// Ordered pulse list. All phases refer to t = 0 of the schedule; the
/// propagator is expressed in the frame rotating at `frame_frequency` on both
/// transmons (0 = lab frame, required for lab-frame segments).
struct Schedule {
  std::vector<PulseSegment> segments;
  double frame_frequency = 0.0;

  double duration() const;
  void validate() const;
  Schedule& then(const PulseSegment& s) {
    segments.push_back(s);
    return *this;
  }
  Schedule& then(const Schedule& other);
};

}  // namespace bswap
