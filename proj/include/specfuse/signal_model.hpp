#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "specfuse/grid.hpp"
#include "specfuse/rng.hpp"

namespace specfuse {

/// Scaling constants of the radar front end. They map physical target
/// parameters to normalized angular frequencies and are hardware dependent;
/// the estimation pipeline itself works purely in frequency space.
struct RadarConstants {
  double c1;               // rad/m, range scaling
  double c2;               // rad/(m/s), velocity scaling
  double c3;               // rad, azimuth scaling
  double antenna_spacing;  // m, spacing inside one ULA
  double ula_distance;     // m, distance between the two ULAs

  RadarConstants(double c1_, double c2_, double c3_, double antenna_spacing_,
                 double ula_distance_)
      : c1(c1_), c2(c2_), c3(c3_), antenna_spacing(antenna_spacing_),
        ula_distance(ula_distance_) {
    if (!(c1 > 0 && c2 > 0 && c3 > 0 && antenna_spacing > 0 && ula_distance > 0))
      throw std::domain_error("RadarConstants: all constants must be strictly positive");
  }

  double range_max() const { return two_pi / c1; }
  double velocity_max() const { return pi / c2; }

  /// Inter-ULA shift ratio M = d / delta_s; integral for the reference setup
  /// but not required to be.
  double ula_shift_ratio() const { return ula_distance / antenna_spacing; }
};

struct TargetParams {
  double range;     // m
  double velocity;  // m/s, radial
  double azimuth;   // rad, in [-pi/2, pi/2]
};

/// Normalized angular frequency vector on the 3-torus; components are
/// canonicalized to [-pi, pi) at construction so the representation is unique.
struct FrequencyVector {
  double theta1, theta2, theta3;

  FrequencyVector() : theta1(0), theta2(0), theta3(0) {}
  FrequencyVector(double t1, double t2, double t3)
      : theta1(wrap_to_pi(t1)), theta2(wrap_to_pi(t2)), theta3(wrap_to_pi(t3)) {}

  double operator[](int axis) const {
    return axis == 0 ? theta1 : (axis == 1 ? theta2 : theta3);
  }
};

/// One physical target: a 3-d complex sinusoid with real amplitude and an
/// initial phase shared by both receiver channels.
struct TargetSpec {
  double amplitude;  // >= 0
  double phase;      // rad
  FrequencyVector theta;
};

/// Complex measurement array over the index lattice [0,N1)x[0,N2)x[0,N3),
/// stacked for the two receiver channels. Channel-major, row-major inside a
/// channel, so each channel is a contiguous block.
struct DataCube {
  Dims3 dims{};
  std::vector<cdouble> values;

  DataCube() = default;
  explicit DataCube(const Dims3& n) : dims(n), values(2 * count(n)) {
    if (n[0] < 1 || n[1] < 1 || n[2] < 1)
      throw std::invalid_argument("DataCube: all dims must be >= 1");
  }

  std::int64_t samples_per_channel() const { return count(dims); }

  cdouble& at(int channel, int t1, int t2, int t3) {
    return values[channel * samples_per_channel() + flat_index(dims, t1, t2, t3)];
  }
  cdouble at(int channel, int t1, int t2, int t3) const {
    return values[channel * samples_per_channel() + flat_index(dims, t1, t2, t3)];
  }

  const cdouble* channel(int c) const { return values.data() + c * samples_per_channel(); }
  cdouble* channel(int c) { return values.data() + c * samples_per_channel(); }
};

/// theta1 = c1*r - pi, theta2 = c2*v, theta3 = c3*sin(alpha), wrapped.
inline FrequencyVector params_to_freq(const TargetParams& p, const RadarConstants& c) {
  if (p.range < 0 || p.range > c.range_max())
    throw std::domain_error("range " + std::to_string(p.range) + " outside [0, " +
                            std::to_string(c.range_max()) + "]");
  if (std::abs(p.velocity) > c.velocity_max())
    throw std::domain_error("velocity " + std::to_string(p.velocity) + " outside [-" +
                            std::to_string(c.velocity_max()) + ", " +
                            std::to_string(c.velocity_max()) + "]");
  if (std::abs(p.azimuth) > pi / 2)
    throw std::domain_error("azimuth " + std::to_string(p.azimuth) +
                            " outside [-pi/2, pi/2]");
  return {c.c1 * p.range - pi, c.c2 * p.velocity, c.c3 * std::sin(p.azimuth)};
}

/// Inverse of params_to_freq on the non-wrapping part of the parameter box.
inline TargetParams freq_to_params(const FrequencyVector& th, const RadarConstants& c) {
  if (std::abs(th.theta3) > c.c3)
    throw std::domain_error("theta3 " + std::to_string(th.theta3) +
                            " exceeds c3; azimuth unrecoverable");
  double s = th.theta3 / c.c3;
  s = std::clamp(s, -1.0, 1.0);
  return {(th.theta1 + pi) / c.c1, th.theta2 / c.c2, std::asin(s)};
}

/// Generate the two-channel measurement cube. Channel 1 superposes the target
/// sinusoids; channel 2 adds the inter-ULA phase shift M*theta3 per target.
/// Noise is circular complex Gaussian with E|w|^2 = noise_std^2, independent
/// across cells and channels. Identical arguments give identical cubes.
inline DataCube synthesize(std::span<const TargetSpec> targets, const Dims3& n,
                           double ula_shift_ratio, double noise_std,
                           std::uint64_t seed) {
  if (noise_std < 0) throw std::invalid_argument("synthesize: noise_std must be >= 0");
  DataCube cube(n);
  for (int channel = 0; channel < 2; ++channel) {
    for_each_index(n, [&](int t1, int t2, int t3) {
      cdouble v = 0;
      for (const TargetSpec& tgt : targets) {
        double phase = tgt.theta.theta1 * t1 + tgt.theta.theta2 * t2 +
                       tgt.theta.theta3 * t3 + tgt.phase;
        if (channel == 1) phase += ula_shift_ratio * tgt.theta.theta3;
        v += std::polar(tgt.amplitude, phase);
      }
      cube.at(channel, t1, t2, t3) = v;
    });
  }
  if (noise_std > 0) {
    Rng rng(seed);
    for (cdouble& v : cube.values) v += rng.complex_gaussian(noise_std);
  }
  return cube;
}

/// Random scene: frequency components and initial phases i.i.d. uniform on
/// [-pi, pi), independent across targets; all amplitudes equal.
inline std::vector<TargetSpec> draw_random_scene(int n_targets, double amplitude,
                                                 std::uint64_t seed) {
  if (n_targets < 1) throw std::invalid_argument("draw_random_scene: n_targets >= 1");
  Rng rng(seed);
  std::vector<TargetSpec> scene;
  scene.reserve(n_targets);
  for (int i = 0; i < n_targets; ++i) {
    double t1 = rng.angle(), t2 = rng.angle(), t3 = rng.angle();
    double phase = rng.angle();
    scene.push_back({amplitude, phase, FrequencyVector(t1, t2, t3)});
  }
  return scene;
}

}  // namespace specfuse
