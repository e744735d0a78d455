#pragma once

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

#include "specfuse/grid.hpp"

namespace specfuse {

/// 3-d complex DFT on row-major data, unnormalized (inverse callers divide by
/// the grid count). in and out must be distinct buffers of count(dims) each.
///
/// Plans are cached per (dims, sign) and created with FFTW_ESTIMATE |
/// FFTW_UNALIGNED: planning never measures, so the chosen algorithm, and with
/// it the exact rounding, depends only on the transform size. That is what
/// makes experiment reruns bit-identical. Planning is serialized behind a
/// mutex; fftw_execute_dft on a cached plan is thread-safe.
inline void fft3(const Dims3& dims, const cdouble* in, cdouble* out, int sign) {
  using Key = std::tuple<int, int, int, int>;
  static std::mutex plan_mutex;
  static std::map<Key, fftw_plan> plans;

  auto* in_raw = reinterpret_cast<fftw_complex*>(const_cast<cdouble*>(in));
  auto* out_raw = reinterpret_cast<fftw_complex*>(out);

  fftw_plan plan;
  {
    std::scoped_lock lock(plan_mutex);
    Key key{dims[0], dims[1], dims[2], sign};
    auto it = plans.find(key);
    if (it == plans.end()) {
      plan = fftw_plan_dft_3d(dims[0], dims[1], dims[2], in_raw, out_raw, sign,
                              FFTW_ESTIMATE | FFTW_UNALIGNED);
      plans.emplace(key, plan);
    } else {
      plan = it->second;
    }
  }
  fftw_execute_dft(plan, in_raw, out_raw);
}

inline void fft3_forward(const Dims3& dims, const cdouble* in, cdouble* out) {
  fft3(dims, in, out, FFTW_FORWARD);
}

/// Normalized inverse: divides by the grid count.
inline void fft3_inverse(const Dims3& dims, const cdouble* in, cdouble* out) {
  fft3(dims, in, out, FFTW_BACKWARD);
  double scale = 1.0 / double(count(dims));
  for (std::int64_t i = 0; i < count(dims); ++i) out[i] *= scale;
}

}  // namespace specfuse
