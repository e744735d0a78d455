#pragma once

// Umbrella header: multichannel 3-d spectral estimation, peak-fusion
// frequency estimators, and the Monte Carlo benchmarking harness.

#include "specfuse/boxplot.hpp"
#include "specfuse/covariance.hpp"
#include "specfuse/estimators.hpp"
#include "specfuse/fft.hpp"
#include "specfuse/grid.hpp"
#include "specfuse/harness.hpp"
#include "specfuse/io.hpp"
#include "specfuse/mat2.hpp"
#include "specfuse/mat_field.hpp"
#include "specfuse/rng.hpp"
#include "specfuse/signal_model.hpp"
#include "specfuse/spectrum.hpp"
#include "specfuse/window.hpp"
