#pragma once

// Umbrella header.

#include "wallfit/errors.hpp"
#include "wallfit/types.hpp"
#include "wallfit/scaling_law.hpp"
#include "wallfit/linear_fit.hpp"
#include "wallfit/fitting.hpp"
#include "wallfit/scaling.hpp"
#include "wallfit/diagnostics.hpp"
#include "wallfit/synth.hpp"
#include "wallfit/profile_io.hpp"
#include "wallfit/pipeline.hpp"
#include "wallfit/report_io.hpp"
