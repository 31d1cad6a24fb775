#pragma once

// Umbrella header for the RIS TDD link simulator.

#include "rissim/channel.hpp"
#include "rissim/circlefit.hpp"
#include "rissim/errors.hpp"
#include "rissim/experiments.hpp"
#include "rissim/geometry.hpp"
#include "rissim/harmonics.hpp"
#include "rissim/io.hpp"
#include "rissim/panel.hpp"
#include "rissim/pattern.hpp"
#include "rissim/reflection.hpp"
#include "rissim/schedule.hpp"
#include "rissim/spectrum.hpp"
#include "rissim/tdd.hpp"
#include "rissim/types.hpp"
