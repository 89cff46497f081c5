#pragma once

// Umbrella header.
#include "arraygain/errors.hpp"
#include "arraygain/geometry.hpp"
#include "arraygain/rng.hpp"
#include "arraygain/parallel.hpp"
#include "arraygain/gain_pattern.hpp"
#include "arraygain/gain_stats.hpp"
#include "arraygain/channel.hpp"
#include "arraygain/detectors.hpp"
#include "arraygain/link_budget.hpp"
#include "arraygain/scenario.hpp"
#include "arraygain/results_io.hpp"
