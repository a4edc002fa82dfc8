#pragma once

// Umbrella header: the whole library.

#include "bassnet/analysis.hpp"
#include "bassnet/chebyshev.hpp"
#include "bassnet/closedform.hpp"
#include "bassnet/errors.hpp"
#include "bassnet/exact.hpp"
#include "bassnet/generators.hpp"
#include "bassnet/harness.hpp"
#include "bassnet/io.hpp"
#include "bassnet/montecarlo.hpp"
#include "bassnet/network.hpp"
#include "bassnet/partition.hpp"
#include "bassnet/rng.hpp"
#include "bassnet/version.hpp"
