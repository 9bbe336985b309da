#pragma once

#include <dfm/numeric.hpp>
#include <dfm/frames.hpp>
#include <dfm/symbols.hpp>
#include <dfm/multipliers.hpp>
#include <dfm/secular.hpp>
#include <dfm/spectra.hpp>
#include <dfm/scenarios.hpp>
#include <dfm/io.hpp>
#include <dfm/verify.hpp>
