/// @file maximin.hpp
/// @brief Umbrella header.
#ifndef MAXIMIN_MAXIMIN_HPP
#define MAXIMIN_MAXIMIN_HPP

#include "maximin/bench.hpp"
#include "maximin/core.hpp"
#include "maximin/instance_io.hpp"
#include "maximin/linalg.hpp"
#include "maximin/oracle.hpp"
#include "maximin/rng.hpp"
#include "maximin/sdp_relaxation.hpp"
#include "maximin/sign_rounding.hpp"

#endif  // MAXIMIN_MAXIMIN_HPP
