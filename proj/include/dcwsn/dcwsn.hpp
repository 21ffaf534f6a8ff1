#ifndef DCWSN_DCWSN_HPP
#define DCWSN_DCWSN_HPP

#include "dcwsn/rng.hpp"
#include "dcwsn/geometry.hpp"
#include "dcwsn/schedules.hpp"
#include "dcwsn/radii.hpp"
#include "dcwsn/graph.hpp"
#include "dcwsn/routing.hpp"
#include "dcwsn/power.hpp"
#include "dcwsn/detsched.hpp"
#include "dcwsn/experiments.hpp"

#endif
