#pragma once

#include "pbdpowers/core.hpp"
#include "pbdpowers/divergences.hpp"
#include "pbdpowers/errors.hpp"
#include "pbdpowers/estimators.hpp"
#include "pbdpowers/instances.hpp"
#include "pbdpowers/json_io.hpp"
#include "pbdpowers/learner_binomial.hpp"
#include "pbdpowers/learner_newton.hpp"
#include "pbdpowers/learner_separated.hpp"
#include "pbdpowers/oracle.hpp"
#include "pbdpowers/rng.hpp"
