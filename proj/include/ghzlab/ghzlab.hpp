// Convenience umbrella for the whole library.
#pragma once

#include "ghzlab/amplitude_model.hpp"
#include "ghzlab/errors.hpp"
#include "ghzlab/experiment.hpp"
#include "ghzlab/lhv.hpp"
#include "ghzlab/patterns.hpp"
#include "ghzlab/sampling.hpp"
#include "ghzlab/state_vector.hpp"
