#pragma once

// Umbrella header for the perturbation (RBT / MRBT) module.

#include "rotshield/dataset.hpp"
#include "rotshield/key.hpp"
#include "rotshield/partition.hpp"
#include "rotshield/perturb.hpp"
