#pragma once

// Umbrella header: the whole library in one include.

#include "rotshield/version.hpp"

#include "rotshield/linalg.hpp"
#include "rotshield/transform.hpp"

#include "rotshield/attack.hpp"
#include "rotshield/evaluate.hpp"
#include "rotshield/kmeans.hpp"
#include "rotshield/synthetic.hpp"

#include "rotshield/csv.hpp"
#include "rotshield/io.hpp"
