#pragma once

// Umbrella header for the dense linear-algebra kernel.

#include "rotshield/eig.hpp"
#include "rotshield/matrix.hpp"
#include "rotshield/qr.hpp"
#include "rotshield/rng.hpp"
#include "rotshield/rotation.hpp"
