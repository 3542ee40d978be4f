// SPDX-License-Identifier: Apache-2.0
#pragma once

// Umbrella header: the full horn-region heat-kernel toolkit.

#include "hornheat/config.hpp"     // IWYU pragma: export
#include "hornheat/envelopes.hpp"  // IWYU pragma: export
#include "hornheat/errors.hpp"     // IWYU pragma: export
#include "hornheat/geometry.hpp"   // IWYU pragma: export
#include "hornheat/harness.hpp"    // IWYU pragma: export
#include "hornheat/numerics.hpp"   // IWYU pragma: export
#include "hornheat/params.hpp"     // IWYU pragma: export
#include "hornheat/reference.hpp"  // IWYU pragma: export
#include "hornheat/rng.hpp"        // IWYU pragma: export
#include "hornheat/simulate.hpp"   // IWYU pragma: export
