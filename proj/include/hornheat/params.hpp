// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "hornheat/errors.hpp"

namespace hornheat {

/// Stability index and ambient dimension of the symmetric alpha-stable
/// process (characteristic function e^{-t |xi|^alpha}).
struct ProcessParams {
  int d = 2;
  double alpha = 1.0;

  void validate() const {
    if (d < 2) throw domain_error("ProcessParams: d >= 2 required");
    if (!(alpha > 0.0) || !(alpha < 2.0))
      throw domain_error("ProcessParams: alpha in (0, 2) required");
  }
};

}  // namespace hornheat
