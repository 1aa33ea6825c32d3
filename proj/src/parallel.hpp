#pragma once

#include <cstddef>

#include "penning/kernels.hpp"

namespace penning::detail {

// Body must only write to slot i.
template <class Body>
void for_each_index(std::ptrdiff_t n, Exec exec, Body&& body) {
  if (exec == Exec::serial) {
    for (std::ptrdiff_t i = 0; i < n; ++i) body(i);
    return;
  }
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) body(i);
}

}  // namespace penning::detail
