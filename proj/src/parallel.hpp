#pragma once

#include <cstddef>
#include <cstdint>
#include <exception>

#include <omp.h>

namespace kinship::detail {

// Runs body(i) for i in [0, n) across OpenMP threads. If any call throws,
// the exception from the lowest failing index is rethrown after the loop.
template <typename Body>
void parallel_for(std::size_t n, Body&& body) {
  std::exception_ptr error;
  std::size_t error_at = n;
  const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 8)
  for (std::int64_t i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(kinship_parallel_error)
      {
        if (static_cast<std::size_t>(i) < error_at) {
          error_at = static_cast<std::size_t>(i);
          error = std::current_exception();
        }
      }
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace kinship::detail
