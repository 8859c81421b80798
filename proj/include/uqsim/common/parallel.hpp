#pragma once

#include <cstddef>
#include <functional>

namespace uqsim {

/// 0 means "all hardware threads".
[[nodiscard]] unsigned resolve_threads(unsigned requested) noexcept;

/// Calls body(i) exactly once for every i in [0, count) using up to `threads`
/// workers. If any call throws, the exception from the lowest failing index
/// is rethrown after all workers have joined, so failures are reported the
/// same way regardless of scheduling.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace uqsim
