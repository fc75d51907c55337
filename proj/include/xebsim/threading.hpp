#ifndef XEBSIM_THREADING_HPP_
#define XEBSIM_THREADING_HPP_

#include <cstddef>
#include <functional>

namespace xebsim {

// Run fn(0..count-1) across `threads` workers (0 = hardware concurrency,
// <= 1 = serial). Workers take indices modulo the worker count, so callers
// must make iterations independent; exceptions are rethrown on the caller.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace xebsim

#endif  // XEBSIM_THREADING_HPP_
