#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace tpds::detail {

// Runs fn(k) for k in [0, count). Work is split into strided lanes, one per
// thread. If any call throws, the exception of the lowest failing k is
// rethrown after all lanes finish, so failures are reported deterministically.
template <typename Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn) {
  std::vector<std::exception_ptr> errors(count);
  const std::size_t lanes = std::clamp<std::size_t>(threads < 1 ? 1 : static_cast<std::size_t>(threads), 1,
                                                    std::max<std::size_t>(count, 1));
  auto lane = [&](std::size_t first) {
    for (std::size_t k = first; k < count; k += lanes) {
      try {
        fn(k);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  if (lanes == 1) {
    lane(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(lanes - 1);
    for (std::size_t t = 1; t < lanes; ++t) pool.emplace_back(lane, t);
    lane(0);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace tpds::detail
