#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "hedgecone/model.hpp"

namespace hedgecone {

// Worker count: HEDGECONE_THREADS when set to a positive integer, else the hardware concurrency.
inline std::size_t thread_cap() {
  if (const char* env = std::getenv("HEDGECONE_THREADS")) {
    try {
      long v = std::stol(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
  }
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

template <class F>
void parallel_for(std::size_t n, F&& fn) {
  std::size_t workers = std::min(thread_cap(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next = n;
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t k = 0; k + 1 < workers; ++k) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

// Per-node backward induction over the model, one computation per recombination class.
// step(i, out) may read out[s] for every successor s of i.
template <class T, class Step>
std::vector<T> backward_induction(const Model& m, Step&& step) {
  std::vector<T> out(m.size());
  for (int t = m.horizon(); t >= 0; --t) {
    std::vector<std::size_t> reps;
    for (std::size_t i : m.at_time(t))
      if (m.representative(i) == i) reps.push_back(i);
    parallel_for(reps.size(), [&](std::size_t k) { out[reps[k]] = step(reps[k], static_cast<const std::vector<T>&>(out)); });
    for (std::size_t i : m.at_time(t))
      if (m.representative(i) != i) out[i] = out[m.representative(i)];
  }
  return out;
}

}  // namespace hedgecone
