#pragma once

#include <algorithm>
#include <cstdlib>
#include <future>
#include <thread>
#include <vector>

namespace halfline {

/// Worker cap: HALFLINE_JOST_THREADS if set, else hardware concurrency.
inline int worker_count() {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw <= 0) hw = 1;
  if (const char* env = std::getenv("HALFLINE_JOST_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) hw = std::min(hw, cap);
  }
  return hw;
}

/// Deterministic parallel map: out[i] = f(in[i]); result order fixed by
/// index regardless of scheduling.
template <class In, class F>
auto parallel_map(const std::vector<In>& in, F&& f)
    -> std::vector<decltype(f(in.front()))> {
  using Out = decltype(f(in.front()));
  std::vector<Out> out(in.size());
  const int workers = std::min<int>(worker_count(), static_cast<int>(in.size()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < in.size(); ++i) out[i] = f(in[i]);
    return out;
  }
  std::vector<std::future<void>> tasks;
  std::atomic<std::size_t> next{0};
  for (int w = 0; w < workers; ++w)
    tasks.push_back(std::async(std::launch::async, [&] {
      for (std::size_t i = next.fetch_add(1); i < in.size();
           i = next.fetch_add(1))
        out[i] = f(in[i]);
    }));
  for (auto& t : tasks) t.get();
  return out;
}

}  // namespace halfline
