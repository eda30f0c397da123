#pragma once

#include <future>
#include <type_traits>
#include <vector>

namespace qtele {

/// Evaluates fn on every input concurrently; results keep the input order.
template <typename In, typename Fn>
auto parallel_map(const std::vector<In>& inputs, Fn fn)
    -> std::vector<std::invoke_result_t<Fn&, const In&>> {
  using Out = std::invoke_result_t<Fn&, const In&>;
  std::vector<std::future<Out>> pending;
  pending.reserve(inputs.size());
  for (const auto& in : inputs) {
    pending.push_back(std::async(std::launch::async, [&fn, &in] { return fn(in); }));
  }
  std::vector<Out> out;
  out.reserve(inputs.size());
  for (auto& f : pending) out.push_back(f.get());
  return out;
}

}  // namespace qtele
