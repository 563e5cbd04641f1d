#pragma once

#include <utility>
#include <vector>

#include "lipschitz/graph.hpp"
#include "lipschitz/heights.hpp"

namespace testing {

using namespace lipschitz;

inline FiniteGraph path(int n) {
  std::vector<Edge> e;
  for (int i = 0; i + 1 < n; ++i) e.push_back({i, i + 1});
  return FiniteGraph(n, e);
}

inline FiniteGraph cycle(int n) {
  std::vector<Edge> e;
  for (int i = 0; i < n; ++i) e.push_back({i, (i + 1) % n});
  return FiniteGraph(n, e);
}

inline HeightField hf(std::vector<int> values) { return HeightField(std::move(values)); }

inline Rational q(long a, long b = 1) {
  Rational r(a, b);
  r.canonicalize();
  return r;
}

}  // namespace testing
