#include "lipschitz/quad.hpp"

#include <algorithm>

#include "lipschitz/errors.hpp"

namespace lipschitz {

Quad make_quad(const LatticePatch& patch, const std::array<FaceId, 4>& marked) {
  const auto& loop = patch.loop_faces;
  const int L = static_cast<int>(loop.size());
  if (L == 0) throw InvalidArgument("patch has no bounding loop");
  std::array<int, 4> at{};
  for (int k = 0; k < 4; ++k) {
    auto it = std::find(loop.begin(), loop.end(), marked[k]);
    if (it == loop.end()) throw InvalidArgument("marked face " + std::to_string(marked[k]) + " is not on the loop");
    at[k] = static_cast<int>(it - loop.begin());
  }
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b)
      if (at[a] == at[b]) throw InvalidArgument("marked faces must be distinct");
  auto offset = [&](int k) { return (at[k] - at[0] + L) % L; };
  if (!(offset(1) < offset(2) && offset(2) < offset(3)))
    throw InvalidArgument("marked faces are not in counterclockwise order");

  Quad q;
  q.patch = &patch;
  q.marked = marked;
  // Arc from marked face `from` to `to`, counterclockwise.
  auto arc = [&](int from, int to, Side side) {
    int s = static_cast<int>(side);
    int len = (at[to] - at[from] + L) % L;
    for (int k = 0; k <= len; ++k) q.dual_vertices[s].push_back(loop[(at[from] + k) % L]);
    for (int k = 0; k < len; ++k) {
      int c = (at[from] + k) % L;
      q.crossings[s].push_back(c);
      q.vertices[s].push_back(patch.loop_crossings[c].inner);
    }
    auto& vs = q.vertices[s];
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  };
  arc(0, 1, Side::bottom);
  arc(1, 2, Side::right);
  arc(2, 3, Side::top);
  arc(3, 0, Side::left);
  return q;
}

Quad corner_quad(const LatticePatch& patch) { return make_quad(patch, patch.corner_faces()); }

}  // namespace lipschitz
