#pragma once

#include <string>
#include <vector>

#include "cshape/spec_file.hpp"

namespace cshape::test {

inline const std::vector<std::string>& example_names() {
  static const std::vector<std::string> names = {"tm1d",      "tm2d",        "table",          "twindragon", "gasket",
                                                 "rocket",    "shooter",     "nonlinear",      "tmxdoubling", "height",
                                                 "nonpolytope", "nonselfsimilar", "minus2"};
  return names;
}

inline std::string example_path(const std::string& name) { return std::string(CSHAPE_EXAMPLES_DIR) + "/" + name + ".sub"; }

inline Substitution example(const std::string& name) { return load_spec(example_path(name)); }

// Extreme points of a planar set by the segment/triangle criterion.
inline std::vector<IVec> planar_extreme_oracle(std::vector<IVec> pts) {
  pts = sorted_unique(pts);
  auto cross = [](const IVec& o, const IVec& a, const IVec& b) {
    return (a(0) - o(0)) * (b(1) - o(1)) - (a(1) - o(1)) * (b(0) - o(0));
  };
  std::vector<IVec> out;
  const std::size_t n = pts.size();
  for (std::size_t i = 0; i < n; ++i) {
    const IVec& p = pts[i];
    bool extreme = true;
    for (std::size_t a = 0; a < n && extreme; ++a) {
      if (a == i) continue;
      for (std::size_t b = a + 1; b < n && extreme; ++b) {
        if (b == i) continue;
        if (cross(p, pts[a], pts[b]) == 0 && (pts[a] - p).dot(pts[b] - p) < 0) extreme = false;
        for (std::size_t e = b + 1; e < n && extreme; ++e) {
          if (e == i || cross(pts[a], pts[b], pts[e]) == 0) continue;
          const Int c1 = cross(pts[a], pts[b], p), c2 = cross(pts[b], pts[e], p), c3 = cross(pts[e], pts[a], p);
          if ((c1 >= 0 && c2 >= 0 && c3 >= 0) || (c1 <= 0 && c2 <= 0 && c3 <= 0)) extreme = false;
        }
      }
    }
    if (extreme) out.push_back(p);
  }
  return out;
}

}  // namespace cshape::test
