#ifndef KIRCHLIP_WINDOW_FN_HPP
#define KIRCHLIP_WINDOW_FN_HPP

#include <map>
#include <utility>
#include <vector>

#include "kirchlip/poly.hpp"
#include "kirchlip/sets.hpp"

namespace kirchlip::lip {

// Integer-valued function as a value table over domain /\ [1, window].
struct WindowFunction {
  sets::SetExpression domain;
  Int window;
  std::map<Int, Int> values;

  WindowFunction(sets::SetExpression dom, Int win, std::map<Int, Int> vals)
      : domain(std::move(dom)),
        window(std::move(win)),
        values(std::move(vals)) {
    auto pts = sets::enumerate_window(domain, window);
    require(pts.size() == values.size(),
            "window function: value count does not match the window");
    for (const Int& x : pts)
      require(values.count(x) == 1, "window function: missing value");
  }

  static WindowFunction from_table(
      sets::SetExpression dom, Int win,
      const std::vector<std::pair<Int, Int>>& rows) {
    std::map<Int, Int> vals(rows.begin(), rows.end());
    require(vals.size() == rows.size(), "window function: duplicate point");
    return WindowFunction(std::move(dom), std::move(win), std::move(vals));
  }

  static WindowFunction from_poly(sets::SetExpression dom, Int win,
                                  const IntPoly& p) {
    std::map<Int, Int> vals;
    for (const Int& x : sets::enumerate_window(dom, win)) vals[x] = p.eval(x);
    return WindowFunction(std::move(dom), std::move(win), std::move(vals));
  }

  const Int& at(const Int& x) const {
    auto it = values.find(x);
    require(it != values.end(), "window function: point outside the table");
    return it->second;
  }

  bool has(const Int& x) const { return values.count(x) == 1; }

  std::vector<Int> points() const {
    std::vector<Int> ps;
    ps.reserve(values.size());
    for (const auto& kv : values) ps.push_back(kv.first);
    return ps;
  }

  std::vector<std::pair<Int, Int>> table() const {
    return {values.begin(), values.end()};
  }

  // Value table over sub /\ [1, window]; every point must be covered.
  WindowFunction restricted(const sets::SetExpression& sub) const {
    std::map<Int, Int> vals;
    for (const Int& x : sets::enumerate_window(sub, window)) vals[x] = at(x);
    return WindowFunction(sub, window, std::move(vals));
  }
};

}  // namespace kirchlip::lip

#endif
