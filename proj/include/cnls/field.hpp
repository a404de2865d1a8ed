#ifndef CNLS_FIELD_HPP_
#define CNLS_FIELD_HPP_

#include <functional>
#include <vector>

#include "cnls/errors.hpp"
#include "cnls/grid.hpp"
#include "cnls/types.hpp"

namespace cnls {

/**
 * An m-component complex field sampled on a shared grid.
 *
 * Component arrays are flattened row-major for Cartesian grids and indexed
 * by node for radial grids.
 */
template <class Grid>
struct Field {
  Grid grid;
  std::vector<ArrayXc> comps;

  Field() = default;
  Field(Grid g, int m) : grid(std::move(g)) {
    comps.assign(m, ArrayXc::Zero(grid.size()));
  }

  int components() const { return static_cast<int>(comps.size()); }
};

using BoxField = Field<CartesianGrid>;
using RadialField = Field<RadialGrid>;

template <class Grid>
bool all_finite(const Field<Grid>& u) {
  for (const auto& c : u.comps)
    if (!c.allFinite()) return false;
  return true;
}

/// Throws PoisonedState when any sample is NaN or Inf.
template <class Grid>
void require_finite(const Field<Grid>& u, const char* where) {
  if (!all_finite(u))
    throw PoisonedState(std::string("non-finite sample detected in ") + where);
}

/// Samples an analytic function x -> C on every node of a Cartesian grid.
BoxField sample_box(const CartesianGrid& grid, int m,
                    const std::function<Complex(int component, const Real* x)>& f);

/// Samples an analytic radial function r -> C on every node.
RadialField sample_radial(const RadialGrid& grid, int m,
                          const std::function<Complex(int component, Real r)>& f);

}  // namespace cnls

#endif  // CNLS_FIELD_HPP_
