#include "cnls/scaling.hpp"

#include <cmath>

#include "cnls/errors.hpp"
#include "cnls/interp.hpp"

namespace cnls {

namespace {

struct LawFactors {
  Real amplitude;  // multiplies sample values
  Real dilation;   // argument factor: v(x) = amplitude * u(dilation * x)
};

LawFactors law_factors(const ScalingLaw& law, int dim) {
  switch (law.kind) {
    case ScalingLaw::Kind::Amplitude:
      if (!(law.lambda > 0)) throw DegenerateField("amplitude law requires lambda > 0");
      return {law.lambda, 1.0};
    case ScalingLaw::Kind::MassPreserving:
      if (!(law.lambda > 0))
        throw DegenerateField("mass-preserving law requires lambda > 0");
      return {std::pow(law.lambda, 0.5 * dim), law.lambda};
    case ScalingLaw::Kind::Exponential:
      return {std::exp(law.ab.alpha * law.lambda),
              std::exp(-law.ab.beta * law.lambda)};
  }
  throw DegenerateField("unknown scaling law");
}

// Relative mass carried by the outermost shell of the resampled field.
Real boundary_mass_fraction(const BoxField& u) {
  const int n = u.grid.n;
  const int shell = 2;
  Real tail = 0.0, total = 0.0;
  const Eigen::Index count = u.grid.size();
  for (const auto& c : u.comps) {
    for (Eigen::Index idx = 0; idx < count; ++idx) {
      Eigen::Index rest = idx;
      bool near = false;
      for (int a = 0; a < u.grid.dim; ++a) {
        const int node = static_cast<int>(rest % n);
        rest /= n;
        if (node < shell || node >= n - shell) {
          near = true;
          break;
        }
      }
      const Real d = std::norm(c[idx]);
      total += d;
      if (near) tail += d;
    }
  }
  return total > 0 ? tail / total : 0.0;
}

Real boundary_mass_fraction(const RadialField& u) {
  const Eigen::Index n = u.grid.n_r;
  const Eigen::Index shell = std::max<Eigen::Index>(2, n / 512);
  Real tail = 0.0, total = 0.0;
  for (const auto& c : u.comps) {
    const ArrayXr d = c.abs2() * u.grid.w;
    total += d.sum();
    tail += d.tail(shell).sum();
  }
  return total > 0 ? tail / total : 0.0;
}

}  // namespace

template <>
BoxField rescale(const BoxField& u, const ScalingLaw& law, Real tail_tol) {
  require_finite(u, "rescale");
  const LawFactors f = law_factors(law, u.grid.dim);
  if (law.kind == ScalingLaw::Kind::Amplitude || f.dilation == 1.0) {
    BoxField out = u;
    for (auto& c : out.comps) c *= f.amplitude;
    return out;
  }
  BoxField out(u.grid, u.components());
  const Eigen::Index total = u.grid.size();
  Real x[8], y[8];
  for (int j = 0; j < u.components(); ++j) {
    BoxInterpolant interp(u.grid, u.comps[j]);
    for (Eigen::Index idx = 0; idx < total; ++idx) {
      u.grid.node_coords(idx, x);
      for (int a = 0; a < u.grid.dim; ++a) y[a] = f.dilation * x[a];
      out.comps[j][idx] = f.amplitude * interp(y);
    }
  }
  if (boundary_mass_fraction(out) > tail_tol)
    throw SupportOverflow("dilated profile not negligible at the box boundary");
  return out;
}

template <>
RadialField rescale(const RadialField& u, const ScalingLaw& law, Real tail_tol) {
  require_finite(u, "rescale");
  const LawFactors f = law_factors(law, u.grid.dim);
  if (law.kind == ScalingLaw::Kind::Amplitude || f.dilation == 1.0) {
    RadialField out = u;
    for (auto& c : out.comps) c *= f.amplitude;
    return out;
  }
  RadialField out(u.grid, u.components());
  for (int j = 0; j < u.components(); ++j) {
    RadialInterpolant interp(u.grid, u.comps[j]);
    for (Eigen::Index i = 0; i < u.grid.n_r; ++i)
      out.comps[j][i] = f.amplitude * interp(f.dilation * u.grid.r[i]);
  }
  if (boundary_mass_fraction(out) > tail_tol)
    throw SupportOverflow("dilated profile not negligible at r = R");
  return out;
}

Real nehari_root_dilation(const FunctionalReport& r) {
  const Real g = r.grad.sum();
  const Real ap = r.weighted_interaction;
  if (!(g > 0.0) || !(ap > 0.0))
    throw DegenerateField("nehari_root_dilation requires positive gradient and interaction");
  const Real p = r.p;
  const Real expo = r.dim * (p - 1.0) - 2.0;
  return std::pow((2.0 * g / r.dim) / ((1.0 - 1.0 / p) * ap), 1.0 / expo);
}

Real nehari_root_amplitude(const FunctionalReport& r, const AlphaBeta& ab) {
  const Real a = ab.alpha, b = ab.beta;
  const int N = r.dim;
  const Real p = r.p;
  const Real quad = 0.5 * ((2.0 * a + (N - 2) * b) * r.grad.sum() +
                           (2.0 * a + N * b) * r.mass.sum());
  const Real inter = (2.0 * p * a + N * b) / (2.0 * p) * r.weighted_interaction;
  if (!(quad > 0.0) || !(inter > 0.0))
    throw DegenerateField("nehari_root_amplitude requires positive quadratic and interaction parts");
  return std::pow(quad / inter, 1.0 / (2.0 * p - 2.0));
}

namespace {

template <class Fn>
Real bisect_root(Fn value, Real lo, Real hi) {
  Real flo = value(lo);
  for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
    const Real mid = 0.5 * (lo + hi);
    const Real fm = value(mid);
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

Real nehari_root_dilation_bisect(const FunctionalReport& r) {
  const Real g = r.grad.sum();
  if (!(g > 0.0) || !(r.weighted_interaction > 0.0))
    throw DegenerateField("degenerate field in bisection root");
  Real lo = 1e-6, hi = 1.0;
  while (sum_q_under_dilation(r, hi) > 0 && hi < 1e6) hi *= 2.0;
  return bisect_root([&](Real l) { return sum_q_under_dilation(r, l); }, lo, hi);
}

Real nehari_root_amplitude_bisect(const FunctionalReport& r, const AlphaBeta& ab) {
  auto value = [&](Real t) {
    const Real a = ab.alpha, b = ab.beta;
    const int N = r.dim;
    const Real p = r.p;
    const Real quad = 0.5 * ((2.0 * a + (N - 2) * b) * r.grad.sum() +
                             (2.0 * a + N * b) * r.mass.sum());
    const Real inter = (2.0 * p * a + N * b) / (2.0 * p) * r.weighted_interaction;
    return t * t * quad - std::pow(t, 2.0 * p) * inter;
  };
  Real hi = 1.0;
  while (value(hi) > 0 && hi < 1e6) hi *= 2.0;
  return bisect_root(value, 1e-6, hi);
}

}  // namespace cnls
