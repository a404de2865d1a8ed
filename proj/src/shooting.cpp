#include <algorithm>
#include <cmath>

#include "cnls/errors.hpp"
#include "cnls/ground_state.hpp"

namespace cnls {

namespace {

// Reduced profile equation w'' + (N-1)/r w' - w + |w|^(2p-2) w = 0,
// integrated as the first-order system y = (w, w').
struct ProfileOde {
  int dim;
  Real p;

  void operator()(Real r, const Real* y, Real* dy) const {
    const Real w = y[0];
    const Real nl = std::abs(w) <= 0 ? 0.0 : std::pow(std::abs(w), 2 * p - 2) * w;
    dy[0] = y[1];
    dy[1] = w - nl - (dim - 1) / r * y[1];
  }
};

// Dormand-Prince 5(4) step with embedded error estimate.
struct Dopri5 {
  ProfileOde ode;
  Real abs_tol = 1e-13;
  Real rel_tol = 1e-13;

  // One accepted step from (r, y); h is updated in place.
  void step(Real& r, Real* y, Real& h, Real r_limit) {
    static constexpr Real c2 = 1. / 5, c3 = 3. / 10, c4 = 4. / 5, c5 = 8. / 9;
    static constexpr Real a21 = 1. / 5;
    static constexpr Real a31 = 3. / 40, a32 = 9. / 40;
    static constexpr Real a41 = 44. / 45, a42 = -56. / 15, a43 = 32. / 9;
    static constexpr Real a51 = 19372. / 6561, a52 = -25360. / 2187,
                          a53 = 64448. / 6561, a54 = -212. / 729;
    static constexpr Real a61 = 9017. / 3168, a62 = -355. / 33,
                          a63 = 46732. / 5247, a64 = 49. / 176,
                          a65 = -5103. / 18656;
    static constexpr Real b1 = 35. / 384, b3 = 500. / 1113, b4 = 125. / 192,
                          b5 = -2187. / 6784, b6 = 11. / 84;
    static constexpr Real e1 = 71. / 57600, e3 = -71. / 16695, e4 = 71. / 1920,
                          e5 = -17253. / 339200, e6 = 22. / 525, e7 = -1. / 40;

    Real k1[2], k2[2], k3[2], k4[2], k5[2], k6[2], k7[2], yt[2], y5[2];
    for (;;) {
      const Real hh = std::min(h, r_limit - r);
      ode(r, y, k1);
      for (int i = 0; i < 2; ++i) yt[i] = y[i] + hh * a21 * k1[i];
      ode(r + c2 * hh, yt, k2);
      for (int i = 0; i < 2; ++i) yt[i] = y[i] + hh * (a31 * k1[i] + a32 * k2[i]);
      ode(r + c3 * hh, yt, k3);
      for (int i = 0; i < 2; ++i)
        yt[i] = y[i] + hh * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
      ode(r + c4 * hh, yt, k4);
      for (int i = 0; i < 2; ++i)
        yt[i] = y[i] + hh * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
      ode(r + c5 * hh, yt, k5);
      for (int i = 0; i < 2; ++i)
        yt[i] = y[i] + hh * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] +
                             a64 * k4[i] + a65 * k5[i]);
      ode(r + hh, yt, k6);
      for (int i = 0; i < 2; ++i)
        y5[i] = y[i] + hh * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] +
                             b6 * k6[i]);
      ode(r + hh, y5, k7);

      Real err = 0;
      for (int i = 0; i < 2; ++i) {
        const Real ei = hh * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] +
                              e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        const Real sc = abs_tol + rel_tol * std::max(std::abs(y[i]), std::abs(y5[i]));
        err = std::max(err, std::abs(ei) / sc);
      }
      if (err <= 1.0 || hh <= 1e-12) {
        r += hh;
        y[0] = y5[0];
        y[1] = y5[1];
        const Real grow = err > 0 ? 0.9 * std::pow(err, -0.2) : 5.0;
        h = hh * std::clamp(grow, 0.2, 5.0);
        h = std::min(h, 0.05);
        return;
      }
      h = hh * std::clamp(0.9 * std::pow(err, -0.2), 0.1, 1.0);
    }
  }
};

constexpr Real kStartRadius = 1e-6;
constexpr Real kEventRadiusMax = 80.0;

// Series start from the regular expansion w(r) = s + F(s) r^2 / (2N).
void series_start(int dim, Real p, Real s, Real r0, Real* y) {
  const Real f = s - std::pow(std::abs(s), 2 * p - 2) * s;
  const Real c = f / (2.0 * dim);
  y[0] = s + c * r0 * r0;
  y[1] = 2.0 * c * r0;
}

struct ShotOutcome {
  ShotEvent event;
  Real event_radius;
};

ShotOutcome run_shot(int dim, Real p, Real s, Real r_max) {
  Dopri5 rk{{dim, p}};
  Real r = kStartRadius;
  Real y[2];
  series_start(dim, p, s, r, y);
  Real h = 1e-4;
  while (r < r_max) {
    rk.step(r, y, h, r_max);
    if (y[0] <= 0.0) return {ShotEvent::Crossed, r};
    if (r > 10 * kStartRadius && y[1] >= 0.0) return {ShotEvent::Turned, r};
  }
  return {ShotEvent::Undecided, r_max};
}

}  // namespace

ShotEvent shooting_probe(const SystemParams& params, Real center_value) {
  if (params.m != 1) throw BracketFailure("shooting oracle is single-component");
  // reduce a psi^(2p-1) to unit coefficient
  const Real a = params.coupling(0, 0);
  const Real s = std::pow(a, 1.0 / (2 * params.p - 2)) * center_value;
  return run_shot(params.dim, params.p, s, kEventRadiusMax).event;
}

ShootingResult shooting_oracle(const SystemParams& params, const ArrayXr& radii) {
  if (params.m != 1) throw BracketFailure("shooting oracle is single-component");
  const int dim = params.dim;
  const Real p = params.p;
  const Real a = params.coupling(0, 0);
  const Real amp_back = std::pow(a, -1.0 / (2 * p - 2));

  // Bracket: shots below the critical height turn around while shots above
  // it cross zero (the initial "energy" -s^2/2 + s^(2p)/(2p) must be
  // positive to reach w = 0 against the radial friction).
  Real lo = std::pow(p, 1.0 / (2 * p - 2)) * (1.0 + 1e-9);
  if (run_shot(dim, p, lo, kEventRadiusMax).event != ShotEvent::Turned)
    throw BracketFailure("lower shot did not turn");
  Real hi = lo;
  bool bracketed = false;
  for (int it = 0; it < 200; ++it) {
    hi *= 1.25;
    const ShotOutcome out = run_shot(dim, p, hi, kEventRadiusMax);
    if (out.event == ShotEvent::Crossed) {
      bracketed = true;
      break;
    }
    if (out.event == ShotEvent::Turned) lo = hi;
  }
  if (!bracketed) throw BracketFailure("no crossing shot found");

  while (hi - lo > 1e-12 * hi) {
    const Real mid = 0.5 * (lo + hi);
    const ShotOutcome out = run_shot(dim, p, mid, kEventRadiusMax);
    if (out.event == ShotEvent::Crossed)
      hi = mid;
    else
      lo = mid;
  }
  const Real s = 0.5 * (lo + hi);

  // Final integration, sampling exactly at the requested radii.  The shot
  // is abandoned for the matched asymptotic tail once the profile drops to
  // where the bisection error would start to pollute it.
  ShootingResult result;
  result.center_value = amp_back * s;
  result.bracket_lo = amp_back * lo;
  result.bracket_hi = amp_back * hi;
  result.values = ArrayXr::Zero(radii.size());

  const Real switch_height = 1e-5 * s;
  Dopri5 rk{{dim, p}};
  Real r = kStartRadius;
  Real y[2];
  series_start(dim, p, s, r, y);
  Real h = 1e-4;
  Real tail_c = 0.0;
  Real tail_r = std::numeric_limits<Real>::infinity();
  bool tail = false;

  for (Eigen::Index i = 0; i < radii.size(); ++i) {
    const Real target = radii[i];
    if (!tail) {
      if (target <= kStartRadius) {
        Real ys[2];
        series_start(dim, p, s, std::max(target, Real(0)), ys);
        result.values[i] = amp_back * (target <= 0 ? s : ys[0]);
        continue;
      }
      while (r < target) {
        rk.step(r, y, h, target);
        if (y[0] < switch_height) {
          tail = true;
          tail_r = r;
          tail_c = y[0] * std::pow(r, 0.5 * (dim - 1)) * std::exp(r);
          break;
        }
      }
    }
    result.values[i] = tail && target >= tail_r
                           ? amp_back * tail_c *
                                 std::pow(target, -0.5 * (dim - 1)) *
                                 std::exp(-target)
                           : amp_back * y[0];
  }
  result.tail_radius = tail_r;
  return result;
}

}  // namespace cnls
