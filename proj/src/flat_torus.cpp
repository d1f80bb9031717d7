#include "systolic/flat_torus.hpp"

#include <cmath>
#include <stdexcept>

namespace systolic {

FlatSystole systole_flat(const FlatFinslerTorus& t) {
  const ConvexBody& k = t.unit_ball();
  const double R = k.circumradius();

  double best = gauge_value(k, {1.0, 0.0});
  std::array<long, 2> arg{1, 0};
  const auto consider = [&](long zx, long zy) {
    const double g = gauge_value(k, {static_cast<double>(zx), static_cast<double>(zy)});
    if (g < best) {
      best = g;
      arg = {zx, zy};
    }
  };
  consider(-1, 0);
  consider(0, 1);
  consider(0, -1);

  const long bound = static_cast<long>(std::ceil(R * best)) + 1;
  for (long zx = -bound; zx <= bound; ++zx) {
    for (long zy = -bound; zy <= bound; ++zy) {
      if (zx == 0 && zy == 0) continue;
      if (static_cast<double>(zx * zx + zy * zy) > (R * best) * (R * best) + 1.0) continue;
      consider(zx, zy);
    }
  }
  return {best, arg};
}

double area_bh_flat(const FlatFinslerTorus& t) { return M_PI / area(t.unit_ball()); }

double area_ht_flat(const FlatFinslerTorus& t) { return area(polar(t.unit_ball())) / M_PI; }

double systolic_ratio(const FlatFinslerTorus& t, AreaKind kind) {
  const double a = kind == AreaKind::BH ? area_bh_flat(t) : area_ht_flat(t);
  const double s = systole_flat(t).value;
  return a / (s * s);
}

ConvexBody k_epsilon(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw std::invalid_argument("k_epsilon needs eps in (0,1)");
  }
  const double wing = (1.0 + eps) / (2.0 * eps);
  const double h = (1.0 - eps) / 2.0;
  return ConvexBody{Vec2{0.0, 1.0}, Vec2{wing, h}, Vec2{0.0, -eps}, Vec2{-wing, h}};
}

}  // namespace systolic
