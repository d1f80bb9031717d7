#pragma once

#include <optional>
#include <string>

#include "systolic/convex_body.hpp"
#include "systolic/periodic_solver.hpp"
#include "systolic/polygon_reduce.hpp"

namespace systolic {

/// Minimal SVG canvas in plane coordinates (y up), fixed view box.
class SvgCanvas {
 public:
  SvgCanvas(double half_width, double half_height, int pixels = 640);

  void line(Vec2 a, Vec2 b, const std::string& stroke, double width = 1.0,
            double opacity = 1.0);
  void polygon(const std::vector<Vec2>& pts, const std::string& stroke,
               const std::string& fill = "none", double width = 1.5,
               double opacity = 1.0);
  void circle(Vec2 c, double r_px, const std::string& fill);
  void text(Vec2 at, const std::string& s, int px = 12);

  std::string str() const;
  void save(const std::string& path) const;

  double half_width() const { return hw_; }
  double half_height() const { return hh_; }

 private:
  Vec2 to_px(Vec2 p) const;
  double hw_, hh_;
  int pixels_;
  double scale_;
  std::string body_;
};

/// All integer lines m·x = 1 with m1^2 + m2^2 <= bound, clipped to the view
/// box, with an optional body outline on top.
std::string render_integer_lines(long bound, const ConvexBody* overlay);

/// Number of lines the figure above draws.
long integer_line_count(long bound);

std::string render_body(const ConvexBody& k, const ConvexBody* also = nullptr);
std::string render_trace(const ConvexBody& input, const ReductionTrace& trace);
std::string render_stable_ball(const StableBallEstimate& est);

}  // namespace systolic
