#include "systolic/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace systolic {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

SvgCanvas::SvgCanvas(double half_width, double half_height, int pixels)
    : hw_(half_width), hh_(half_height), pixels_(pixels) {
  scale_ = pixels_ / (2.0 * std::max(hw_, hh_));
}

Vec2 SvgCanvas::to_px(Vec2 p) const {
  return {(p.x + hw_) * scale_, (hh_ - p.y) * scale_};
}

void SvgCanvas::line(Vec2 a, Vec2 b, const std::string& stroke, double width,
                     double opacity) {
  const Vec2 pa = to_px(a);
  const Vec2 pb = to_px(b);
  body_ += "<line x1=\"" + fmt(pa.x) + "\" y1=\"" + fmt(pa.y) + "\" x2=\"" + fmt(pb.x) +
           "\" y2=\"" + fmt(pb.y) + "\" stroke=\"" + stroke + "\" stroke-width=\"" +
           fmt(width) + "\" stroke-opacity=\"" + fmt(opacity) + "\"/>\n";
}

void SvgCanvas::polygon(const std::vector<Vec2>& pts, const std::string& stroke,
                        const std::string& fill, double width, double opacity) {
  body_ += "<polygon points=\"";
  for (const Vec2 p : pts) {
    const Vec2 q = to_px(p);
    body_ += fmt(q.x) + "," + fmt(q.y) + " ";
  }
  body_ += "\" stroke=\"" + stroke + "\" fill=\"" + fill + "\" stroke-width=\"" +
           fmt(width) + "\" stroke-opacity=\"" + fmt(opacity) + "\"/>\n";
}

void SvgCanvas::circle(Vec2 c, double r_px, const std::string& fill) {
  const Vec2 p = to_px(c);
  body_ += "<circle cx=\"" + fmt(p.x) + "\" cy=\"" + fmt(p.y) + "\" r=\"" + fmt(r_px) +
           "\" fill=\"" + fill + "\"/>\n";
}

void SvgCanvas::text(Vec2 at, const std::string& s, int px) {
  const Vec2 p = to_px(at);
  body_ += "<text x=\"" + fmt(p.x) + "\" y=\"" + fmt(p.y) + "\" font-size=\"" +
           std::to_string(px) + "\">" + s + "</text>\n";
}

std::string SvgCanvas::str() const {
  const int w = static_cast<int>(2.0 * hw_ * scale_);
  const int h = static_cast<int>(2.0 * hh_ * scale_);
  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
                    std::to_string(w) + "\" height=\"" + std::to_string(h) +
                    "\" viewBox=\"0 0 " + std::to_string(w) + " " + std::to_string(h) +
                    "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += body_;
  out += "</svg>\n";
  return out;
}

void SvgCanvas::save(const std::string& path) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  f << str();
}

long integer_line_count(long bound) {
  long count = 0;
  const long r = static_cast<long>(std::floor(std::sqrt(static_cast<double>(bound))));
  for (long m1 = -r; m1 <= r; ++m1) {
    for (long m2 = -r; m2 <= r; ++m2) {
      if (m1 == 0 && m2 == 0) continue;
      if (m1 * m1 + m2 * m2 <= bound) ++count;
    }
  }
  return count;
}

std::string render_integer_lines(long bound, const ConvexBody* overlay) {
  double half = 2.2;
  if (overlay) half = std::max(half, 1.2 * overlay->circumradius());
  SvgCanvas canvas(half, half);

  const long r = static_cast<long>(std::floor(std::sqrt(static_cast<double>(bound))));
  for (long m1 = -r; m1 <= r; ++m1) {
    for (long m2 = -r; m2 <= r; ++m2) {
      if (m1 == 0 && m2 == 0) continue;
      if (m1 * m1 + m2 * m2 > bound) continue;
      // the line {m·x = 1}: closest point m/|m|^2, direction perp(m)
      const Vec2 m{static_cast<double>(m1), static_cast<double>(m2)};
      const Vec2 p0 = m / norm_sq(m);
      const Vec2 d = perp(m) / norm(m);
      const double reach = 2.0 * half * std::sqrt(2.0);
      canvas.line(p0 - reach * d, p0 + reach * d, "#888", 0.6, 0.8);
    }
  }
  canvas.line({-half, 0}, {half, 0}, "#000", 0.8);
  canvas.line({0, -half}, {0, half}, "#000", 0.8);
  if (overlay) canvas.polygon(overlay->vertices(), "red", "none", 2.0);
  return canvas.str();
}

std::string render_body(const ConvexBody& k, const ConvexBody* also) {
  double half = 1.2 * k.circumradius();
  if (also) half = std::max(half, 1.2 * also->circumradius());
  SvgCanvas canvas(half, half);
  canvas.line({-half, 0}, {half, 0}, "#bbb", 0.8);
  canvas.line({0, -half}, {0, half}, "#bbb", 0.8);
  canvas.polygon(k.vertices(), "steelblue", "none", 2.0);
  if (also) canvas.polygon(also->vertices(), "darkorange", "none", 2.0);
  return canvas.str();
}

std::string render_trace(const ConvexBody& input, const ReductionTrace& trace) {
  double half = 1.2 * input.circumradius();
  for (const auto& s : trace.steps) half = std::max(half, 1.2 * s.body.circumradius());
  SvgCanvas canvas(half, half);
  canvas.line({-half, 0}, {half, 0}, "#bbb", 0.8);
  canvas.line({0, -half}, {0, half}, "#bbb", 0.8);
  canvas.polygon(input.vertices(), "steelblue", "none", 1.5, 0.9);
  const std::size_t n = trace.steps.size();
  for (std::size_t i = 0; i < n; ++i) {
    const bool last = i + 1 == n;
    canvas.polygon(trace.steps[i].body.vertices(), last ? "red" : "#777", "none",
                   last ? 2.0 : 1.0, last ? 1.0 : 0.35 + 0.4 * (i + 1.0) / n);
  }
  return canvas.str();
}

std::string render_stable_ball(const StableBallEstimate& est) {
  const double half = 1.3 * est.ball.circumradius();
  SvgCanvas canvas(half, half);
  canvas.line({-half, 0}, {half, 0}, "#bbb", 0.8);
  canvas.line({0, -half}, {0, half}, "#bbb", 0.8);
  canvas.polygon(est.ball.vertices(), "steelblue", "none", 2.0);
  for (std::size_t i = 0; i < est.directions.size(); ++i) {
    const Vec2 z{static_cast<double>(est.directions[i][0]),
                 static_cast<double>(est.directions[i][1])};
    canvas.circle(z / est.values[i].value, 3.0, "crimson");
  }
  return canvas.str();
}

}  // namespace systolic
