#include "dbrp/svg.hpp"

#include <cstdio>
#include <sstream>

namespace dbrp {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

const char* fill_for(Category c) {
  switch (c) {
    case Category::PrimaryBase: return "#4e79a7";
    case Category::SecondaryBase: return "#59a14f";
    case Category::LowMass: return "#f28e2b";
    case Category::HighMass: return "#e15759";
  }
  return "#999999";
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_svg(const SceneState& s, const std::optional<Plan>& plan, double ppu) {
  const double margin = 20.0;
  const double w = s.table.width * ppu;
  const double h = s.table.height * ppu;
  // Table y grows upward; SVG y grows downward.
  const auto X = [&](double x) { return margin + x * ppu; };
  const auto Y = [&](double y) { return margin + h - y * ppu; };

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << num(w + 2 * margin)
     << "\" height=\"" << num(h + 2 * margin + 20.0) << "\">\n"
     << "<rect class=\"table\" x=\"" << num(margin) << "\" y=\"" << num(margin) << "\" width=\"" << num(w)
     << "\" height=\"" << num(h) << "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"2\"/>\n";

  // Roots first, then stacked objects by depth, so tops are drawn over their bases.
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s.is_root(i)) {
      for (std::size_t k : s.substack(i)) order.push_back(k);
    }
  }
  for (std::size_t idx = 0; idx < order.size(); ++idx) {
    const std::size_t i = order[idx];
    const auto& o = s.object(i);
    int level = 0;
    for (int b = s.base_of[i]; b != kNoBase; b = s.base_of[static_cast<std::size_t>(b)]) ++level;
    const double shrink = 0.18 * level;  // stacked items drawn smaller than their base
    const double ow = o.width * (1.0 - shrink);
    const double od = o.depth * (1.0 - shrink);
    const Point c = s.positions[i];
    os << "<rect class=\"object\" data-id=\"" << escape(o.id) << "\" x=\"" << num(X(c.x - ow / 2)) << "\" y=\""
       << num(Y(c.y + od / 2)) << "\" width=\"" << num(ow * ppu) << "\" height=\"" << num(od * ppu)
       << "\" fill=\"" << fill_for(o.category) << "\" fill-opacity=\"0.8\" stroke=\"#222222\"/>\n";
    os << "<text x=\"" << num(X(c.x)) << "\" y=\"" << num(Y(c.y) + 4) << "\" font-size=\"11\" text-anchor=\"middle\">"
       << escape(o.id) << "</text>\n";
    if (!s.is_root(i)) {
      const auto& base = s.object(static_cast<std::size_t>(s.base_of[i]));
      os << "<g class=\"stack-badge\"><circle cx=\"" << num(X(c.x + ow / 2)) << "\" cy=\"" << num(Y(c.y + od / 2))
         << "\" r=\"7\" fill=\"#ffffff\" stroke=\"#222222\"/><text x=\"" << num(X(c.x + ow / 2)) << "\" y=\""
         << num(Y(c.y + od / 2) + 3) << "\" font-size=\"8\" text-anchor=\"middle\">" << level << "</text><title>"
         << escape(o.id) << " on " << escape(base.id) << "</title></g>\n";
    }
  }

  if (plan) {
    Point manip = s.manipulator;
    for (const Action& a : plan->actions) {
      os << "<polyline class=\"pick-leg\" points=\"" << num(X(manip.x)) << "," << num(Y(manip.y)) << " "
         << num(X(a.pick.x)) << "," << num(Y(a.pick.y))
         << "\" fill=\"none\" stroke=\"#888888\" stroke-dasharray=\"4,3\"/>\n";
      os << "<polyline class=\"place-leg\" points=\"" << num(X(a.pick.x)) << "," << num(Y(a.pick.y)) << " "
         << num(X(a.place.x)) << "," << num(Y(a.place.y)) << "\" fill=\"none\" stroke=\"#d62728\"/>\n";
      manip = a.place;
    }
    os << "<text class=\"cost\" x=\"" << num(margin) << "\" y=\"" << num(h + 2 * margin + 10.0)
       << "\" font-size=\"13\">cost " << num(plan->total_cost) << ", " << plan->actions.size()
       << " actions</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace dbrp
