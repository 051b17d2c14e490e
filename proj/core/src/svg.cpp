#include "billiard/svg.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "billiard/scalar.hpp"

namespace billiard {

namespace {

void check_finite(double v) {
    if (!std::isfinite(v)) throw GeometryError("non-finite coordinate in SVG output");
}

std::string esc(const std::string& s) {
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

void SvgScene::bump(double x, double y) {
    check_finite(x);
    check_finite(y);
    if (!any_) {
        minx_ = maxx_ = x;
        miny_ = maxy_ = y;
        any_ = true;
        return;
    }
    minx_ = std::min(minx_, x);
    maxx_ = std::max(maxx_, x);
    miny_ = std::min(miny_, y);
    maxy_ = std::max(maxy_, y);
}

void SvgScene::add_polygon(const std::vector<std::pair<double, double>>& pts,
                           const std::string& stroke, const std::string& fill) {
    for (auto [x, y] : pts) bump(x, y);
    elems_.push_back({"polygon", pts, 0, stroke, fill, "", 1.0});
}

void SvgScene::add_polyline(const std::vector<std::pair<double, double>>& pts,
                            const std::string& stroke, double width) {
    for (auto [x, y] : pts) bump(x, y);
    elems_.push_back({"polyline", pts, 0, stroke, "none", "", width});
}

void SvgScene::add_line(double x1, double y1, double x2, double y2,
                        const std::string& stroke, double width) {
    bump(x1, y1);
    bump(x2, y2);
    elems_.push_back({"line", {{x1, y1}, {x2, y2}}, 0, stroke, "none", "", width});
}

void SvgScene::add_cross(double x, double y, const std::string& stroke) {
    bump(x, y);
    elems_.push_back({"cross", {{x, y}}, 0, stroke, "none", "", 1.0});
}

void SvgScene::add_circle(double x, double y, double r, const std::string& stroke,
                          const std::string& fill) {
    check_finite(r);
    bump(x - r, y - r);
    bump(x + r, y + r);
    elems_.push_back({"circle", {{x, y}}, r, stroke, fill, "", 0.6});
}

void SvgScene::add_label(double x, double y, const std::string& text) {
    bump(x, y);
    elems_.push_back({"text", {{x, y}}, 0, "#444", "none", text, 0});
}

std::string SvgScene::str() const {
    double minx = any_ ? minx_ : 0, maxx = any_ ? maxx_ : 1;
    double miny = any_ ? miny_ : 0, maxy = any_ ? maxy_ : 1;
    double w = std::max(maxx - minx, 1e-9), h = std::max(maxy - miny, 1e-9);
    double margin = 0.05 * std::max(w, h);
    minx -= margin;
    miny -= margin;
    w += 2 * margin;
    h += 2 * margin;
    // y axis flips: screen y = (miny + h) - (y - miny) ... map y -> top + (maxy' - y)
    auto fy = [&](double y) { return 2 * miny + h - (y - 0); };
    double scale = 720.0 / std::max(w, h);
    double stroke_unit = 1.0 / scale;
    double cross_r = 4.0 / scale;

    std::ostringstream out;
    out.precision(12);
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w * scale
        << "\" height=\"" << h * scale << "\" viewBox=\"" << minx << ' ' << miny << ' '
        << w << ' ' << h << "\">\n";
    for (const auto& e : elems_) {
        if (e.kind == "polygon" || e.kind == "polyline") {
            out << "  <" << e.kind << " points=\"";
            for (std::size_t i = 0; i < e.pts.size(); ++i) {
                if (i) out << ' ';
                out << e.pts[i].first << ',' << fy(e.pts[i].second);
            }
            out << "\" fill=\"" << esc(e.fill) << "\" stroke=\"" << esc(e.stroke)
                << "\" stroke-width=\"" << e.width * stroke_unit << "\"/>\n";
        } else if (e.kind == "line") {
            out << "  <line x1=\"" << e.pts[0].first << "\" y1=\"" << fy(e.pts[0].second)
                << "\" x2=\"" << e.pts[1].first << "\" y2=\"" << fy(e.pts[1].second)
                << "\" stroke=\"" << esc(e.stroke) << "\" stroke-width=\""
                << e.width * stroke_unit << "\"/>\n";
        } else if (e.kind == "cross") {
            double x = e.pts[0].first, y = fy(e.pts[0].second), r = cross_r;
            out << "  <path d=\"M " << x - r << ' ' << y - r << " L " << x + r << ' '
                << y + r << " M " << x - r << ' ' << y + r << " L " << x + r << ' '
                << y - r << "\" stroke=\"" << esc(e.stroke) << "\" stroke-width=\""
                << 1.5 * stroke_unit << "\" fill=\"none\"/>\n";
        } else if (e.kind == "circle") {
            out << "  <circle cx=\"" << e.pts[0].first << "\" cy=\"" << fy(e.pts[0].second)
                << "\" r=\"" << e.r << "\" fill=\"" << esc(e.fill) << "\" stroke=\""
                << esc(e.stroke) << "\" stroke-width=\"" << e.width * stroke_unit
                << "\"/>\n";
        } else if (e.kind == "text") {
            out << "  <text x=\"" << e.pts[0].first << "\" y=\"" << fy(e.pts[0].second)
                << "\" font-size=\"" << 12 * stroke_unit << "\" fill=\"" << esc(e.stroke)
                << "\">" << esc(e.text) << "</text>\n";
        }
    }
    out << "</svg>\n";
    return out.str();
}

void SvgScene::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw GeometryError("cannot write SVG file: " + path);
    out << str();
}

}  // namespace billiard
