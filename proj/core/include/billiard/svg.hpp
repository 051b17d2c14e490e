#pragma once

#include <string>
#include <utility>
#include <vector>

namespace billiard {

/// Tiny SVG scene writer in table coordinates (y up; the writer flips the axis
/// for screen output). The viewBox is fitted to the content with a 5% margin.
class SvgScene {
  public:
    void add_polygon(const std::vector<std::pair<double, double>>& pts,
                     const std::string& stroke = "#222", const std::string& fill = "none");
    void add_polyline(const std::vector<std::pair<double, double>>& pts,
                      const std::string& stroke = "#1565c0", double width = 0.6);
    void add_line(double x1, double y1, double x2, double y2,
                  const std::string& stroke = "#1565c0", double width = 0.6);
    /// X-shaped marker; used for singular (vertex) events.
    void add_cross(double x, double y, const std::string& stroke = "#c62828");
    void add_circle(double x, double y, double r, const std::string& stroke = "#2e7d32",
                    const std::string& fill = "none");
    void add_label(double x, double y, const std::string& text);

    std::string str() const;
    /// Throws billiard::GeometryError when the file cannot be written.
    void save(const std::string& path) const;

  private:
    struct Elem {
        std::string kind;  // polygon | polyline | line | circle | text
        std::vector<std::pair<double, double>> pts;
        double r = 0;
        std::string stroke, fill, text;
        double width = 0;
    };
    void bump(double x, double y);
    std::vector<Elem> elems_;
    double minx_ = 0, miny_ = 0, maxx_ = 0, maxy_ = 0;
    bool any_ = false;
};

}  // namespace billiard
