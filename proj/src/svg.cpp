#include "corrfit/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>

#include "corrfit/errors.hpp"

namespace corrfit {

namespace {

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", x + 0.0);  // +0.0 folds -0 into 0
    return buf;
}

std::string tick_label(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", x + 0.0);
    return buf;
}

struct Extent {
    double xmin = 0.0, xmax = 0.0, ymin = 0.0, ymax = 0.0;
    void add(double x, double y) {
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
        ymin = std::min(ymin, y);
        ymax = std::max(ymax, y);
    }
};

// SVG y axis points down; all emitted y coordinates are negated
std::string pt(double x, double y, const char* xattr, const char* yattr) {
    return std::string(xattr) + "=\"" + num(x) + "\" " + yattr + "=\"" + num(-y) + "\"";
}

void emit_line(std::ostream& out, double x1, double y1, double x2, double y2,
               const std::string& style) {
    out << "<line " << pt(x1, y1, "x1", "y1") << " " << pt(x2, y2, "x2", "y2") << " " << style
        << "/>\n";
}

void emit_arrow(std::ostream& out, double x, double y, double head, const std::string& color) {
    const double len = std::hypot(x, y);
    emit_line(out, 0.0, 0.0, x, y,
              "stroke=\"" + color + "\" stroke-width=\"" + num(head * 0.22) + "\"");
    if (len <= 1e-12) return;
    const double ux = x / len, uy = y / len;
    const double px = -uy, py = ux;
    const double bx = x - head * ux, by = y - head * uy;
    out << "<polygon points=\"" << num(x) << "," << num(-y) << " "
        << num(bx + 0.4 * head * px) << "," << num(-(by + 0.4 * head * py)) << " "
        << num(bx - 0.4 * head * px) << "," << num(-(by - 0.4 * head * py))
        << "\" fill=\"" << color << "\"/>\n";
}

}  // namespace

void render_svg(const BiplotScene& scene, std::ostream& out) {
    Extent ext;
    for (const auto& v : scene.variable_vectors) ext.add(v[0], v[1]);
    if (scene.unit_circle) {
        ext.add(-1.0, -1.0);
        ext.add(1.0, 1.0);
    }
    if (scene.observation_scores)
        for (std::size_t i = 0; i < scene.observation_scores->rows(); ++i)
            ext.add((*scene.observation_scores)(i, 0), (*scene.observation_scores)(i, 1));
    for (const auto& axis : scene.calibrated_axes) {
        const double ox = -axis.direction[1] * axis.offset;
        const double oy = axis.direction[0] * axis.offset;
        for (const auto& [value, point] : axis.ticks) ext.add(point[0] + ox, point[1] + oy);
    }

    const double spanx = std::max(ext.xmax - ext.xmin, 1e-6);
    const double spany = std::max(ext.ymax - ext.ymin, 1e-6);
    const double padx = 0.1 * spanx, pady = 0.1 * spany;
    const double x0 = ext.xmin - padx, x1 = ext.xmax + padx;
    const double y0 = ext.ymin - pady, y1 = ext.ymax + pady;
    const double unit = 0.01 * std::max(spanx, spany);  // stroke/feature scale
    const double font = 6.0 * unit;

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << num(x0) << " " << num(-y1)
        << " " << num(x1 - x0) << " " << num(y1 - y0) << "\" width=\"640\" height=\""
        << num(640.0 * (y1 - y0) / (x1 - x0)) << "\" font-family=\"sans-serif\" font-size=\""
        << num(font) << "\">\n";
    out << "<!-- " << scene.title << " -->\n";

    const std::string thin = "stroke-width=\"" + num(0.12 * unit) + "\"";
    emit_line(out, x0, 0.0, x1, 0.0, "stroke=\"#bbbbbb\" " + thin);
    emit_line(out, 0.0, y0, 0.0, y1, "stroke=\"#bbbbbb\" " + thin);

    if (scene.unit_circle)
        out << "<circle cx=\"0\" cy=\"0\" r=\"1\" fill=\"none\" stroke=\"#999999\" " << thin
            << "/>\n";

    for (const auto& [i, j] : scene.dotted_pairs)
        emit_line(out, scene.variable_vectors[i][0], scene.variable_vectors[i][1],
                  scene.variable_vectors[j][0], scene.variable_vectors[j][1],
                  "stroke=\"#666666\" stroke-dasharray=\"" + num(1.2 * unit) + " " +
                      num(1.2 * unit) + "\" " + thin);

    if (scene.observation_scores)
        for (std::size_t i = 0; i < scene.observation_scores->rows(); ++i)
            out << "<circle " << pt((*scene.observation_scores)(i, 0),
                                    (*scene.observation_scores)(i, 1), "cx", "cy")
                << " r=\"" << num(0.8 * unit) << "\" fill=\"#5577aa\"/>\n";

    for (const auto& axis : scene.calibrated_axes) {
        const double px = -axis.direction[1], py = axis.direction[0];
        const double ox = px * axis.offset, oy = py * axis.offset;
        if (axis.ticks.size() >= 2) {
            const auto& first = axis.ticks.front().second;
            const auto& last = axis.ticks.back().second;
            emit_line(out, first[0] + ox, first[1] + oy, last[0] + ox, last[1] + oy,
                      "stroke=\"#333333\" " + thin);
        }
        for (const auto& [value, point] : axis.ticks) {
            emit_line(out, point[0] + ox - px * unit, point[1] + oy - py * unit,
                      point[0] + ox + px * unit, point[1] + oy + py * unit,
                      "stroke=\"#333333\" " + thin);
            out << "<text " << pt(point[0] + ox + 2.5 * px * unit, point[1] + oy + 2.5 * py * unit,
                                  "x", "y")
                << " text-anchor=\"middle\">" << tick_label(value) << "</text>\n";
        }
        // perpendicular foot of the plot origin on the shifted scale marks
        // the value delta
        emit_line(out, 0.0, 0.0, ox, oy,
                  "stroke=\"#cc2222\" stroke-dasharray=\"" + num(0.8 * unit) + " " +
                      num(0.8 * unit) + "\" " + thin);
        out << "<circle " << pt(ox, oy, "cx", "cy") << " r=\"" << num(0.9 * unit)
            << "\" fill=\"#cc2222\"/>\n";
    }

    for (std::size_t i = 0; i < scene.variable_vectors.size(); ++i) {
        const auto& v = scene.variable_vectors[i];
        if (scene.points_only) {
            out << "<circle " << pt(v[0], v[1], "cx", "cy") << " r=\"" << num(1.1 * unit)
                << "\" fill=\"#222222\"/>\n";
        } else {
            emit_arrow(out, v[0], v[1], 2.2 * unit, "#222222");
        }
        const double len = std::hypot(v[0], v[1]);
        const double lx = len > 1e-12 ? v[0] + 3.5 * unit * v[0] / len : v[0] + 3.5 * unit;
        const double ly = len > 1e-12 ? v[1] + 3.5 * unit * v[1] / len : v[1];
        out << "<text " << pt(lx, ly, "x", "y") << " text-anchor=\"middle\">"
            << (i < scene.labels.size() ? scene.labels[i] : std::to_string(i + 1))
            << "</text>\n";
    }

    out << "</svg>\n";
}

void render_svg(const BiplotScene& scene, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw validation_error("cannot write " + path);
    render_svg(scene, out);
}

}  // namespace corrfit
