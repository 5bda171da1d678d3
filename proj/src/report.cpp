#include "coinknn/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include <fmt/format.h>

namespace coinknn {

std::string csv_field(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
        return std::string(field);
    }
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    out += '"';
    return out;
}

std::string format_double(double v) { return fmt::format("{}", v); }

CsvWriter::CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvWriter::add_row(std::vector<std::string> row) {
    if (row.size() != header_.size()) {
        throw std::invalid_argument(fmt::format("CSV row has {} fields, header has {}", row.size(), header_.size()));
    }
    rows_.push_back(std::move(row));
}

std::string CsvWriter::str() const {
    std::string out;
    const auto append = [&](const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i > 0) {
                out += ',';
            }
            out += csv_field(fields[i]);
        }
        out += '\n';
    };
    append(header_);
    for (const auto& row : rows_) {
        append(row);
    }
    return out;
}

void CsvWriter::save(const std::filesystem::path& path) const { write_text_file(path, str()); }

void write_text_file(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
    }
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.close();
    if (!out) {
        throw IoError(fmt::format("failed writing '{}'", path.string()));
    }
}

SvgPlot::SvgPlot(std::string title, std::string x_label, std::string y_label)
    : title_(std::move(title)), x_label_(std::move(x_label)), y_label_(std::move(y_label)) {}

void SvgPlot::add_line(std::vector<double> xs, std::vector<double> ys, std::string color, std::string label) {
    series_.push_back({Series::Kind::Line, std::move(xs), std::move(ys), {}, {}, std::move(color), std::move(label), 1.6});
}

void SvgPlot::add_band(std::vector<double> xs, std::vector<double> lo, std::vector<double> hi, std::string color) {
    series_.push_back({Series::Kind::Band, std::move(xs), std::move(lo), std::move(hi), {}, std::move(color), {}, 0.0});
}

void SvgPlot::add_points(std::vector<double> xs, std::vector<double> ys, std::string color, std::string label,
                         double radius) {
    series_.push_back(
        {Series::Kind::Points, std::move(xs), std::move(ys), {}, {}, std::move(color), std::move(label), radius});
}

void SvgPlot::add_path(std::vector<std::array<double, 2>> vertices, std::string color, double width) {
    series_.push_back({Series::Kind::Path, {}, {}, {}, std::move(vertices), std::move(color), {}, width});
}

void SvgPlot::add_bars(std::vector<double> xs, std::vector<double> heights, double bar_width, std::string color,
                       std::string label) {
    series_.push_back({Series::Kind::Bars, std::move(xs), std::move(heights), {}, {}, std::move(color),
                       std::move(label), bar_width});
}

void SvgPlot::add_marker(double x, double y, std::string color, std::string label) {
    series_.push_back({Series::Kind::Marker, {x}, {y}, {}, {}, std::move(color), std::move(label), 6.0});
}

void SvgPlot::set_x_range(double lo, double hi) {
    x_range_ = {lo, hi};
    x_fixed_ = true;
}

void SvgPlot::set_y_range(double lo, double hi) {
    y_range_ = {lo, hi};
    y_fixed_ = true;
}

std::array<double, 4> SvgPlot::bounds() const {
    constexpr double inf = std::numeric_limits<double>::infinity();
    double x0 = inf, x1 = -inf, y0 = inf, y1 = -inf;
    const auto take = [&](double x, double y) {
        if (std::isfinite(x) && std::isfinite(y)) {
            x0 = std::min(x0, x);
            x1 = std::max(x1, x);
            y0 = std::min(y0, y);
            y1 = std::max(y1, y);
        }
    };
    for (const auto& s : series_) {
        for (std::size_t i = 0; i < s.xs.size(); ++i) {
            if (s.kind == Series::Kind::Bars) {
                take(s.xs[i] - s.size / 2, 0.0);
                take(s.xs[i] + s.size / 2, s.ys[i]);
            } else {
                take(s.xs[i], s.ys[i]);
                if (!s.hi.empty()) take(s.xs[i], s.hi[i]);
            }
        }
        for (const auto& p : s.path) take(p[0], p[1]);
    }
    if (x0 > x1) { x0 = 0; x1 = 1; }
    if (y0 > y1) { y0 = 0; y1 = 1; }
    if (x0 == x1) { x0 -= 0.5; x1 += 0.5; }
    if (y0 == y1) { y0 -= 0.5; y1 += 0.5; }
    if (x_fixed_) { x0 = x_range_[0]; x1 = x_range_[1]; }
    if (y_fixed_) { y0 = y_range_[0]; y1 = y_range_[1]; }
    return {x0, x1, y0, y1};
}

namespace {

double nice_step(double span) {
    const double raw = span / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double f = raw / mag;
    return (f < 1.5 ? 1.0 : f < 3.5 ? 2.0 : f < 7.5 ? 5.0 : 10.0) * mag;
}

std::string escape(std::string_view text) {
    std::string out;
    for (char c : text) {
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

std::string SvgPlot::render_body(double width, double height) const {
    const double left = 70, right = 20, top = 36, bottom = 48;
    const double pw = width - left - right;
    const double ph = height - top - bottom;
    const auto [x0, x1, y0, y1] = bounds();
    const auto sx = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
    const auto sy = [&](double y) { return top + ph - (y - y0) / (y1 - y0) * ph; };

    std::string out;
    out += fmt::format("<rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"white\"/>\n", width, height);
    out += fmt::format("<text x=\"{:.1f}\" y=\"22\" font-size=\"15\" text-anchor=\"middle\">{}</text>\n",
                       left + pw / 2, escape(title_));
    out += fmt::format("<defs><clipPath id=\"clip{}\"><rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\"/></clipPath></defs>\n",
                       static_cast<int>(height), left, top, pw, ph);

    // axes and ticks
    out += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#333\"/>\n", left,
                       top, pw, ph);
    const double xs = nice_step(x1 - x0);
    for (double t = std::ceil(x0 / xs) * xs; t <= x1 + 1e-9 * xs; t += xs) {
        out += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"#ddd\"/>\n", sx(t),
                           top, top + ph);
        out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"11\" text-anchor=\"middle\">{:g}</text>\n",
                           sx(t), top + ph + 16, std::abs(t) < 1e-12 * xs ? 0.0 : t);
    }
    const double ys = nice_step(y1 - y0);
    for (double t = std::ceil(y0 / ys) * ys; t <= y1 + 1e-9 * ys; t += ys) {
        out += fmt::format("<line x1=\"{1:.2f}\" y1=\"{0:.2f}\" x2=\"{2:.2f}\" y2=\"{0:.2f}\" stroke=\"#ddd\"/>\n", sy(t),
                           left, left + pw);
        out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"11\" text-anchor=\"end\">{:g}</text>\n",
                           left - 6, sy(t) + 4, std::abs(t) < 1e-12 * ys ? 0.0 : t);
    }
    out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" font-size=\"12\" text-anchor=\"middle\">{}</text>\n",
                       left + pw / 2, height - 10, escape(x_label_));
    out += fmt::format(
        "<text x=\"16\" y=\"{0:.1f}\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 16 {0:.1f})\">{1}</text>\n",
        top + ph / 2, escape(y_label_));

    out += fmt::format("<g clip-path=\"url(#clip{})\">\n", static_cast<int>(height));
    for (const auto& s : series_) {
        switch (s.kind) {
            case Series::Kind::Line: {
                std::string pts;
                for (std::size_t i = 0; i < s.xs.size(); ++i) {
                    if (std::isfinite(s.ys[i])) pts += fmt::format("{:.2f},{:.2f} ", sx(s.xs[i]), sy(s.ys[i]));
                }
                out += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"{}\" points=\"{}\"/>\n",
                                   s.color, s.size, pts);
                break;
            }
            case Series::Kind::Band: {
                std::string pts;
                for (std::size_t i = 0; i < s.xs.size(); ++i) pts += fmt::format("{:.2f},{:.2f} ", sx(s.xs[i]), sy(s.hi[i]));
                for (std::size_t i = s.xs.size(); i-- > 0;) pts += fmt::format("{:.2f},{:.2f} ", sx(s.xs[i]), sy(s.ys[i]));
                out += fmt::format("<polygon fill=\"{}\" fill-opacity=\"0.2\" stroke=\"none\" points=\"{}\"/>\n", s.color,
                                   pts);
                break;
            }
            case Series::Kind::Points:
                for (std::size_t i = 0; i < s.xs.size(); ++i) {
                    out += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"{}\" fill=\"{}\" fill-opacity=\"0.6\"/>\n",
                                       sx(s.xs[i]), sy(s.ys[i]), s.size, s.color);
                }
                break;
            case Series::Kind::Path: {
                std::string pts;
                for (const auto& p : s.path) pts += fmt::format("{:.2f},{:.2f} ", sx(p[0]), sy(p[1]));
                out += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"{}\" points=\"{}\"/>\n",
                                   s.color, s.size, pts);
                break;
            }
            case Series::Kind::Bars:
                for (std::size_t i = 0; i < s.xs.size(); ++i) {
                    const double xa = sx(s.xs[i] - s.size / 2);
                    const double xb = sx(s.xs[i] + s.size / 2);
                    const double ya = sy(std::max(s.ys[i], y0));
                    const double yb = sy(std::max(0.0, y0));
                    out += fmt::format(
                        "<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"{}\" fill-opacity=\"0.55\"/>\n",
                        xa, ya, std::max(0.0, xb - xa), std::max(0.0, yb - ya), s.color);
                }
                break;
            case Series::Kind::Marker: {
                const double cx = sx(s.xs[0]);
                const double cy = sy(s.ys[0]);
                out += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"2\"/>\n",
                                   cx, cy, s.size, s.color);
                break;
            }
        }
    }
    out += "</g>\n";

    // legend
    double ly = top + 14;
    for (const auto& s : series_) {
        if (s.label.empty()) continue;
        out += fmt::format("<rect x=\"{:.1f}\" y=\"{:.1f}\" width=\"14\" height=\"4\" fill=\"{}\"/>\n", left + pw - 170,
                           ly - 4, s.color);
        out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" font-size=\"11\">{}</text>\n", left + pw - 150, ly,
                           escape(s.label));
        ly += 16;
    }
    return out;
}

std::string render_svg(const std::vector<SvgPlot>& panels, double width, double panel_height) {
    const double height = panel_height * static_cast<double>(std::max<std::size_t>(1, panels.size()));
    std::string out = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\" "
        "font-family=\"sans-serif\">\n",
        width, height);
    for (std::size_t i = 0; i < panels.size(); ++i) {
        out += fmt::format("<g transform=\"translate(0 {})\">\n", panel_height * static_cast<double>(i));
        std::string body = panels[i].render_body(width, panel_height);
        // clip ids must be unique per panel
        const std::string from = fmt::format("clip{}", static_cast<int>(panel_height));
        const std::string to = fmt::format("clip{}_{}", static_cast<int>(panel_height), i);
        for (std::size_t pos = body.find(from); pos != std::string::npos; pos = body.find(from, pos + to.size())) {
            body.replace(pos, from.size(), to);
        }
        out += body;
        out += "</g>\n";
    }
    out += "</svg>\n";
    return out;
}

std::string comparator_color(std::size_t index, bool euclidean) {
    if (euclidean) {
        return "#7b3fa0";
    }
    static const std::array<const char*, 4> palette{"#2a9d4b", "#e07b00", "#1f77b4", "#c0392b"};
    return palette[index % palette.size()];
}

}  // namespace coinknn
