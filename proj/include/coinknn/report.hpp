#pragma once

/**
 * @file report.hpp
 *
 * Minimal writers for RFC-4180 CSV and static SVG line/scatter plots.
 */

#include <array>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace coinknn {

/// Error opening or writing an output file.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/// Quotes a field when it holds a comma, quote, CR or LF; embedded quotes are doubled.
std::string csv_field(std::string_view field);

/// Shortest text that round-trips the double.
std::string format_double(double v);

class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header);

    void add_row(std::vector<std::string> row);
    std::size_t rows() const noexcept { return rows_.size(); }

    std::string str() const;
    void save(const std::filesystem::path& path) const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

/// Writes text to a file, throwing IoError on failure.
void write_text_file(const std::filesystem::path& path, std::string_view text);

class SvgPlot {
public:
    SvgPlot(std::string title, std::string x_label, std::string y_label);

    void add_line(std::vector<double> xs, std::vector<double> ys, std::string color, std::string label);
    /// Shaded region between lo and hi.
    void add_band(std::vector<double> xs, std::vector<double> lo, std::vector<double> hi, std::string color);
    void add_points(std::vector<double> xs, std::vector<double> ys, std::string color, std::string label,
                    double radius = 1.5);
    /// Open polyline without legend entry.
    void add_path(std::vector<std::array<double, 2>> vertices, std::string color, double width = 1.2);
    /// Vertical bars centred on xs.
    void add_bars(std::vector<double> xs, std::vector<double> heights, double bar_width, std::string color,
                  std::string label);
    /// Cross marker.
    void add_marker(double x, double y, std::string color, std::string label);

    void set_x_range(double lo, double hi);
    void set_y_range(double lo, double hi);

    /// Body of the plot placed at (0, 0) with the given size, without the <svg> wrapper.
    std::string render_body(double width, double height) const;

private:
    struct Series {
        enum class Kind { Line, Band, Points, Path, Bars, Marker };
        Kind kind = Kind::Line;
        std::vector<double> xs;
        std::vector<double> ys;
        std::vector<double> hi;
        std::vector<std::array<double, 2>> path;
        std::string color;
        std::string label;
        double size = 1.0;
    };

    std::array<double, 4> bounds() const;

    std::string title_;
    std::string x_label_;
    std::string y_label_;
    std::vector<Series> series_;
    std::array<double, 2> x_range_{0.0, 0.0};
    std::array<double, 2> y_range_{0.0, 0.0};
    bool x_fixed_ = false;
    bool y_fixed_ = false;
};

/// Stacks plots vertically into one SVG document.
std::string render_svg(const std::vector<SvgPlot>& panels, double width = 760.0, double panel_height = 420.0);

/// Fixed colors for comparator kinds and groups.
std::string comparator_color(std::size_t index, bool euclidean);

}  // namespace coinknn
