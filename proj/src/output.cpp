#include "toa/output.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "toa/errors.hpp"
#include "toa/scenario.hpp"

namespace toa {

void write_file_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw error("cannot open for writing: " + tmp.string());
        out << content;
        if (!out) throw error("write failed: " + tmp.string());
    }
    fs::rename(tmp, target);
}

std::string render_csv(const CsvTable& table) {
    std::ostringstream os;
    for (std::size_t c = 0; c < table.header.size(); ++c) {
        if (c > 0) os << ",";
        os << table.header[c];
    }
    if (!table.note_header.empty()) os << "," << table.note_header;
    os << "\n";
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c > 0) os << ",";
            os << format_double(row[c]);
        }
        if (!table.note_header.empty()) os << "," << (r < table.notes.size() ? table.notes[r] : "");
        os << "\n";
    }
    return os.str();
}

namespace {

struct Extent {
    double lo = 0.0, hi = 1.0;
    void grow(double v) {
        if (!std::isfinite(v)) return;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
};

}  // namespace

std::string render_svg_plot(const std::string& title, const std::string& x_label,
                            const std::string& y_label, const std::vector<SvgSeries>& series) {
    const int width = 880, height = 560;
    const int ml = 70, mr = 20, mt = 40, mb = 50;
    double x_lo = 1e300, x_hi = -1e300, y_lo = 1e300, y_hi = -1e300;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            x_lo = std::min(x_lo, s.x[i]);
            x_hi = std::max(x_hi, s.x[i]);
            y_lo = std::min(y_lo, s.y[i]);
            y_hi = std::max(y_hi, s.y[i]);
        }
    if (!(x_hi > x_lo)) x_hi = x_lo + 1.0;
    if (!(y_hi > y_lo)) y_hi = y_lo + 1.0;
    const double y_pad = 0.05 * (y_hi - y_lo);
    y_lo -= y_pad;
    y_hi += y_pad;

    auto px = [&](double x) { return ml + (x - x_lo) / (x_hi - x_lo) * (width - ml - mr); };
    auto py = [&](double y) { return height - mb - (y - y_lo) / (y_hi - y_lo) * (height - mt - mb); };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
       << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
       << title << "</text>\n";
    // axes
    os << "<line x1=\"" << ml << "\" y1=\"" << height - mb << "\" x2=\"" << width - mr
       << "\" y2=\"" << height - mb << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
       << height - mb << "\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 5; ++k) {
        const double xv = x_lo + (x_hi - x_lo) * k / 5.0;
        const double yv = y_lo + (y_hi - y_lo) * k / 5.0;
        os << "<text x=\"" << px(xv) << "\" y=\"" << height - mb + 18
           << "\" text-anchor=\"middle\" font-size=\"11\">" << format_double(xv).substr(0, 8)
           << "</text>\n";
        os << "<text x=\"" << ml - 8 << "\" y=\"" << py(yv) + 4
           << "\" text-anchor=\"end\" font-size=\"11\">" << format_double(yv).substr(0, 8)
           << "</text>\n";
    }
    os << "<text x=\"" << width / 2 << "\" y=\"" << height - 12
       << "\" text-anchor=\"middle\" font-size=\"13\">" << x_label << "</text>\n";
    os << "<text x=\"16\" y=\"" << height / 2
       << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 "
       << height / 2 << ")\">" << y_label << "</text>\n";

    int legend_y = mt + 6;
    for (const auto& s : series) {
        os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.4\" points=\"";
        bool pen_up = true;
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
                pen_up = true;
                continue;
            }
            if (!pen_up) os << " ";
            os << px(s.x[i]) << "," << py(s.y[i]);
            pen_up = false;
        }
        os << "\"/>\n";
        os << "<text x=\"" << width - mr - 160 << "\" y=\"" << legend_y
           << "\" font-size=\"12\" fill=\"" << s.color << "\">" << s.label << "</text>\n";
        legend_y += 16;
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace toa
