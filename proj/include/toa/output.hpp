#pragma once

#include <string>
#include <vector>

namespace toa {

// Atomic text write: temp file in the same directory, then rename.
void write_file_atomic(const std::string& path, const std::string& content);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
    // Optional per-row trailing string column (e.g. error notes).
    std::vector<std::string> notes;
    std::string note_header;
};

// Deterministic CSV rendering: header row first, 17-significant-digit floats,
// '.' decimal separator, '\n' line endings.
std::string render_csv(const CsvTable& table);

struct SvgSeries {
    std::string label;
    std::string color;
    std::vector<double> x, y;
};

// Minimal self-contained SVG line plot (acceptance aid, never an acceptance
// subject).
std::string render_svg_plot(const std::string& title, const std::string& x_label,
                            const std::string& y_label, const std::vector<SvgSeries>& series);

}  // namespace toa
