#include "bussgang/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace bussgang {

namespace {

struct Table {
    std::string title;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const {
        for (std::size_t i = 0; i < columns.size(); ++i) {
            if (columns[i] == name) {
                return static_cast<int>(i);
            }
        }
        throw std::runtime_error("plot: CSV is missing column '" + name + "'");
    }
};

Table read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("plot: cannot open " + path);
    }
    Table table;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        if (line[0] == '#') {
            if (table.title.empty()) {
                const auto pos = line.find(": ");
                table.title = pos == std::string::npos ? line.substr(1) : line.substr(pos + 2);
            }
            continue;
        }
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) {
            fields.push_back(field);
        }
        if (!have_header) {
            table.columns = std::move(fields);
            have_header = true;
        } else {
            table.rows.push_back(std::move(fields));
        }
    }
    if (!have_header || table.rows.empty()) {
        throw std::runtime_error("plot: no data rows in " + path);
    }
    return table;
}

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

std::vector<double> nice_ticks(double lo, double hi, int target = 6) {
    if (!(hi > lo)) {
        hi = lo + 1.0;
    }
    const double raw = (hi - lo) / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        if (mag * m >= raw) {
            step = mag * m;
            break;
        }
    }
    std::vector<double> ticks;
    for (double t = std::ceil(lo / step) * step; t <= hi + 0.5 * step; t += step) {
        ticks.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
    }
    return ticks;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

void render_svg(const std::string& title, const std::string& x_label,
                const std::string& y_label, const std::vector<Series>& series,
                const std::string& out_path) {
    constexpr double width = 840;
    constexpr double height = 560;
    constexpr double ml = 70, mr = 180, mt = 50, mb = 55;
    const double px = width - ml - mr;
    const double py = height - mt - mb;

    double x_lo = 1e300, x_hi = -1e300, y_lo = 1e300, y_hi = -1e300;
    for (const Series& s : series) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            x_lo = std::min(x_lo, s.x[i]);
            x_hi = std::max(x_hi, s.x[i]);
            y_lo = std::min(y_lo, s.y[i]);
            y_hi = std::max(y_hi, s.y[i]);
        }
    }
    if (!(x_hi > x_lo)) {
        x_hi = x_lo + 1;
    }
    const double pad = 0.05 * (y_hi - y_lo + 1e-12);
    y_lo -= pad;
    y_hi += pad;

    auto sx = [&](double x) { return ml + (x - x_lo) / (x_hi - x_lo) * px; };
    auto sy = [&](double y) { return mt + py - (y - y_lo) / (y_hi - y_lo) * py; };

    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

    std::ofstream out(out_path);
    if (!out) {
        throw std::runtime_error("plot: cannot write " + out_path);
    }
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << ml << "\" y=\"28\" font-family=\"sans-serif\" font-size=\"16\">"
        << title << "</text>\n";

    out << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << px << "\" height=\"" << py
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (double t : nice_ticks(x_lo, x_hi)) {
        if (t < x_lo - 1e-12 || t > x_hi + 1e-12) {
            continue;
        }
        out << "<line x1=\"" << sx(t) << "\" y1=\"" << mt + py << "\" x2=\"" << sx(t)
            << "\" y2=\"" << mt + py + 5 << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << sx(t) << "\" y=\"" << mt + py + 20
            << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">" << fmt(t)
            << "</text>\n";
    }
    for (double t : nice_ticks(y_lo, y_hi)) {
        if (t < y_lo - 1e-12 || t > y_hi + 1e-12) {
            continue;
        }
        out << "<line x1=\"" << ml - 5 << "\" y1=\"" << sy(t) << "\" x2=\"" << ml << "\" y2=\""
            << sy(t) << "\" stroke=\"black\"/>\n";
        out << "<line x1=\"" << ml << "\" y1=\"" << sy(t) << "\" x2=\"" << ml + px << "\" y2=\""
            << sy(t) << "\" stroke=\"#dddddd\"/>\n";
        out << "<text x=\"" << ml - 8 << "\" y=\"" << sy(t) + 4
            << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" << fmt(t)
            << "</text>\n";
    }
    out << "<text x=\"" << ml + px / 2 << "\" y=\"" << height - 12
        << "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">" << x_label
        << "</text>\n";
    out << "<text x=\"18\" y=\"" << mt + py / 2
        << "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\" "
           "transform=\"rotate(-90 18 "
        << mt + py / 2 << ")\">" << y_label << "</text>\n";

    for (std::size_t si = 0; si < series.size(); ++si) {
        const Series& s = series[si];
        const char* color = palette[si % 8];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.8\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            out << sx(s.x[i]) << ',' << sy(s.y[i]) << ' ';
        }
        out << "\"/>\n";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            out << "<circle cx=\"" << sx(s.x[i]) << "\" cy=\"" << sy(s.y[i])
                << "\" r=\"2.6\" fill=\"" << color << "\"/>\n";
        }
        const double ly = mt + 16 + 18 * static_cast<double>(si);
        out << "<line x1=\"" << ml + px + 12 << "\" y1=\"" << ly << "\" x2=\"" << ml + px + 34
            << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << ml + px + 40 << "\" y=\"" << ly + 4
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << s.label << "</text>\n";
    }
    out << "</svg>\n";
}

}  // namespace

void emit_plot(const std::string& csv_path, const std::string& kind,
               const std::string& out_path) {
    const Table table = read_csv(csv_path);
    const int col_value = table.column("sweep_value");
    const int col_g = table.column("g");
    const int col_var = table.column("sweep_variable");
    const std::string x_label = table.rows.front()[static_cast<std::size_t>(col_var)];

    std::vector<std::string> g_labels;
    for (const auto& row : table.rows) {
        const std::string& g = row[static_cast<std::size_t>(col_g)];
        if (std::find(g_labels.begin(), g_labels.end(), g) == g_labels.end()) {
            g_labels.push_back(g);
        }
    }
    const bool multi_g = g_labels.size() > 1;

    std::vector<std::pair<std::string, std::string>> wanted;  // column, display name
    std::string y_label;
    if (kind == "gains") {
        wanted = {{"k_y", "k_y"}, {"k_x", "k_x"}, {"k_n", "k_n"}};
        y_label = "regression coefficient";
    } else if (kind == "capacity") {
        wanted = {{"c_snr_x", "C_snr"}, {"c_mse", "C_mse"}, {"c_awgn", "C_awgn"}, {"mi", "MI"}};
        y_label = "bits";
    } else {
        throw std::runtime_error("plot: unknown kind '" + kind + "' (use gains or capacity)");
    }

    std::vector<Series> series;
    for (const std::string& g : g_labels) {
        for (const auto& [col_name, display] : wanted) {
            const int col = table.column(col_name);
            Series s;
            s.label = multi_g ? display + " (" + g + ")" : display;
            for (const auto& row : table.rows) {
                if (row[static_cast<std::size_t>(col_g)] != g) {
                    continue;
                }
                const std::string& cell = row[static_cast<std::size_t>(col)];
                if (cell == "NA") {
                    continue;
                }
                s.x.push_back(std::stod(row[static_cast<std::size_t>(col_value)]));
                s.y.push_back(std::stod(cell));
            }
            if (!s.x.empty()) {
                series.push_back(std::move(s));
            }
        }
    }
    if (series.empty()) {
        throw std::runtime_error("plot: nothing to draw (all values NA?)");
    }
    render_svg(table.title, x_label, y_label, series, out_path);
}

}  // namespace bussgang
