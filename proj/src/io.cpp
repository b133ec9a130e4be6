#include "svarladder/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace svl {

namespace {

std::string fmt(const char* spec, double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

std::string num6(double v) { return fmt("%.6g", v); }   // report precision
std::string num17(double v) { return fmt("%.17g", v); } // exact round-trip
std::string px(double v) { return fmt("%.2f", v); }     // SVG coordinates

bool parse_double(std::string_view token, double* out) {
    const char* begin = token.data();
    const char* end = begin + token.size();
    auto [ptr, ec] = std::from_chars(begin, end, *out);
    return ec == std::errc() && ptr == end && std::isfinite(*out);
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open file: " + path);
    return in;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);  // LF endings everywhere
    if (!out) throw Error("cannot open file for writing: " + path);
    return out;
}

std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

bool blank(const std::string& line) {
    return std::all_of(line.begin(), line.end(),
                       [](unsigned char c) { return std::isspace(c); });
}

std::vector<std::string> split_whitespace(const std::string& line) {
    std::vector<std::string> tokens;
    std::istringstream stream(line);
    std::string token;
    while (stream >> token) tokens.push_back(token);
    return tokens;
}

std::vector<std::string> split_commas(const std::string& line) {
    std::vector<std::string> tokens;
    std::string::size_type start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        tokens.push_back(line.substr(start, pos - start));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return tokens;
}

std::string trim(const std::string& s) {
    auto first = s.find_first_not_of(" \t\"");
    auto last = s.find_last_not_of(" \t\"");
    return first == std::string::npos ? std::string() : s.substr(first, last - first + 1);
}

MultiChannelSeries rows_to_series(const std::vector<Eigen::VectorXd>& rows,
                                  std::vector<std::string> names) {
    MultiChannelSeries series;
    const long n = static_cast<long>(rows.size());
    const long g = rows.front().size();
    series.data.resize(n, g);
    for (long i = 0; i < n; ++i) series.data.row(i) = rows[i].transpose();
    series.channel_names = std::move(names);
    return series;
}

}  // namespace

MultiChannelSeries read_ims_file(const std::string& path, double sample_interval) {
    std::ifstream in = open_input(path);
    std::vector<Eigen::VectorXd> rows;
    std::string raw;
    long line_number = 0;
    long columns = -1;
    while (std::getline(in, raw)) {
        ++line_number;
        const std::string line = strip_cr(raw);
        if (blank(line)) continue;
        const auto tokens = split_whitespace(line);
        if (columns < 0) columns = static_cast<long>(tokens.size());
        if (static_cast<long>(tokens.size()) != columns)
            throw InconsistentColumnCount(line_number, tokens.size(), columns);
        Eigen::VectorXd row(columns);
        for (long j = 0; j < columns; ++j)
            if (!parse_double(tokens[j], &row(j))) throw MalformedLine(line_number, line);
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw EmptyFile(path);

    MultiChannelSeries series = rows_to_series(rows, default_channel_names(static_cast<int>(columns)));
    series.sample_interval = sample_interval;
    validate_series(series);
    return series;
}

void write_ims_file(const MultiChannelSeries& series, const std::string& path) {
    validate_series(series);
    std::ofstream out = open_output(path);
    for (long i = 0; i < series.samples(); ++i) {
        for (int k = 0; k < series.channels(); ++k) {
            if (k) out << '\t';
            out << num17(series.data(i, k));
        }
        out << '\n';
    }
}

MultiChannelSeries read_csv(const std::string& path, bool has_header) {
    std::ifstream in = open_input(path);
    std::vector<Eigen::VectorXd> rows;
    std::vector<std::string> names;
    std::string raw;
    long line_number = 0;
    long columns = -1;
    bool expect_header = has_header;
    while (std::getline(in, raw)) {
        ++line_number;
        const std::string line = strip_cr(raw);
        if (blank(line)) continue;
        const auto tokens = split_commas(line);
        if (expect_header) {
            expect_header = false;
            columns = static_cast<long>(tokens.size());
            std::set<std::string> seen;
            for (const auto& t : tokens) {
                std::string name = trim(t);
                if (name.empty() || !seen.insert(name).second)
                    throw HeaderMismatch("empty or duplicate column name on line " +
                                         std::to_string(line_number));
                names.push_back(std::move(name));
            }
            continue;
        }
        if (columns < 0) columns = static_cast<long>(tokens.size());
        if (static_cast<long>(tokens.size()) != columns)
            throw InconsistentColumnCount(line_number, tokens.size(), columns);
        Eigen::VectorXd row(columns);
        for (long j = 0; j < columns; ++j)
            if (!parse_double(trim(tokens[j]), &row(j))) throw MalformedLine(line_number, line);
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw EmptyFile(path);
    if (names.empty()) names = default_channel_names(static_cast<int>(columns));

    MultiChannelSeries series = rows_to_series(rows, std::move(names));
    validate_series(series);
    return series;
}

void write_csv(const MultiChannelSeries& series, const std::string& path) {
    validate_series(series);
    std::ofstream out = open_output(path);
    for (int k = 0; k < series.channels(); ++k) {
        if (k) out << ',';
        out << series.channel_names[k];
    }
    out << '\n';
    for (long i = 0; i < series.samples(); ++i) {
        for (int k = 0; k < series.channels(); ++k) {
            if (k) out << ',';
            out << num17(series.data(i, k));
        }
        out << '\n';
    }
}

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json matrix_to_json(const Eigen::MatrixXd& m) {
    ordered_json rows = ordered_json::array();
    for (long i = 0; i < m.rows(); ++i) {
        ordered_json row = ordered_json::array();
        for (long j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

ordered_json vector_to_json(const Eigen::VectorXd& v) {
    ordered_json arr = ordered_json::array();
    for (long i = 0; i < v.size(); ++i) arr.push_back(v(i));
    return arr;
}

void write_factors_json_impl(const CausalFactors& factors, double threshold, int tail_window,
                             const Eigen::VectorXd& means, const Eigen::VectorXd& stds,
                             const std::string& path) {
    validate_factors(factors);
    ordered_json j;
    j["channels"] = factors.channel_names;
    j["lag_order"] = factors.lag_order();
    j["threshold"] = threshold;
    j["tail_window"] = tail_window;
    j["structural"] = matrix_to_json(factors.structural);
    ordered_json lagged = ordered_json::array();
    for (const auto& m : factors.lagged) lagged.push_back(matrix_to_json(m));
    j["lagged"] = std::move(lagged);
    j["preprocessing"] = {{"means", vector_to_json(means)}, {"stds", vector_to_json(stds)}};

    std::ofstream out = open_output(path);
    out << j.dump(2) << '\n';
}

Eigen::MatrixXd matrix_from_json(const ordered_json& j, int g, const std::string& pointer) {
    if (!j.is_array() || static_cast<int>(j.size()) != g) throw SchemaViolation(pointer);
    Eigen::MatrixXd m(g, g);
    for (int i = 0; i < g; ++i) {
        const auto& row = j[i];
        if (!row.is_array() || static_cast<int>(row.size()) != g)
            throw SchemaViolation(pointer + "/" + std::to_string(i));
        for (int k = 0; k < g; ++k) {
            if (!row[k].is_number())
                throw SchemaViolation(pointer + "/" + std::to_string(i) + "/" + std::to_string(k));
            m(i, k) = row[k].get<double>();
        }
    }
    return m;
}

}  // namespace

void write_factors_json(const EstimationResult& result, const std::string& path) {
    write_factors_json_impl(result.factors, result.config.threshold, result.tail_window_used,
                            result.channel_means, result.channel_stds, path);
}

void write_factors_json(const CausalFactors& factors, const std::string& path, double threshold,
                        int tail_window) {
    const int g = factors.channels();
    write_factors_json_impl(factors, threshold, tail_window, Eigen::VectorXd::Zero(g),
                            Eigen::VectorXd::Ones(g), path);
}

CausalFactors read_factors_json(const std::string& path) {
    std::ifstream in = open_input(path);
    ordered_json j;
    try {
        j = ordered_json::parse(in);
    } catch (const nlohmann::json::parse_error&) {
        throw SchemaViolation("/");
    }
    if (!j.is_object()) throw SchemaViolation("/");

    if (!j.contains("channels") || !j["channels"].is_array() || j["channels"].empty())
        throw SchemaViolation("/channels");
    CausalFactors factors;
    for (size_t i = 0; i < j["channels"].size(); ++i) {
        if (!j["channels"][i].is_string())
            throw SchemaViolation("/channels/" + std::to_string(i));
        factors.channel_names.push_back(j["channels"][i].get<std::string>());
    }
    const int g = static_cast<int>(factors.channel_names.size());

    if (!j.contains("lag_order") || !j["lag_order"].is_number_integer() ||
        j["lag_order"].get<int>() < 1)
        throw SchemaViolation("/lag_order");
    const int d = j["lag_order"].get<int>();

    if (!j.contains("structural")) throw SchemaViolation("/structural");
    factors.structural = matrix_from_json(j["structural"], g, "/structural");

    if (!j.contains("lagged") || !j["lagged"].is_array() ||
        static_cast<int>(j["lagged"].size()) != d)
        throw SchemaViolation("/lagged");
    for (int lag = 0; lag < d; ++lag)
        factors.lagged.push_back(
            matrix_from_json(j["lagged"][lag], g, "/lagged/" + std::to_string(lag)));

    return validate_factors(factors);
}

namespace {

struct SvgGeometry {
    double margin_x = 80.0;
    double header = 40.0;
    double margin_bottom = 30.0;
    double axis_overhang = 25.0;

    double axis_x(const RenderStyle& style, int axis) const {
        return margin_x + axis * style.axis_spacing;
    }
    double channel_y(const RenderStyle& style, int channel) const {
        return header + axis_overhang + channel * style.channel_spacing;
    }
};

std::string svg_line(double x1, double y1, double x2, double y2, const std::string& cls,
                     const std::string& color, double width, bool dashed,
                     const std::string& dash_pattern, const std::string& marker) {
    // Pull the head back so the arrow tip is not buried in the node dot.
    const double dx = x2 - x1;
    const double dy = y2 - y1;
    const double len = std::sqrt(dx * dx + dy * dy);
    if (len > 12.0) {
        x2 -= dx / len * 10.0;
        y2 -= dy / len * 10.0;
    }
    std::string s = "  <line class=\"" + cls + "\" x1=\"" + px(x1) + "\" y1=\"" + px(y1) +
                    "\" x2=\"" + px(x2) + "\" y2=\"" + px(y2) + "\" stroke=\"" + color +
                    "\" stroke-width=\"" + px(width) + "\"";
    if (dashed) s += " stroke-dasharray=\"" + dash_pattern + "\"";
    if (!marker.empty()) s += " marker-end=\"url(#" + marker + ")\"";
    s += "/>\n";
    return s;
}

std::string svg_marker(const std::string& id, const std::string& color) {
    return "    <marker id=\"" + id +
           "\" viewBox=\"0 0 10 10\" refX=\"9\" refY=\"5\" markerWidth=\"7\" markerHeight=\"7\" "
           "orient=\"auto\"><path d=\"M 0 0 L 10 5 L 0 10 z\" fill=\"" +
           color + "\"/></marker>\n";
}

std::string svg_text(double x, double y, const std::string& anchor, const std::string& text) {
    return "  <text x=\"" + px(x) + "\" y=\"" + px(y) +
           "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"" + anchor + "\">" +
           text + "</text>\n";
}

}  // namespace

std::string render_svg(const LadderGraph& graph, const std::vector<FeedbackLoop>& loops,
                       const RenderStyle& style) {
    if (!(style.min_stroke > 0.0) || style.max_stroke < style.min_stroke)
        throw InvalidDimension("stroke widths require max_stroke >= min_stroke > 0");
    const int g = graph.channel_count();
    const SvgGeometry geo;

    const double width = geo.axis_x(style, 2) + geo.margin_x;
    const double height =
        geo.channel_y(style, std::max(0, g - 1)) + geo.axis_overhang + geo.margin_bottom;

    double max_magnitude = 0.0;
    for (const auto& e : graph.edges) max_magnitude = std::max(max_magnitude, e.magnitude);
    auto stroke_width = [&](double magnitude) {
        return style.min_stroke +
               (style.max_stroke - style.min_stroke) * magnitude / max_magnitude;
    };

    // Edges of positive multi-edge loops, for the highlight overlay.
    std::set<std::tuple<int, int, int, int>> highlight;
    if (style.highlight_positive_feedback) {
        for (const auto& loop : loops)
            if (loop.positive_feedback() && loop.path.size() >= 2)
                for (const auto& e : loop.path)
                    highlight.insert({e.from_channel, e.to_channel, e.lag,
                                      static_cast<int>(e.kind)});
    }

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + px(width) + "\" height=\"" +
           px(height) + "\" viewBox=\"0 0 " + px(width) + " " + px(height) + "\">\n";
    svg += "  <defs>\n";
    svg += svg_marker("arrow-lagged", style.lagged_color);
    svg += svg_marker("arrow-structural", style.structural_color);
    svg += svg_marker("arrow-highlight", style.highlight_color);
    svg += "  </defs>\n";

    const char* axis_titles[3] = {"T-1", "T", "T"};
    for (int axis = 0; axis < 3; ++axis) {
        const double x = geo.axis_x(style, axis);
        svg += "  <line class=\"axis\" x1=\"" + px(x) + "\" y1=\"" +
               px(geo.channel_y(style, 0) - geo.axis_overhang) + "\" x2=\"" + px(x) + "\" y2=\"" +
               px(geo.channel_y(style, std::max(0, g - 1)) + geo.axis_overhang) +
               "\" stroke=\"black\" stroke-width=\"1.00\"/>\n";
        svg += svg_text(x, geo.header - 15.0, "middle", axis_titles[axis]);
    }
    for (int k = 0; k < g; ++k) {
        const double y = geo.channel_y(style, k);
        for (int axis = 0; axis < 3; ++axis)
            svg += "  <circle cx=\"" + px(geo.axis_x(style, axis)) + "\" cy=\"" + px(y) +
                   "\" r=\"4.00\" fill=\"black\"/>\n";
        svg += svg_text(geo.axis_x(style, 0) - 12.0, y + 4.0, "end", graph.channels[k]);
        svg += svg_text(geo.axis_x(style, 2) + 12.0, y + 4.0, "start", graph.channels[k]);
    }

    auto endpoints = [&](const LadderEdge& e) {
        const int from_axis = e.kind == FactorKind::INS ? 1 : 0;
        return std::array<double, 4>{geo.axis_x(style, from_axis),
                                     geo.channel_y(style, e.from_channel),
                                     geo.axis_x(style, from_axis + 1),
                                     geo.channel_y(style, e.to_channel)};
    };

    for (const auto& e : graph.edges) {
        const auto [x1, y1, x2, y2] = endpoints(e);
        const bool lagged = e.kind != FactorKind::INS;
        svg += svg_line(x1, y1, x2, y2, "edge",
                        lagged ? style.lagged_color : style.structural_color,
                        stroke_width(e.magnitude), e.sign < 0, style.dash_pattern,
                        lagged ? "arrow-lagged" : "arrow-structural");
    }
    for (const auto& e : graph.edges) {
        if (!highlight.count({e.from_channel, e.to_channel, e.lag, static_cast<int>(e.kind)}))
            continue;
        const auto [x1, y1, x2, y2] = endpoints(e);
        svg += svg_line(x1, y1, x2, y2, "loop-highlight", style.highlight_color,
                        stroke_width(e.magnitude), e.sign < 0, style.dash_pattern,
                        "arrow-highlight");
    }

    svg += "</svg>\n";
    return svg;
}

std::string render_dot(const LadderGraph& graph) {
    int max_lag = 1;
    for (const auto& e : graph.edges) max_lag = std::max(max_lag, e.lag);

    auto node = [&graph](int channel, int lag) {
        return "\"" + graph.channels[channel] + (lag == 0 ? "@T" : "@T-" + std::to_string(lag)) +
               "\"";
    };

    std::string dot = "digraph ladder {\n  rankdir=LR;\n";
    for (int lag = max_lag; lag >= 0; --lag)
        for (int k = 0; k < graph.channel_count(); ++k) dot += "  " + node(k, lag) + ";\n";

    for (const auto& e : graph.edges) {
        const int from_lag = e.kind == FactorKind::INS ? 0 : e.lag;
        dot += "  " + node(e.from_channel, from_lag) + " -> " + node(e.to_channel, 0) +
               " [kind=\"" + to_string(e.kind) + "\", sign=" + (e.sign > 0 ? "1" : "-1") +
               ", magnitude=" + num6(e.magnitude) + ", label=\"" + to_string(e.kind) + " " +
               (e.sign > 0 ? "+" : "-") + num6(e.magnitude) + "\"";
        if (e.sign < 0) dot += ", style=dashed";
        dot += "];\n";
    }
    dot += "}\n";
    return dot;
}

}  // namespace svl
