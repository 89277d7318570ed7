#include "tdacp/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace tdacp {

using nlohmann::json;

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

namespace {

void append_pairs(std::string& out, const PersistenceDiagram& d, int dim) {
    out += "{\"finite\": [";
    bool first = true;
    for (const auto& p : d.finite) {
        if (p.dim != dim) continue;
        if (!first) out += ", ";
        first = false;
        out += "[" + format_double(p.birth) + ", " + format_double(p.persistence) + "]";
    }
    out += "], \"infinite\": [";
    first = true;
    for (double b : d.infinite[dim]) {
        if (!first) out += ", ";
        first = false;
        out += format_double(b);
    }
    out += "]}";
}

}  // namespace

std::string diagram_record_line(const PersistenceDiagram& diagram) {
    std::string out = "{\"t\": " + std::to_string(diagram.frame_index) + ", \"dim0\": ";
    append_pairs(out, diagram, 0);
    out += ", \"dim1\": ";
    append_pairs(out, diagram, 1);
    out += "}";
    return out;
}

void write_diagram_records(std::ostream& out, const std::vector<PersistenceDiagram>& diagrams) {
    for (const auto& d : diagrams) out << diagram_record_line(d) << "\n";
}

std::vector<PersistenceDiagram> read_diagram_records(std::istream& in) {
    std::vector<PersistenceDiagram> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json rec;
        try {
            rec = json::parse(line);
        } catch (const json::exception& e) {
            throw std::runtime_error("diagram file line " + std::to_string(lineno) + ": " +
                                     e.what());
        }
        PersistenceDiagram d;
        try {
            d.frame_index = rec.at("t").get<std::int64_t>();
            for (int dim = 0; dim < 2; ++dim) {
                const std::string key = dim == 0 ? "dim0" : "dim1";
                if (!rec.contains(key)) continue;
                const auto& block = rec.at(key);
                for (const auto& pair : block.value("finite", json::array())) {
                    if (!pair.is_array() || pair.size() != 2)
                        throw std::runtime_error("diagram file line " + std::to_string(lineno) +
                                                 ": malformed pair");
                    d.finite.push_back({dim, pair[0].get<double>(), pair[1].get<double>()});
                }
                for (const auto& b : block.value("infinite", json::array()))
                    d.infinite[dim].push_back(b.get<double>());
            }
        } catch (const json::exception& e) {
            throw std::runtime_error("diagram file line " + std::to_string(lineno) + ": " +
                                     e.what());
        }
        out.push_back(std::move(d));
    }
    return out;
}

std::string model_to_json(const HistogramModel& model) {
    std::string out = "{\"version\": 1, \"M\": " + std::to_string(model.bins);
    out += ", \"breakpoints\": [";
    for (std::size_t i = 0; i < model.interior_breakpoints.size(); ++i) {
        if (i) out += ", ";
        out += format_double(model.interior_breakpoints[i]);
    }
    out += "], \"sigma\": [";
    for (std::size_t i = 0; i < model.sigma.size(); ++i) {
        if (i) out += ", ";
        out += format_double(model.sigma[i]);
    }
    out += "], \"trained_dim\": " + std::to_string(model.trained_dim);
    out += ", \"training_frames\": " + std::to_string(model.training_frames);
    out += "}\n";
    return out;
}

HistogramModel model_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw std::runtime_error(std::string("model mismatch: unparseable model file: ") +
                                 e.what());
    }
    HistogramModel model;
    try {
        if (doc.at("version").get<int>() != 1)
            throw std::runtime_error("model mismatch: unsupported version");
        model.bins = doc.at("M").get<std::size_t>();
        model.interior_breakpoints = doc.at("breakpoints").get<std::vector<double>>();
        model.sigma = doc.at("sigma").get<std::vector<double>>();
        model.trained_dim = doc.at("trained_dim").get<int>();
        model.training_frames = doc.at("training_frames").get<std::size_t>();
    } catch (const json::exception& e) {
        throw std::runtime_error(std::string("model mismatch: ") + e.what());
    }
    if (model.bins < 2 || model.interior_breakpoints.size() != model.bins - 1 ||
        model.sigma.size() != model.bins)
        throw std::runtime_error("model mismatch: inconsistent sizes");
    if (!std::is_sorted(model.interior_breakpoints.begin(), model.interior_breakpoints.end()) ||
        std::adjacent_find(model.interior_breakpoints.begin(),
                          model.interior_breakpoints.end()) != model.interior_breakpoints.end())
        throw std::runtime_error("model mismatch: breakpoints not strictly increasing");
    for (double s : model.sigma)
        if (!(s >= 0.0) || !std::isfinite(s))
            throw std::runtime_error("model mismatch: invalid sigma");
    if (model.trained_dim != 0 && model.trained_dim != 1)
        throw std::runtime_error("model mismatch: invalid trained_dim");
    return model;
}

PointCloud read_points_csv(std::istream& in) {
    std::vector<double> coords;
    std::size_t dim = 0;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r,") == std::string::npos) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                std::size_t used = 0;
                const double v = std::stod(cell, &used);
                while (used < cell.size() &&
                       (cell[used] == ' ' || cell[used] == '\t' || cell[used] == '\r'))
                    ++used;
                if (used != cell.size()) throw std::invalid_argument(cell);
                row.push_back(v);
            } catch (const std::exception&) {
                throw std::runtime_error("csv line " + std::to_string(lineno) +
                                         ": bad number '" + cell + "'");
            }
        }
        if (dim == 0) dim = row.size();
        if (row.size() != dim)
            throw std::runtime_error("csv line " + std::to_string(lineno) +
                                     ": inconsistent dimensions");
        coords.insert(coords.end(), row.begin(), row.end());
    }
    if (dim == 0) throw std::runtime_error("empty input");
    return PointCloud(std::move(coords), dim);
}

void write_points_csv(std::ostream& out, const PointCloud& cloud) {
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const auto p = cloud.point(i);
        for (std::size_t k = 0; k < p.size(); ++k) {
            if (k) out << ",";
            out << format_double(p[k]);
        }
        out << "\n";
    }
}

namespace {

// Next token after whitespace and '#' comments in a PGM header.
std::string pgm_token(std::istream& in) {
    std::string token;
    int ch;
    while ((ch = in.get()) != EOF) {
        if (ch == '#') {
            while (ch != EOF && ch != '\n') ch = in.get();
        } else if (!std::isspace(ch)) {
            token.push_back(static_cast<char>(ch));
            while ((ch = in.peek()) != EOF && !std::isspace(ch)) {
                token.push_back(static_cast<char>(in.get()));
            }
            return token;
        }
    }
    throw std::runtime_error("truncated pgm header");
}

unsigned long pgm_number(std::istream& in) {
    const std::string tok = pgm_token(in);
    try {
        std::size_t used = 0;
        const unsigned long v = std::stoul(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("bad pgm header token '" + tok + "'");
    }
}

}  // namespace

ScalarGrid read_pgm(std::istream& in) {
    const std::string magic = pgm_token(in);
    if (magic != "P2" && magic != "P5") throw std::runtime_error("not a P2/P5 pgm file");
    const unsigned long cols = pgm_number(in);
    const unsigned long rows = pgm_number(in);
    const unsigned long maxval = pgm_number(in);
    if (cols == 0 || rows == 0) throw std::runtime_error("empty input");
    if (maxval == 0 || maxval > 65535) throw std::runtime_error("pgm maxval out of range");

    std::vector<double> values;
    values.reserve(rows * cols);
    if (magic == "P2") {
        for (std::size_t i = 0; i < rows * cols; ++i) {
            const unsigned long v = pgm_number(in);
            if (v > maxval) throw std::runtime_error("pgm sample exceeds maxval");
            values.push_back(static_cast<double>(v));
        }
    } else {
        // Single whitespace byte separates the header from binary samples.
        in.get();
        const bool wide = maxval > 255;
        for (std::size_t i = 0; i < rows * cols; ++i) {
            const int hi = in.get();
            if (hi == EOF) throw std::runtime_error("truncated pgm data");
            unsigned long v = static_cast<unsigned long>(hi);
            if (wide) {
                const int lo = in.get();
                if (lo == EOF) throw std::runtime_error("truncated pgm data");
                v = (v << 8) | static_cast<unsigned long>(lo);
            }
            if (v > maxval) throw std::runtime_error("pgm sample exceeds maxval");
            values.push_back(static_cast<double>(v));
        }
    }
    return ScalarGrid(rows, cols, std::move(values));
}

void write_pgm_p5(std::ostream& out, const ScalarGrid& grid, unsigned maxval) {
    if (maxval == 0 || maxval > 65535) throw std::invalid_argument("pgm maxval out of range");
    out << "P5\n" << grid.cols() << " " << grid.rows() << "\n" << maxval << "\n";
    const bool wide = maxval > 255;
    for (double x : grid.values()) {
        long v = std::lround(x);
        v = std::clamp<long>(v, 0, static_cast<long>(maxval));
        if (wide) out.put(static_cast<char>((v >> 8) & 0xFF));
        out.put(static_cast<char>(v & 0xFF));
    }
}

}  // namespace tdacp
