#pragma once

#include "amfst/core.hpp"
#include "amfst/image_io.hpp"
#include "amfst/synth.hpp"
#include "amfst/tracker.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

namespace amfst {

// Query points CSV: header "x,y", one point per row.

inline std::vector<Point2> parse_queries_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw InvalidInput("queries file is empty");
    }
    line.erase(std::remove_if(line.begin(), line.end(), [](char c) { return c == ' ' || c == '\r'; }), line.end());
    if (line != "x,y") {
        throw InvalidInput("queries file must start with the header 'x,y'");
    }
    std::vector<Point2> points;
    int                 row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        std::istringstream fields(line);
        Point2             p;
        char               comma = 0;
        if (!(fields >> p.x >> comma >> p.y) || comma != ',' || !p.finite()) {
            throw InvalidInput("malformed query point on line " + std::to_string(row));
        }
        points.push_back(p);
    }
    return points;
}

inline std::vector<Point2> read_queries_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw MissingInput("no such file: " + path.string());
    }
    return parse_queries_csv(in);
}

inline std::string format_queries_csv(std::span<const Point2> points) {
    std::ostringstream out;
    out << "x,y\n" << std::setprecision(17);
    for (const Point2& p : points) {
        out << p.x << ',' << p.y << '\n';
    }
    return out.str();
}

// Trajectory JSON ----------------------------------------------------------------------------------------

struct Trajectory {
    nlohmann::json                config = nlohmann::json::object();
    std::vector<TrackOutputFrame> frames;
};

inline nlohmann::json trajectory_to_json(const Trajectory& trajectory) {
    nlohmann::json frames = nlohmann::json::array();
    for (const auto& frame : trajectory.frames) {
        nlohmann::json points = nlohmann::json::array();
        for (const auto& p : frame.points) {
            points.push_back({{"x", p.position.x},
                              {"y", p.position.y},
                              {"occluded", p.occluded},
                              {"source_frame", p.source_frame ? nlohmann::json(*p.source_frame) : nlohmann::json()}});
        }
        frames.push_back({{"t", frame.frame_id}, {"points", std::move(points)}});
    }
    return {{"version", kFormatVersion}, {"config", trajectory.config}, {"frames", std::move(frames)}};
}

inline Trajectory trajectory_from_json(const nlohmann::json& j) {
    Trajectory trajectory;
    trajectory.config = j.value("config", nlohmann::json::object());
    for (const auto& frame : j.at("frames")) {
        TrackOutputFrame out{frame.at("t").get<FrameId>(), {}};
        for (const auto& p : frame.at("points")) {
            TrackedPoint point{{p.at("x").get<double>(), p.at("y").get<double>()}, p.value("occluded", false), {}};
            if (p.contains("source_frame") && !p.at("source_frame").is_null()) {
                point.source_frame = p.at("source_frame").get<FrameId>();
            }
            out.points.push_back(point);
        }
        trajectory.frames.push_back(std::move(out));
    }
    return trajectory;
}

inline nlohmann::json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw MissingInput("no such file: " + path.string());
    }
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidInput("cannot parse " + path.string() + ": " + e.what());
    }
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << text;
}

inline void write_json_file(const std::filesystem::path& path, const nlohmann::json& j) {
    write_text_file(path, j.dump(2) + "\n");
}

}  // namespace amfst
