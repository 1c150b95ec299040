#include "pathforge/cli_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "pathforge/error.hpp"
#include "pathforge/number_format.hpp"

namespace pathforge::io {

using geometry::Vec3;
using nlohmann::json;

namespace {

[[noreturn]] void field_error(const std::string& field, const std::string& what) {
    throw Error(ErrorCode::ParseError, "field '" + field + "': " + what);
}

json parse_json(std::string_view text, std::string_view what) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        // Translate the byte offset into a line/column pair for the message.
        std::size_t line = 1;
        std::size_t col = 1;
        const std::size_t limit = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        for (std::size_t i = 0; i < limit; ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw Error(ErrorCode::ParseError, std::string(what) + " is not valid JSON at line " + std::to_string(line) +
                                               ", column " + std::to_string(col));
    }
}

const json& require(const json& obj, const std::string& key, const std::string& path) {
    const auto it = obj.find(key);
    if (it == obj.end()) {
        field_error(path + key, "missing");
    }
    return *it;
}

double as_number(const json& j, const std::string& field) {
    if (!j.is_number()) {
        field_error(field, "expected a number");
    }
    const double v = j.get<double>();
    if (!std::isfinite(v)) {
        field_error(field, "must be finite");
    }
    return v;
}

Vec3 as_vec3(const json& j, const std::string& field) {
    if (!j.is_array() || j.size() != 3) {
        field_error(field, "expected an array of 3 numbers");
    }
    return {as_number(j[0], field + "[0]"), as_number(j[1], field + "[1]"), as_number(j[2], field + "[2]")};
}

geometry::UnitQuaternion as_quaternion(const json& j, const std::string& field) {
    if (!j.is_array() || j.size() != 4) {
        field_error(field, "expected [w, x, y, z]");
    }
    try {
        return {as_number(j[0], field + "[0]"), as_number(j[1], field + "[1]"), as_number(j[2], field + "[2]"),
                as_number(j[3], field + "[3]")};
    } catch (const Error& e) {
        if (e.code() == ErrorCode::InvalidArgument) {
            throw Error(ErrorCode::ValidationError, field + ": quaternion must be non-zero");
        }
        throw;
    }
}

void check_format_version(const json& doc, const std::string& what) {
    if (!doc.is_object()) {
        throw Error(ErrorCode::ParseError, what + " must be a JSON object");
    }
    const auto it = doc.find("format_version");
    if (it == doc.end()) {
        field_error("format_version", "missing");
    }
    if (!it->is_number_integer() || it->get<int>() != kFormatVersion) {
        throw Error(ErrorCode::ValidationError,
                    what + ": unsupported format_version (expected " + std::to_string(kFormatVersion) + ")");
    }
}

CalibrationPoints as_calibration(const json& j, const std::string& path) {
    if (!j.is_object()) {
        field_error(path, "expected an object with a, b, c");
    }
    return {as_vec3(require(j, "a", path + "."), path + ".a"), as_vec3(require(j, "b", path + "."), path + ".b"),
            as_vec3(require(j, "c", path + "."), path + ".c")};
}

json vec_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(sep, start);
        out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) {
            break;
        }
        start = pos + 1;
    }
    return out;
}

// Splits CSV text into data lines, checking the version comment and header.
std::vector<std::string_view> csv_body(std::string_view text, std::string_view header, std::string_view what) {
    std::vector<std::string_view> lines;
    for (std::string_view line : split(text, '\n')) {
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        lines.push_back(line);
    }
    while (!lines.empty() && lines.back().empty()) {
        lines.pop_back();
    }
    const std::string version_line = "# format_version=" + std::to_string(kFormatVersion);
    if (lines.size() < 2 || lines[0] != version_line) {
        throw Error(ErrorCode::ParseError, std::string(what) + ": line 1 must read '" + version_line + "'");
    }
    if (lines[1] != header) {
        throw Error(ErrorCode::ParseError, std::string(what) + ": line 2 must be the header '" + std::string(header) + "'");
    }
    return {lines.begin() + 2, lines.end()};
}

}  // namespace

std::string_view to_string(PathKind kind) {
    switch (kind) {
        case PathKind::Linear: return "linear";
        case PathKind::Circular: return "circular";
        case PathKind::Nagata: return "nagata";
    }
    return "unknown";
}

std::size_t waypoint_count(PathKind kind) {
    switch (kind) {
        case PathKind::Linear: return 2;
        case PathKind::Circular: return 3;
        case PathKind::Nagata: return 4;
    }
    return 0;
}

void apply_frame(PathSpec& spec, const CalibrationPoints& points) {
    const geometry::FrameTransform to_frame = geometry::invert(geometry::frame_from_three_points(points.a, points.b, points.c));
    for (Vec3& w : spec.waypoints) {
        w = geometry::transform_point(to_frame, w);
    }
    const geometry::UnitQuaternion r{Eigen::Quaterniond(to_frame.rotation())};
    spec.start_orientation = r * spec.start_orientation;
    spec.end_orientation = r * spec.end_orientation;
}

PathSpec parse_path_spec(std::string_view text) {
    const json doc = parse_json(text, "path spec");
    check_format_version(doc, "path spec");

    PathSpec spec;
    const json& kind = require(doc, "kind", "");
    if (!kind.is_string()) {
        field_error("kind", "expected a string");
    }
    const std::string k = kind.get<std::string>();
    if (k == "linear") {
        spec.kind = PathKind::Linear;
    } else if (k == "circular") {
        spec.kind = PathKind::Circular;
    } else if (k == "nagata") {
        spec.kind = PathKind::Nagata;
    } else {
        throw Error(ErrorCode::ValidationError, "kind must be linear, circular or nagata, got '" + k + "'");
    }

    const json& wps = require(doc, "waypoints", "");
    if (!wps.is_array()) {
        field_error("waypoints", "expected an array");
    }
    for (std::size_t i = 0; i < wps.size(); ++i) {
        spec.waypoints.push_back(as_vec3(wps[i], "waypoints[" + std::to_string(i) + "]"));
    }
    if (spec.waypoints.size() != waypoint_count(spec.kind)) {
        throw Error(ErrorCode::ValidationError, k + " path needs " + std::to_string(waypoint_count(spec.kind)) +
                                                    " waypoints, got " + std::to_string(spec.waypoints.size()));
    }

    spec.step = as_number(require(doc, "step", ""), "step");
    if (!(spec.step > 0.0)) {
        throw Error(ErrorCode::ValidationError, "step must be positive");
    }

    if (const auto it = doc.find("orientation"); it != doc.end()) {
        if (!it->is_object()) {
            field_error("orientation", "expected an object with start and end");
        }
        spec.start_orientation = as_quaternion(require(*it, "start", "orientation."), "orientation.start");
        spec.end_orientation = as_quaternion(require(*it, "end", "orientation."), "orientation.end");
    }

    if (const auto it = doc.find("frame"); it != doc.end()) {
        spec.frame = as_calibration(*it, "frame");
        apply_frame(spec, *spec.frame);
    }
    return spec;
}

discretize::Trajectory discretize_path(const PathSpec& spec) {
    if (spec.waypoints.size() != waypoint_count(spec.kind)) {
        throw Error(ErrorCode::ValidationError, "waypoint count does not match path kind");
    }
    const auto& w = spec.waypoints;
    std::vector<Vec3> positions;
    switch (spec.kind) {
        case PathKind::Linear: positions = discretize::linear_discretize(w[0], w[1], spec.step); break;
        case PathKind::Circular: positions = discretize::circular_discretize(w[0], w[1], w[2], spec.step); break;
        case PathKind::Nagata: positions = discretize::nagata_discretize(w[0], w[1], w[2], w[3], spec.step); break;
    }
    return discretize::attach_orientations(positions, spec.start_orientation, spec.end_orientation, spec.step);
}

void RunConfig::validate() const {
    for (double g : {gains.kp, gains.ki, gains.kx}) {
        if (!(g > 0.0) || !std::isfinite(g)) {
            throw Error(ErrorCode::ValidationError, "controller gains must be positive");
        }
    }
    if (!(k_s > 0.0)) {
        throw Error(ErrorCode::ValidationError, "k_s must be positive");
    }
    if (!(f_setpoint > 0.0) || !(f_max > f_setpoint)) {
        throw Error(ErrorCode::ValidationError, "need 0 < f_setpoint < f_max");
    }
}

fuzzy::FuzzyPIState RunConfig::controller() const {
    fuzzy::FuzzyPIState state;
    state.params.gains = gains;
    state.params.selection = selection;
    state.params.rules =
        rule_table == RuleTableChoice::Published ? fuzzy::RuleBase::published() : fuzzy::RuleBase::symmetrized();
    return state;
}

RunConfig parse_run_config(std::string_view text, const std::filesystem::path& base_dir) {
    const json doc = parse_json(text, "run config");
    check_format_version(doc, "run config");

    RunConfig cfg;
    if (const auto it = doc.find("gains"); it != doc.end()) {
        if (!it->is_object()) {
            field_error("gains", "expected an object");
        }
        cfg.gains.kp = as_number(require(*it, "kp", "gains."), "gains.kp");
        cfg.gains.ki = as_number(require(*it, "ki", "gains."), "gains.ki");
        cfg.gains.kx = as_number(require(*it, "kx", "gains."), "gains.kx");
    }
    if (const auto it = doc.find("f_setpoint"); it != doc.end()) {
        cfg.f_setpoint = as_number(*it, "f_setpoint");
    }
    if (const auto it = doc.find("f_max"); it != doc.end()) {
        cfg.f_max = as_number(*it, "f_max");
    }
    if (const auto it = doc.find("k_s"); it != doc.end()) {
        cfg.k_s = as_number(*it, "k_s");
    }
    if (const auto it = doc.find("selection"); it != doc.end()) {
        if (!it->is_array() || it->size() != 6) {
            field_error("selection", "expected 6 entries of 0 or 1");
        }
        for (std::size_t i = 0; i < 6; ++i) {
            const json& v = (*it)[i];
            if (!v.is_number_integer() || (v.get<int>() != 0 && v.get<int>() != 1)) {
                field_error("selection[" + std::to_string(i) + "]", "must be 0 or 1");
            }
            cfg.selection[i] = v.get<int>() == 1;
        }
    }
    if (const auto it = doc.find("rule_table"); it != doc.end()) {
        const std::string choice = it->is_string() ? it->get<std::string>() : std::string{};
        if (choice == "published") {
            cfg.rule_table = RuleTableChoice::Published;
        } else if (choice == "symmetrized") {
            cfg.rule_table = RuleTableChoice::Symmetrized;
        } else {
            field_error("rule_table", "must be \"published\" or \"symmetrized\"");
        }
    }
    if (const auto it = doc.find("surface"); it != doc.end()) {
        if (!it->is_string()) {
            field_error("surface", "expected a file path");
        }
        std::filesystem::path p = it->get<std::string>();
        cfg.surface_fixture = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
    }
    cfg.validate();
    return cfg;
}

sim::SurfaceModel parse_surface_csv(std::string_view text, double k_s, double f_max) {
    std::vector<std::pair<double, double>> profile;
    std::size_t line_no = 3;
    for (std::string_view line : csv_body(text, "s,h", "surface profile")) {
        const auto cells = split(line, ',');
        if (cells.size() != 2) {
            throw Error(ErrorCode::ParseError, "surface profile line " + std::to_string(line_no) + ": expected s,h");
        }
        const std::string where = "line " + std::to_string(line_no);
        profile.emplace_back(parse_number(cells[0], where + " s"), parse_number(cells[1], where + " h"));
        ++line_no;
    }
    try {
        return sim::SurfaceModel(std::move(profile), k_s, f_max);
    } catch (const Error& e) {
        throw Error(ErrorCode::ValidationError, std::string("surface profile: ") + e.what());
    }
}

sim::SurfaceModel load_surface(const std::filesystem::path& csv, double k_s, double f_max) {
    return parse_surface_csv(read_text_file(csv), k_s, f_max);
}

sim::SurfaceModel surface_for(const RunConfig& config) {
    if (config.surface_fixture.empty()) {
        return sim::SurfaceModel::flat(0.0, config.k_s, config.f_max);
    }
    return load_surface(config.surface_fixture, config.k_s, config.f_max);
}

void write_trajectory_csv(std::ostream& out, const discretize::Trajectory& traj) {
    out << "# format_version=" << kFormatVersion << '\n' << kTrajectoryHeader << '\n';
    for (std::size_t i = 0; i < traj.samples.size(); ++i) {
        const auto& p = traj.samples[i].position;
        const auto& q = traj.samples[i].orientation;
        out << i << ',' << format_number(p.x()) << ',' << format_number(p.y()) << ',' << format_number(p.z()) << ','
            << format_number(q.w()) << ',' << format_number(q.x()) << ',' << format_number(q.y()) << ','
            << format_number(q.z()) << '\n';
    }
}

discretize::Trajectory parse_trajectory_csv(std::string_view text) {
    discretize::Trajectory traj;
    std::size_t line_no = 3;
    for (std::string_view line : csv_body(text, kTrajectoryHeader, "trajectory")) {
        const auto cells = split(line, ',');
        const std::string where = "trajectory line " + std::to_string(line_no);
        if (cells.size() != 8) {
            throw Error(ErrorCode::ParseError, where + ": expected 8 columns");
        }
        if (parse_number(cells[0], where + " index") != static_cast<double>(traj.samples.size())) {
            throw Error(ErrorCode::ValidationError, where + ": indices must count up from 0");
        }
        double v[7];
        for (std::size_t c = 0; c < 7; ++c) {
            v[c] = parse_number(cells[c + 1], where + " " + std::string(split(kTrajectoryHeader, ',')[c + 1]));
        }
        traj.samples.push_back({Vec3(v[0], v[1], v[2]), geometry::UnitQuaternion(v[3], v[4], v[5], v[6])});
        ++line_no;
    }
    if (traj.samples.size() < 2) {
        throw Error(ErrorCode::ValidationError, "trajectory needs at least two samples");
    }
    return traj;
}

std::string frame_to_json(const CalibrationPoints& points, const geometry::FrameTransform& frame) {
    nlohmann::ordered_json doc;
    doc["format_version"] = kFormatVersion;
    doc["points"] = {{"a", vec_json(points.a)}, {"b", vec_json(points.b)}, {"c", vec_json(points.c)}};
    nlohmann::ordered_json rot = nlohmann::ordered_json::array();
    for (int r = 0; r < 3; ++r) {
        rot.push_back({frame.rotation()(r, 0), frame.rotation()(r, 1), frame.rotation()(r, 2)});
    }
    doc["rotation"] = rot;
    doc["translation"] = vec_json(frame.translation());
    return doc.dump(2) + "\n";
}

CalibrationPoints parse_frame_json(std::string_view text) {
    const json doc = parse_json(text, "frame file");
    check_format_version(doc, "frame file");
    return as_calibration(require(doc, "points", ""), "points");
}

CalibrationPoints parse_calibration_points(std::string_view text) {
    const json doc = parse_json(text, "calibration points");
    check_format_version(doc, "calibration points");
    return as_calibration(doc, "");
}

std::vector<NagataErrorRow> nagata_error_table(double alpha_deg, std::size_t sections, std::size_t samples) {
    if (!(alpha_deg > 0.0 && alpha_deg < 360.0) || sections == 0 || samples == 0) {
        throw Error(ErrorCode::InvalidArgument, "need 0 < alpha < 360, sections >= 1, samples >= 1");
    }
    const double alpha = alpha_deg * std::numbers::pi / 180.0;
    const double section_angle = alpha / static_cast<double>(sections);
    const Vec3 center = Vec3::Zero();
    auto on_arc = [](double phi) { return Vec3(std::cos(phi), std::sin(phi), 0.0); };

    std::vector<NagataErrorRow> rows;
    for (std::size_t s = 0; s < sections; ++s) {
        const double phi0 = section_angle * static_cast<double>(s);
        const discretize::NagataCurve curve = discretize::nagata_prepare(center, on_arc(phi0), on_arc(phi0 + section_angle));
        for (std::size_t i = 0; i <= samples; ++i) {
            const double eta = static_cast<double>(i) / static_cast<double>(samples);
            const Vec3 p = discretize::nagata_eval(curve, eta);
            NagataErrorRow row;
            row.section = s;
            row.eta = eta;
            const Vec3 local = Eigen::AngleAxisd(-phi0, Vec3::UnitZ()) * p;
            row.angle_pct = 100.0 * std::atan2(local.y(), local.x()) / section_angle;
            row.radial_error_pct = 100.0 * (p.norm() - 1.0);
            row.parametric_error_pct = 100.0 * (p - on_arc(phi0 + eta * section_angle)).norm();
            rows.push_back(row);
        }
    }
    return rows;
}

void write_error_table_csv(std::ostream& out, const std::vector<NagataErrorRow>& rows) {
    out << "# format_version=" << kFormatVersion << '\n' << kErrorTableHeader << '\n';
    for (const NagataErrorRow& r : rows) {
        out << r.section << ',' << format_number(r.eta) << ',' << format_number(r.angle_pct) << ','
            << format_number(r.radial_error_pct) << ',' << format_number(r.parametric_error_pct) << '\n';
    }
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw Error(ErrorCode::IoError, "cannot write '" + tmp.string() + "'");
        }
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!out) {
            throw Error(ErrorCode::IoError, "write to '" + tmp.string() + "' failed");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw Error(ErrorCode::IoError, "cannot move output into '" + path.string() + "': " + ec.message());
    }
}

}  // namespace pathforge::io
