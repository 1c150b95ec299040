#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <sstream>

#include "pathforge/cli_io.hpp"
#include "pathforge/error.hpp"

using namespace pathforge;
using namespace pathforge::io;
using geometry::Vec3;

namespace fs = std::filesystem;

namespace {

template <typename F>
ErrorCode code_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::IoError;
}

std::string message_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.what();
    }
    return {};
}

fs::path scratch_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("pathforge_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

int dispatch(std::vector<std::string> args, std::string* out_text = nullptr, std::string* err_text = nullptr) {
    args.insert(args.begin(), "pathforge");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int rc = cli_dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
    if (out_text) *out_text = out.str();
    if (err_text) *err_text = err.str();
    return rc;
}

constexpr const char* kLine = R"({
  "format_version": 1,
  "kind": "linear",
  "waypoints": [[0, 0, 0], [10, 0, 0]],
  "step": 2.5
})";

}  // namespace

TEST_CASE("parse_path_spec: minimal linear spec") {
    const PathSpec spec = parse_path_spec(kLine);
    CHECK(spec.kind == PathKind::Linear);
    REQUIRE(spec.waypoints.size() == 2);
    CHECK(spec.waypoints[1] == Vec3(10, 0, 0));
    CHECK(spec.step == 2.5);
    CHECK(spec.start_orientation == geometry::UnitQuaternion{});
    CHECK_FALSE(spec.frame.has_value());
    CHECK(discretize_path(spec).samples.size() == 5);
}

TEST_CASE("parse_path_spec: waypoint count must match the kind") {
    const char* circ = R"({"format_version": 1, "kind": "circular", "waypoints": [[0,0,0],[1,0,0]], "step": 1})";
    CHECK(code_of([&] { parse_path_spec(circ); }) == ErrorCode::ValidationError);
    const char* nag = R"({"format_version": 1, "kind": "nagata", "waypoints": [[0,0,0],[1,0,0],[0,1,0]], "step": 1})";
    CHECK(code_of([&] { parse_path_spec(nag); }) == ErrorCode::ValidationError);
    const char* bad_kind = R"({"format_version": 1, "kind": "spline", "waypoints": [], "step": 1})";
    CHECK(code_of([&] { parse_path_spec(bad_kind); }) == ErrorCode::ValidationError);
}

TEST_CASE("parse_path_spec: diagnostics name the line or field") {
    const std::string broken = "{\n  \"format_version\": 1,\n  \"kind\": linear\n}";
    CHECK(code_of([&] { parse_path_spec(broken); }) == ErrorCode::ParseError);
    CHECK(message_of([&] { parse_path_spec(broken); }).find("line 3") != std::string::npos);

    const char* typed = R"({"format_version": 1, "kind": "linear", "waypoints": [[0,0,0],[1,"x",0]], "step": 1})";
    CHECK(code_of([&] { parse_path_spec(typed); }) == ErrorCode::ParseError);
    CHECK(message_of([&] { parse_path_spec(typed); }).find("waypoints[1][1]") != std::string::npos);

    const char* no_version = R"({"kind": "linear", "waypoints": [[0,0,0],[1,0,0]], "step": 1})";
    CHECK(code_of([&] { parse_path_spec(no_version); }) == ErrorCode::ParseError);
    const char* future = R"({"format_version": 2, "kind": "linear", "waypoints": [[0,0,0],[1,0,0]], "step": 1})";
    CHECK(code_of([&] { parse_path_spec(future); }) == ErrorCode::ValidationError);
    const char* zero_step = R"({"format_version": 1, "kind": "linear", "waypoints": [[0,0,0],[1,0,0]], "step": 0})";
    CHECK(code_of([&] { parse_path_spec(zero_step); }) == ErrorCode::ValidationError);
}

TEST_CASE("parse_path_spec: a calibration frame re-expresses waypoints in frame coordinates") {
    const char* text = R"({
      "format_version": 1, "kind": "linear", "step": 1,
      "waypoints": [[100, 50, 9.2], [100, 450, 9.2]],
      "orientation": {"start": [1, 0, 0, 0], "end": [1, 0, 0, 0]},
      "frame": {"a": [100, 50, 10], "b": [100, 150, 10], "c": [0, 50, 10]}
    })";
    const PathSpec spec = parse_path_spec(text);
    REQUIRE(spec.frame.has_value());
    // Frame x = world +y, y = world -x, z = world +z, origin (100, 50, 10):
    // p_frame = (p.y - 50, 100 - p.x, p.z - 10).
    CHECK((spec.waypoints[0] - Vec3(0, 0, -0.8)).norm() <= 1e-12);
    CHECK((spec.waypoints[1] - Vec3(400, 0, -0.8)).norm() <= 1e-12);
    // World identity orientation seen from a frame rotated +90 deg about z.
    const auto expect = geometry::UnitQuaternion::from_axis_angle(Vec3::UnitZ(), -M_PI / 2);
    CHECK(geometry::UnitQuaternion::angle_between(spec.start_orientation, expect) <= 1e-12);
}

TEST_CASE("parse_run_config") {
    const RunConfig def = parse_run_config(R"({"format_version": 1})");
    CHECK(def.gains.kx == 0.5);
    CHECK(def.selection[2]);
    CHECK(def.surface_fixture.empty());

    const RunConfig cfg = parse_run_config(
        R"({"format_version": 1, "gains": {"kp": 0.1, "ki": 0.2, "kx": 0.3}, "f_setpoint": 10, "f_max": 20,
            "k_s": 5, "selection": [1,0,1,0,0,0], "rule_table": "symmetrized", "surface": "s.csv"})",
        "/data");
    CHECK(cfg.gains.kp == 0.1);
    CHECK(cfg.f_max == 20.0);
    CHECK(cfg.selection[0]);
    CHECK(cfg.rule_table == RuleTableChoice::Symmetrized);
    CHECK(cfg.surface_fixture == fs::path("/data/s.csv"));

    CHECK(code_of([] { parse_run_config(R"({"format_version": 1, "gains": {"kp": 0, "ki": 1, "kx": 1}})"); }) ==
          ErrorCode::ValidationError);
    CHECK(code_of([] { parse_run_config(R"({"format_version": 1, "f_setpoint": 300})"); }) ==
          ErrorCode::ValidationError);
    CHECK(code_of([] { parse_run_config(R"({"format_version": 1, "selection": [0,0,2,0,0,0]})"); }) ==
          ErrorCode::ParseError);
}

TEST_CASE("surface CSV parsing") {
    const auto s = parse_surface_csv("# format_version=1\ns,h\n0,0\n10,1\n", 50, 200);
    CHECK(s.height(5) == doctest::Approx(0.5));
    CHECK(code_of([] { parse_surface_csv("s,h\n0,0\n", 50, 200); }) == ErrorCode::ParseError);
    CHECK(code_of([] { parse_surface_csv("# format_version=1\ns,h\n0,abc\n", 50, 200); }) == ErrorCode::ParseError);
    CHECK(code_of([] { parse_surface_csv("# format_version=1\ns,h\n1,0\n0,0\n", 50, 200); }) ==
          ErrorCode::ValidationError);
}

TEST_CASE("trajectory CSV round trip is byte-identical") {
    const char* arc = R"({"format_version": 1, "kind": "circular", "step": 0.7,
        "waypoints": [[3.3, 0.1, 2], [0.2, 3.1, 2.5], [-3.1, 0.4, 1.9]],
        "orientation": {"start": [0.3, 0.1, -0.7, 0.2], "end": [-0.1, 0.9, 0.2, 0.4]}})";
    std::ostringstream first;
    write_trajectory_csv(first, discretize_path(parse_path_spec(arc)));
    std::ostringstream second;
    write_trajectory_csv(second, parse_trajectory_csv(first.str()));
    CHECK(first.str() == second.str());
    CHECK(first.str().rfind("# format_version=1\nindex,x,y,z,qw,qx,qy,qz\n0,3.3,0.1,2,", 0) == 0);
}

TEST_CASE("trajectory CSV rejects malformed input") {
    CHECK(code_of([] { parse_trajectory_csv("# format_version=1\nindex,x,y,z,qw,qx,qy,qz\n0,0,0,0,1,0,0,0\n"); }) ==
          ErrorCode::ValidationError);
    CHECK(code_of([] {
              parse_trajectory_csv("# format_version=1\nindex,x,y,z,qw,qx,qy,qz\n0,0,0,0,1,0,0,0\n2,1,0,0,1,0,0,0\n");
          }) == ErrorCode::ValidationError);
    CHECK(code_of([] { parse_trajectory_csv("# format_version=1\nindex,x,y,z\n0,0,0,0\n"); }) ==
          ErrorCode::ParseError);
}

TEST_CASE("frame file round trip keeps the taught points") {
    const CalibrationPoints pts{{1, 2, 3}, {4, 2, 3}, {1, 7, 3}};
    const std::string text = frame_to_json(pts, geometry::frame_from_three_points(pts.a, pts.b, pts.c));
    const CalibrationPoints back = parse_frame_json(text);
    CHECK(back.a == pts.a);
    CHECK(back.b == pts.b);
    CHECK(back.c == pts.c);
}

TEST_CASE("nagata_error_table for a single 90 degree section") {
    const auto rows = nagata_error_table(90.0, 1, 10);
    REQUIRE(rows.size() == 11);
    CHECK(rows.front().radial_error_pct == 0.0);
    CHECK(std::abs(rows.back().radial_error_pct) <= 1e-12);
    CHECK(rows[5].radial_error_pct == doctest::Approx(100.0 * (std::sqrt(1.125) - 1.0)).epsilon(1e-9));
    CHECK(rows[5].angle_pct == doctest::Approx(50.0));
    double max_err = 0.0;
    for (const auto& r : rows) max_err = std::max(max_err, r.radial_error_pct);
    CHECK(max_err == doctest::Approx(6.066).epsilon(1e-3));
    CHECK(code_of([] { nagata_error_table(0.0, 1, 10); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("write_file_atomic replaces the target") {
    const fs::path dir = scratch_dir("atomic");
    write_file_atomic(dir / "a.txt", "one");
    write_file_atomic(dir / "a.txt", "two");
    CHECK(read_text_file(dir / "a.txt") == "two");
    CHECK_FALSE(fs::exists(dir / "a.txt.tmp"));
    CHECK(code_of([&] { read_text_file(dir / "missing.txt"); }) == ErrorCode::IoError);
}

TEST_CASE("cli_dispatch: help, usage errors and module errors") {
    std::string out, err;
    CHECK(dispatch({"--help"}, &out) == 0);
    CHECK(out.find("calibrate") != std::string::npos);
    CHECK(out.find("simulate") != std::string::npos);
    CHECK(dispatch({"simulate", "--help"}, &out) == 0);
    CHECK(out.find("--config") != std::string::npos);
    CHECK(out.find("--out-dir") != std::string::npos);

    CHECK(dispatch({}) != 0);
    CHECK(dispatch({"frobnicate"}) != 0);
    CHECK(dispatch({"calibrate", "--a", "0,0,0", "--b", "1,0,0", "--c", "2,0,0", "--out",
                    (scratch_dir("cli") / "f.json").string()},
                   nullptr, &err) == 2);
    CHECK(err.find("DegenerateFrame") != std::string::npos);
}

TEST_CASE("cli_dispatch: errors subcommand prints the table") {
    std::string out;
    REQUIRE(dispatch({"errors", "--alpha", "90", "--sections", "1"}, &out) == 0);
    CHECK(out.rfind("# format_version=1\nsection,eta,angle_pct,radial_error_pct,parametric_error_pct\n", 0) == 0);
    CHECK(out.find("\n0,0.5,50,6.06601717798") != std::string::npos);
}

TEST_CASE("cli_dispatch: calibrate, discretize and simulate write their files") {
    const fs::path dir = scratch_dir("pipeline");
    write_file_atomic(dir / "line.json", kLine);
    REQUIRE(dispatch({"calibrate", "--a", "0,0,0", "--b", "1,0,0", "--c", "0,1,0", "--out",
                      (dir / "frame.json").string()}) == 0);
    REQUIRE(dispatch({"discretize", "--spec", (dir / "line.json").string(), "--frame", (dir / "frame.json").string(),
                      "--out", (dir / "traj.csv").string()}) == 0);
    CHECK(parse_trajectory_csv(read_text_file(dir / "traj.csv")).samples.size() == 5);
    REQUIRE(dispatch({"simulate", "--trajectory", (dir / "traj.csv").string(), "--out-dir", dir.string()}) == 0);
    CHECK(fs::exists(dir / "open.csv"));
    CHECK(fs::exists(dir / "closed.csv"));
    // --spec and --trajectory are mutually exclusive.
    CHECK(dispatch({"simulate", "--spec", (dir / "line.json").string(), "--trajectory", (dir / "traj.csv").string()}) ==
          2);
}
