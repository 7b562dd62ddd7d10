#include "latmove/json_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace latmove {

namespace {

using nlohmann::json;

json parse_or_fail(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) fail(ErrorCode::ParseError, "input is not valid JSON");
    return j;
}

std::vector<Vec> read_point_rows(const json& rows, int d, const char* field) {
    std::vector<Vec> pts;
    for (const auto& row : rows) {
        if (!row.is_array() || static_cast<int>(row.size()) != d)
            fail(ErrorCode::ParseError,
                 std::string("field '") + field + "' holds a row of the wrong length");
        Vec v;
        for (const auto& c : row) {
            if (!c.is_number_integer())
                fail(ErrorCode::ParseError,
                     std::string("field '") + field + "' holds a non-integer coordinate");
            v.push_back(Int(c.get<long long>()));
        }
        pts.push_back(std::move(v));
    }
    return pts;
}

std::string points_to_json_array(const std::vector<Vec>& vs) {
    std::string out = "[";
    for (std::size_t i = 0; i < vs.size(); ++i) {
        if (i) out += ',';
        out += '[';
        for (std::size_t c = 0; c < vs[i].size(); ++c) {
            if (c) out += ',';
            out += vs[i][c].str();
        }
        out += ']';
    }
    out += ']';
    return out;
}

}  // namespace

Polytope parse_polytope_json(const std::string& text, bool canonicalize) {
    json j = parse_or_fail(text);
    if (!j.contains("dim") || !j["dim"].is_number_integer())
        fail(ErrorCode::ParseError, "missing integer field 'dim'");
    if (!j.contains("vertices") || !j["vertices"].is_array())
        fail(ErrorCode::ParseError, "missing array field 'vertices'");
    const int d = j["dim"].get<int>();
    if (d < kMinDim || d > kMaxDim) fail(ErrorCode::ParseError, "field 'dim' out of range");
    std::vector<Vec> pts = read_point_rows(j["vertices"], d, "vertices");
    if (pts.empty()) fail(ErrorCode::ParseError, "field 'vertices' is empty");

    Polytope p = convex_hull(pts, d);
    if (!canonicalize) {
        if (!std::is_sorted(pts.begin(), pts.end()))
            fail(ErrorCode::ParseError, "field 'vertices' is not sorted; pass --canonicalize");
        if (p.vertices() != pts)
            fail(ErrorCode::ParseError,
                 "field 'vertices' lists non-extreme or duplicate points; pass --canonicalize");
    }
    return p;
}

std::string polytope_to_json(const Polytope& p) {
    return "{\"dim\":" + std::to_string(p.dim_ambient()) +
           ",\"vertices\":" + points_to_json_array(p.vertices()) + "}";
}

std::vector<Vec> parse_points_json(const std::string& text, int& dim_out) {
    json j = parse_or_fail(text);
    if (!j.contains("dim") || !j["dim"].is_number_integer())
        fail(ErrorCode::ParseError, "missing integer field 'dim'");
    const char* field = j.contains("points") ? "points" : "vertices";
    if (!j.contains(field) || !j[field].is_array())
        fail(ErrorCode::ParseError, "missing array field 'points'");
    dim_out = j["dim"].get<int>();
    if (dim_out < kMinDim || dim_out > kMaxDim)
        fail(ErrorCode::ParseError, "field 'dim' out of range");
    return read_point_rows(j[field], dim_out, field);
}

MoveTrace parse_trace_json(const std::string& text) {
    json j = parse_or_fail(text);
    if (!j.contains("start")) fail(ErrorCode::ParseError, "missing field 'start'");
    if (!j.contains("moves") || !j["moves"].is_array())
        fail(ErrorCode::ParseError, "missing array field 'moves'");
    MoveTrace t;
    t.start = parse_polytope_json(j["start"].dump());
    for (const auto& m : j["moves"]) {
        if (!m.contains("kind") || !m.contains("point"))
            fail(ErrorCode::ParseError, "move without 'kind' or 'point'");
        std::string kind = m["kind"].get<std::string>();
        MoveKind mk;
        if (kind == "insert") mk = MoveKind::Insert;
        else if (kind == "delete") mk = MoveKind::Delete;
        else fail(ErrorCode::ParseError, "field 'kind' must be 'insert' or 'delete'");
        Vec p;
        for (const auto& c : m["point"]) p.push_back(Int(c.get<long long>()));
        t.moves.push_back(Move{mk, std::move(p)});
    }
    return t;
}

std::string point_to_json(const Vec& v) {
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += v[i].str();
    }
    return out + "]";
}

std::string trace_to_json(const MoveTrace& t) {
    std::string out = "{\"start\":" + polytope_to_json(t.start) + ",\"moves\":[";
    for (std::size_t i = 0; i < t.moves.size(); ++i) {
        if (i) out += ',';
        out += std::string("{\"kind\":\"") +
               (t.moves[i].kind == MoveKind::Insert ? "insert" : "delete") +
               "\",\"point\":" + point_to_json(t.moves[i].point) + "}";
    }
    return out + "]}";
}

std::string histogram_to_csv(const Histogram& h) {
    std::string out = "canonical_key,count\n";
    for (const auto& [key, count] : h.counts) out += key + "," + std::to_string(count) + "\n";
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::ParseError, "cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorCode::ParseError, "cannot write file: " + path);
    out << content;
}

}  // namespace latmove
